import sys
from typing import Optional
from loguru import logger

from app.core.config import settings


def configure_logging(level: str, log_file: Optional[str] = None) -> None:
    """Route loguru output to stderr and, optionally, a rotating log file"""
    logger.remove()
    logger.add(sys.stderr, level=level)
    if log_file:
        logger.add(
            log_file,
            rotation=settings.LOG_ROTATION,
            retention=settings.LOG_RETENTION,
            level=level,
            backtrace=True,
            diagnose=True,
        )
