from pydantic_settings import BaseSettings
from typing import List, Literal, Optional

class Settings(BaseSettings):
    # Server settings
    HOST: str = "0.0.0.0"
    PORT: int = 8000
    DEBUG: bool = False
    CORS_ORIGINS: List[str] = ["*"]

    # Logging settings
    LOG_LEVEL: str = "INFO"
    LOG_FILE: Optional[str] = "logs/app.log"
    LOG_ROTATION: str = "10 MB"
    LOG_RETENTION: str = "1 week"
    CLI_LOG_LEVEL: str = "WARNING"

    # Matroid settings
    MAX_FLAT_GROUND_SET: int = 12
    MATROID_EXCHANGE_CHECK_LIMIT: int = 8

    # Tropical polynomial settings
    VARIABLE_ORDER: Literal["alphabetical", "appearance"] = "alphabetical"

    class Config:
        env_file = ".env"
        case_sensitive = True

settings = Settings()
