from typing import Optional
from fastapi import APIRouter, HTTPException
from loguru import logger

from app.core.errors import InputError, InvariantViolation
from app.models.polyhedral import PolyhedralComplex
from app.models.schemas import (
    BettiRequest, BettiTablePayload, ChainComplexPayload, ComplexPayload, GenerateRequest,
    HomologyPayload, InfoPayload, PrintResponse, ValidationReportPayload,
)
from app.models.sheaf import CellSheaf
from app.services.pipeline_service import pipeline_service

router = APIRouter()


def _translate(action: str, e: Exception) -> HTTPException:
    """InputError -> 400, everything else -> 500"""
    if isinstance(e, HTTPException):
        return e
    if isinstance(e, InputError):
        logger.warning(f"Rejected {action} request: {e}")
        return HTTPException(status_code=400, detail=f"Error in {action}: {str(e)}")
    if isinstance(e, InvariantViolation):
        logger.error(f"Invariant violated during {action}: {e}")
    else:
        logger.exception(f"Unexpected error during {action}")
    return HTTPException(status_code=500, detail=f"Error in {action}: {str(e)}")


def _custom_sheaf(pc: PolyhedralComplex, request: BettiRequest) -> Optional[CellSheaf]:
    if request.sheaf_data is None:
        return None
    return pipeline_service.load_sheaf(pc, request.sheaf_data)


@router.post("/generate", response_model=ComplexPayload)
async def generate(request: GenerateRequest):
    """Build a cube, Bergman fan or tropical hypersurface"""
    try:
        logger.info(f"Received generate request for a {request.kind.value} complex")
        pc = pipeline_service.generate(request)
        return ComplexPayload.from_complex(pc)
    except Exception as e:
        raise _translate("generate", e)


@router.post("/betti", response_model=BettiTablePayload)
async def betti(request: BettiRequest):
    """Betti numbers of one (co)sheaf complex, or the table over all p"""
    try:
        logger.info(f"Received betti request: {request.sheaf.value if request.sheaf else 'hand-built'} "
                    f"/ {request.variant.value}")
        pc = request.complex.to_complex()
        return pipeline_service.betti(pc, request.sheaf, request.variant, p=request.p, all_p=request.all_p,
                                      sheaf=_custom_sheaf(pc, request))
    except Exception as e:
        raise _translate("betti", e)


@router.post("/print", response_model=PrintResponse)
async def print_complex(request: BettiRequest):
    try:
        pc = request.complex.to_complex()
        text = pipeline_service.print_complex(pc, request.sheaf, request.p, request.variant,
                                              _custom_sheaf(pc, request))
        return PrintResponse(text=text)
    except Exception as e:
        raise _translate("print", e)


@router.post("/chain", response_model=ChainComplexPayload)
async def chain(request: BettiRequest):
    """Export the assembled (co)chain complex"""
    try:
        pc = request.complex.to_complex()
        cc = pipeline_service.chain_complex(pc, request.sheaf, request.p, request.variant,
                                            _custom_sheaf(pc, request))
        return ChainComplexPayload.from_chain_complex(cc)
    except Exception as e:
        raise _translate("chain", e)


@router.post("/homology", response_model=HomologyPayload)
async def homology(payload: ChainComplexPayload):
    """Betti numbers of an imported chain complex"""
    try:
        return pipeline_service.homology(pipeline_service.load_chain_complex(payload))
    except Exception as e:
        raise _translate("homology", e)


@router.post("/info", response_model=InfoPayload)
async def info(payload: ComplexPayload):
    try:
        return pipeline_service.info(payload.to_complex())
    except Exception as e:
        raise _translate("info", e)


@router.post("/validate", response_model=ValidationReportPayload)
async def validate(payload: ComplexPayload):
    """Sheaf functoriality and d o d = 0 over every constructor"""
    try:
        return pipeline_service.validate(payload.to_complex())
    except Exception as e:
        raise _translate("validate", e)
