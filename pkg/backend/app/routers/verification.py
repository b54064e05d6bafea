from fastapi import APIRouter, Depends

from ..models.game import SweepRequest, VerifyRequest
from ..services.game_service import GameService
from .common import get_game_service, to_http_error
from cnfgame.models import SweepSummary, VerificationReport

router = APIRouter(prefix="/verification", tags=["verification"])


@router.post("/construction", response_model=VerificationReport)
async def verify_construction(
    request: VerifyRequest,
    games: GameService = Depends(get_game_service),
):
    """Uniformity, clause count and F's win against every T behaviour."""
    try:
        return games.verify(request.name, request.k, first_f=request.firstF)
    except Exception as e:
        raise to_http_error(e)


@router.post("/sweep", response_model=SweepSummary)
async def sweep(
    request: SweepRequest,
    games: GameService = Depends(get_game_service),
):
    """Run a T strategy against exhaustive F on instances below its clause threshold."""
    try:
        return games.sweep(request.k, request.pattern, request.scheme, request.clauses, request.seeds, n=request.n)
    except Exception as e:
        raise to_http_error(e)
