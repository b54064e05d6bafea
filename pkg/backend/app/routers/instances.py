from fastapi import APIRouter, Depends

from ..models.game import GenerateRequest
from ..services.game_service import GameService
from .common import get_game_service, to_http_error
from cnfgame.models import InstanceReport, RandomSpec

router = APIRouter(prefix="/instances", tags=["instances"])


@router.post("/generate", response_model=InstanceReport)
async def generate_instance(
    request: GenerateRequest,
    games: GameService = Depends(get_game_service),
):
    """Build one of the extremal constructions."""
    try:
        return games.generate(request.name, request.k, first_f=request.firstF)
    except Exception as e:
        raise to_http_error(e)


@router.post("/random", response_model=InstanceReport)
async def random_instance(
    spec: RandomSpec,
    games: GameService = Depends(get_game_service),
):
    """Seeded random k-uniform instance with distinct clauses."""
    try:
        return games.random(spec)
    except Exception as e:
        raise to_http_error(e)
