from fastapi import APIRouter, Depends, File, Form, HTTPException, UploadFile, status

from ..config import settings
from ..models.game import PlayRequest
from ..services.game_service import GameService
from .common import get_game_service, to_http_error
from cnfgame.models import MatchReport, SolveReport

router = APIRouter(prefix="/games", tags=["games"])


@router.post("/solve", response_model=SolveReport)
async def solve_game(
    file: UploadFile = File(...),
    prune: bool = Form(False),
    games: GameService = Depends(get_game_service),
):
    """
    Decide the winner of an uploaded instance file under optimal play.
    Returns the winner, the principal move and the search size.
    """
    content = await file.read()
    if len(content) > settings.MAX_UPLOAD_BYTES:
        raise HTTPException(
            status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE,
            detail=f"Instance file exceeds {settings.MAX_UPLOAD_BYTES} bytes",
        )
    try:
        text = content.decode("utf-8")
    except UnicodeDecodeError:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail="Instance file is not UTF-8 text")

    try:
        return games.solve(text, prune=prune)
    except Exception as e:
        raise to_http_error(e)


@router.post("/play", response_model=MatchReport)
async def play_game(
    request: PlayRequest,
    games: GameService = Depends(get_game_service),
):
    """Play two named strategies against each other, optionally auditing potentials."""
    try:
        return games.play(request.instance, request.t, request.f, audit=request.audit)
    except Exception as e:
        raise to_http_error(e)
