from fastapi import HTTPException, status
from pydantic import ValidationError

from ..services.game_service import GameService
from cnfgame.errors import AuditError, CnfGameError, IllegalMoveError, LimitExceededError


def get_game_service():
    return GameService()


def to_http_error(e: Exception) -> HTTPException:
    """Map a library failure onto the status code the client should see."""
    if isinstance(e, LimitExceededError):
        return HTTPException(status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE, detail=str(e))
    if isinstance(e, (IllegalMoveError, AuditError, ValidationError)):
        return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    if isinstance(e, CnfGameError):
        return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    return HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=f"Request failed: {str(e)}")
