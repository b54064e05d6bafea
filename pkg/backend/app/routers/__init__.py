from .instances import router as instances_router
from .games import router as games_router
from .verification import router as verification_router

__all__ = [
    "instances_router",
    "games_router",
    "verification_router",
]
