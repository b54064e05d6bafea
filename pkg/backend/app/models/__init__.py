from .game import GenerateRequest, PlayRequest, VerifyRequest, SweepRequest

__all__ = [
    "GenerateRequest",
    "PlayRequest",
    "VerifyRequest",
    "SweepRequest",
]
