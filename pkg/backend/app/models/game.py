from typing import Optional
from pydantic import BaseModel, Field


class GenerateRequest(BaseModel):
    name: str  # xor-pairs | odd-tf | fib-tt
    k: int = Field(ge=0)
    firstF: bool = False  # lift to the F-first game


class PlayRequest(BaseModel):
    instance: str  # instance file contents
    t: str
    f: str
    audit: Optional[str] = None  # sqrt2 | parity | three-halves


class VerifyRequest(BaseModel):
    name: str
    k: int = Field(ge=0)
    firstF: bool = False


class SweepRequest(BaseModel):
    k: int = Field(ge=0)
    pattern: str = "TF"
    scheme: str
    clauses: Optional[int] = None
    seeds: int = Field(default=100, ge=0)
    n: Optional[int] = None
