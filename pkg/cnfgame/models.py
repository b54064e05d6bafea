"""
Report models. Field names are stable: they are the keys of every --json
output and of the HTTP responses.
"""

from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator


class AuditRecord(BaseModel):
    round: int
    invariant: str
    detail: str = ""


class RoundPotential(BaseModel):
    round: int
    scheme: str
    potential: str  # exact, rendered "r + s√2"


class MoveRecord(BaseModel):
    player: str
    variable: int  # 0-indexed
    bit: int


class SolveReport(BaseModel):
    winner: str
    principalMove: Optional[MoveRecord] = None
    nodesExplored: int
    universeSize: int
    clauseCount: int
    pattern: str
    auditFailures: List[AuditRecord] = []


class MatchReport(BaseModel):
    instance: str  # serialized instance
    tStrategy: str
    fStrategy: str
    winner: str
    transcript: str  # serialized transcript
    moves: List[MoveRecord] = []
    auditScheme: Optional[str] = None
    perRoundPotentials: List[RoundPotential] = []
    auditFailures: List[AuditRecord] = []


class VerificationReport(BaseModel):
    name: str
    k: int
    firstPlayer: str = "T"
    clauseCount: int
    expectedClauseCount: int
    uniform: bool
    clauseCountOk: bool
    winner: str
    fStrategy: str
    nodesExplored: int
    auditFailures: List[AuditRecord] = []

    @property
    def green(self) -> bool:
        return self.uniform and self.clauseCountOk and self.winner == "F" and not self.auditFailures


class SweepSummary(BaseModel):
    k: int
    pattern: str
    scheme: str
    clauses: int
    universeSize: int
    tStrategy: str
    threshold: str
    total: int = 0
    tWins: int = 0
    enumerated: int = 0
    randomized: int = 0
    auditFailures: List[AuditRecord] = []
    counterexamples: List[str] = []

    @property
    def green(self) -> bool:
        return self.total > 0 and self.tWins == self.total and not self.auditFailures


class RandomSpec(BaseModel):
    k: int = Field(ge=0)
    m: int = Field(ge=0)
    n: int = Field(ge=0)
    pattern: str = "TF"
    seed: int = 0

    @model_validator(mode="after")
    def check_shape(self) -> "RandomSpec":
        text = self.pattern.replace(".", "").replace("·", "").upper()
        if len(text) != 2 or any(ch not in "TF" for ch in text):
            raise ValueError(f"pattern must be two of T/F, got {self.pattern!r}")
        self.pattern = text
        if self.n < self.k:
            raise ValueError(f"universe n={self.n} is smaller than width k={self.k}")
        if (self.n % 2 == 1) != (text[0] == text[1]):
            raise ValueError(f"universe n={self.n} does not fit pattern {text[0]}...{text[1]}")
        return self

    @property
    def players(self) -> Tuple[str, str]:
        return self.pattern[0], self.pattern[1]


class InstanceReport(BaseModel):
    name: str  # construction name, or "random"
    k: int
    universeSize: int
    clauseCount: int
    pattern: str
    instance: str  # serialized instance
