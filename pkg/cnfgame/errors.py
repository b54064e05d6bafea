"""
Exception hierarchy for the cnfgame toolkit.

Every error raised on purpose by the library derives from CnfGameError so
callers (the CLI, the HTTP service) can map them to exit codes / status codes.
"""

from typing import Optional, Sequence


class CnfGameError(Exception):
    """Base class for all cnfgame errors."""


class ConfigError(CnfGameError):
    """A configuration value could not be interpreted."""


class InstanceError(CnfGameError):
    """An in-memory game object violates its invariants."""


class InstanceFormatError(CnfGameError):
    """An instance or transcript file could not be parsed."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class LimitExceededError(CnfGameError):
    """A search or enumeration was asked to go beyond its configured bound."""

    def __init__(self, what: str, limit: int, size: int):
        self.what = what
        self.limit = limit
        self.size = size
        super().__init__(f"{what}: size {size} exceeds limit {limit}")


class StrategyError(CnfGameError):
    """A strategy was asked to move from a state its discipline never reaches."""


class IllegalMoveError(CnfGameError):
    """A strategy returned a move that is not legal in the current position."""

    def __init__(self, message: str, transcript_prefix: Sequence[str] = ()):
        self.transcript_prefix = list(transcript_prefix)
        prefix = " ".join(self.transcript_prefix) or "<start>"
        super().__init__(f"{message} (after: {prefix})")


class AuditError(CnfGameError):
    """An invariant audit failed. Signals an implementation bug, not a game outcome."""

    def __init__(self, invariant: str, round_index: Optional[int] = None, detail: str = ""):
        self.invariant = invariant
        self.round_index = round_index
        self.detail = detail
        where = f" at round {round_index}" if round_index is not None else ""
        super().__init__(f"audit failure {invariant}{where}: {detail}".rstrip(": "))
