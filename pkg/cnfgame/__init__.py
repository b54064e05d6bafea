"""cnfgame: the unordered CNF game, its extremal constructions, strategies and an exact oracle."""

from .cnf import Clause, Cnf, GameInstance, Literal, Player, parse_instance, serialize_instance
from .constructions import build, build_fib_tt, build_odd_tf, build_xor_pairs
from .errors import CnfGameError
from .potential import PotentialScheme, Quad
from .solver import best_response, solve

__version__ = "1.0.0"

__all__ = [
    "Clause",
    "Cnf",
    "CnfGameError",
    "GameInstance",
    "Literal",
    "Player",
    "PotentialScheme",
    "Quad",
    "best_response",
    "build",
    "build_fib_tt",
    "build_odd_tf",
    "build_xor_pairs",
    "parse_instance",
    "serialize_instance",
    "solve",
]
