import itertools

import pytest

from cnfgame.cnf import Clause, Cnf, GameInstance, Literal, Player
from cnfgame.strategies import GameState, Strategy


def monotone_pairs_instance(pairs: int) -> GameInstance:
    """
    (x1 ∧ x2) ∨ (x3 ∧ x4) ∨ ... expanded into CNF: one positive clause per
    choice of one variable from each pair, 2^pairs clauses. F wins T···F by
    zeroing the partner of every variable T sets.
    """
    clauses = [
        Clause(tuple(Literal.pos(2 * t + pick) for t, pick in enumerate(choice)))
        for choice in itertools.product((0, 1), repeat=pairs)
    ]
    return GameInstance(Cnf(tuple(clauses)), 2 * pairs, Player.T, Player.F)


class FixedMoveStrategy(Strategy):
    """Always plays the same move; illegal from its second turn on."""

    name = "fixed"

    def __init__(self, instance, player, move=(0, 1)):
        super().__init__(instance, player)
        self.move = move

    def next_move(self, state: GameState):
        return self.move


@pytest.fixture
def monotone_two_pairs():
    return monotone_pairs_instance(2)


@pytest.fixture
def contradiction():
    """((x0) ∧ (~x0)) over a single variable, T first and last."""
    return GameInstance(Cnf.from_signed([[1], [-1]]), 1, Player.T, Player.T)


@pytest.fixture
def isolated_game_env(monkeypatch):
    for key in ("CNFGAME_SOLVE_LIMIT", "CNFGAME_BEST_RESPONSE_LIMIT", "CNFGAME_WORKERS",
                "CNFGAME_AUDIT_EXHAUSTIVE_LIMIT", "CNFGAME_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
    return monkeypatch
