import random

import pytest

from cnfgame.cnf import Cnf, GameInstance, Literal, Player, validate_uniform
from cnfgame.constructions import (
    CONSTRUCTIONS,
    add_universal_variable,
    build,
    build_fib_tt,
    build_odd_tf,
    build_xor_pairs,
    expected_clause_count,
    fibonacci,
    reduce_by_first_move,
)
from cnfgame.errors import InstanceError
from cnfgame.harness import random_instance
from cnfgame.models import RandomSpec
from cnfgame.solver import solve


class TestXorPairs:
    @pytest.mark.parametrize("k, count", [(0, 1), (2, 2), (4, 4), (6, 8), (8, 16)])
    def test_clause_count(self, k, count):
        g = build_xor_pairs(k)
        assert len(g.cnf) == count
        assert validate_uniform(g.cnf, k)
        assert g.universe_size == k
        assert g.pattern == "TF"

    def test_zero_width_is_one_empty_clause(self):
        assert build_xor_pairs(0).cnf.has_empty_clause()

    def test_odd_width_rejected(self):
        with pytest.raises(InstanceError):
            build_xor_pairs(3)


class TestOddTf:
    @pytest.mark.parametrize("k, count", [(1, 2), (3, 4), (5, 8), (7, 16)])
    def test_clause_count(self, k, count):
        g = build_odd_tf(k)
        assert len(g.cnf) == count == expected_clause_count("odd-tf", k)
        assert validate_uniform(g.cnf, k)
        assert g.universe_size == k + 1

    def test_fresh_variables(self):
        g = build_odd_tf(3)
        assert g.cnf == Cnf.from_signed([[1, 2, 3], [1, 2, 4], [-1, -2, 3], [-1, -2, 4]])

    def test_even_width_rejected(self):
        with pytest.raises(InstanceError):
            build_odd_tf(2)


class TestFibTt:
    @pytest.mark.parametrize("k", range(11))
    def test_fibonacci_count(self, k):
        g = build_fib_tt(k)
        assert len(g.cnf) == fibonacci(k + 2)
        assert validate_uniform(g.cnf, k)
        assert g.pattern == "TT"

    def test_small_cases(self):
        assert build_fib_tt(1).cnf == Cnf.from_signed([[1], [-1]])
        assert build_fib_tt(2).cnf == Cnf.from_signed([[1, 2], [-1, 2], [-2, 3]])
        assert build_fib_tt(2).universe_size == 3

    def test_fibonacci(self):
        assert [fibonacci(n) for n in range(1, 9)] == [1, 1, 2, 3, 5, 8, 13, 21]

    def test_registry(self):
        assert set(CONSTRUCTIONS) == {"xor-pairs", "odd-tf", "fib-tt"}
        assert build("fib-tt", 4) == build_fib_tt(4)
        with pytest.raises(InstanceError):
            build("tic-tac-toe", 3)


class TestFirstMoveReductions:
    def test_add_universal_variable(self):
        g = add_universal_variable(build_xor_pairs(2))
        assert g.universe_size == 3
        assert (g.first, g.last) == (Player.F, Player.F)
        assert len(g.cnf) == 2
        assert validate_uniform(g.cnf, 3)
        assert solve(g).winner == Player.F

    def test_add_universal_variable_needs_t_first(self):
        g = GameInstance(Cnf(), 2, Player.F, Player.T)
        with pytest.raises(InstanceError):
            add_universal_variable(g)

    def test_reduce_undoes_fresh_zero(self):
        base = build_xor_pairs(4)
        lifted = add_universal_variable(base)
        reduced = reduce_by_first_move(lifted, Literal.neg(4))
        assert reduced == base

    def test_reduce_drops_highest_literal_of_untouched_clauses(self):
        g = GameInstance(Cnf.from_signed([[1, 2], [-1, 3], [2, 3]]), 3, Player.F, Player.F)
        reduced = reduce_by_first_move(g, Literal.pos(0))
        # (x0|x1) goes, (~x0|x2) loses ~x0, (x1|x2) loses x2; x1, x2 shift down
        assert reduced.cnf == Cnf.from_signed([[2], [1]])
        assert reduced.universe_size == 2
        assert (reduced.first, reduced.last) == (Player.T, Player.F)

    def test_reduce_needs_f_first_uniform(self):
        with pytest.raises(InstanceError):
            reduce_by_first_move(build_xor_pairs(2), Literal.pos(0))
        g = GameInstance(Cnf.from_signed([[1, 2], [3]]), 3, Player.F, Player.F)
        with pytest.raises(InstanceError):
            reduce_by_first_move(g, Literal.pos(0))

    @pytest.mark.parametrize("seed", range(50))
    def test_f_win_survives_reduction(self, seed):
        spec = RandomSpec(k=2, m=3, n=5, pattern="FF", seed=seed)
        g = random_instance(spec)
        result = solve(g)
        if result.winner != Player.F:
            return
        var, bit = result.principal_move
        reduced = reduce_by_first_move(g, Literal(var, bit == 0))
        assert solve(reduced).winner == Player.F

    @pytest.mark.parametrize("seed", range(50))
    def test_reduction_is_one_narrower(self, seed):
        k = 2 + seed % 3
        pattern, n = ("FF", 2 * k + 1) if seed % 2 else ("FT", 2 * k)
        g = random_instance(RandomSpec(k=k, m=4, n=n, pattern=pattern, seed=seed))
        rng = random.Random(seed)
        lit = Literal(rng.randrange(n), rng.random() < 0.5)
        reduced = reduce_by_first_move(g, lit)
        assert validate_uniform(reduced.cnf, k - 1)
        assert reduced.universe_size == n - 1
        assert reduced.first == Player.T

    @pytest.mark.parametrize("seed", range(50))
    def test_universal_variable_keeps_clause_count(self, seed):
        k = 1 + seed % 3
        pattern, n = ("TF", 2 * k) if seed % 2 else ("TT", 2 * k + 1)
        g = random_instance(RandomSpec(k=k, m=1 + seed % 4, n=n, pattern=pattern, seed=seed))
        lifted = add_universal_variable(g)
        assert len(lifted.cnf) == len(g.cnf)
        assert validate_uniform(lifted.cnf, k + 1)
        assert lifted.universe_size == n + 1
        assert (lifted.first, lifted.last) == (Player.F, g.last)
