import itertools

import pytest

from cnfgame.cnf import Assignment, Clause, Cnf, GameInstance, Literal, Player
from cnfgame.constructions import build_fib_tt, build_xor_pairs
from cnfgame.errors import IllegalMoveError, LimitExceededError
from cnfgame.harness import random_instance
from cnfgame.models import RandomSpec
from cnfgame.solver import (
    OptimalStrategy,
    Solver,
    all_clauses,
    best_response,
    enumerate_instances,
    position_key,
    solve,
)
from cnfgame.strategies import ChaseStrategy, GameState, GreedyStrategy, RandomStrategy
from cnfgame.potential import PotentialScheme
from tests.conftest import FixedMoveStrategy


def small_random(seed: int, extra: int = 0) -> GameInstance:
    n = 4 + seed % 3
    pattern = "TF" if n % 2 == 0 else "TT"
    if seed % 5 == 0:
        pattern = pattern[::-1] if pattern == "TF" else "FF"
    return random_instance(RandomSpec(k=1 + seed % 3, m=2 + seed % 4 + extra, n=n, pattern=pattern, seed=seed))


class TestSolve:
    def test_contradiction_is_f_win(self, contradiction):
        result = solve(contradiction)
        assert result.winner == Player.F
        assert result.principal_move == (0, 1)

    def test_single_clause_is_t_win(self):
        g = GameInstance(Cnf.from_signed([[1, 2]]), 2, Player.T, Player.F)
        result = solve(g)
        assert result.winner == Player.T
        assert result.principal_move == (0, 1)

    def test_xor_pairs_is_f_win(self):
        assert solve(build_xor_pairs(4)).winner == Player.F

    def test_monotone_pairs_is_f_win(self, monotone_two_pairs):
        assert solve(monotone_two_pairs).winner == Player.F

    def test_terminal_position_has_no_move(self):
        result = solve(build_xor_pairs(0))
        assert result.winner == Player.F
        assert result.principal_move is None

    def test_from_partial_assignment(self):
        g = build_xor_pairs(2)
        # T opened x0=1; F to move copies the bit
        result = solve(g, Assignment({0: 1}))
        assert result.winner == Player.F
        assert result.principal_move == (1, 1)

    def test_position_key(self):
        assert position_key(Assignment({0: 1, 2: 0})) == (0b101, 0b001)

    def test_limit(self, isolated_game_env):
        isolated_game_env.setenv("CNFGAME_SOLVE_LIMIT", "3")
        with pytest.raises(LimitExceededError):
            solve(build_xor_pairs(4))
        with pytest.raises(LimitExceededError):
            solve(GameInstance(Cnf(), 16, Player.T, Player.F), limit=14)

    def test_node_counts_are_deterministic(self):
        g = build_fib_tt(3)
        assert solve(g).nodes_explored == solve(g).nodes_explored

    @pytest.mark.parametrize("seed", range(50))
    def test_memo_agrees_with_plain_search(self, seed):
        g = small_random(seed)
        memo, plain = solve(g), solve(g, memoize=False)
        assert memo.winner == plain.winner
        assert memo.principal_move == plain.principal_move

    @pytest.mark.parametrize("seed", range(10))
    def test_parallel_root_matches_sequential(self, seed):
        g = small_random(seed)
        one, many = solve(g, workers=1), solve(g, workers=3)
        assert (one.winner, one.principal_move) == (many.winner, many.principal_move)

    @pytest.mark.parametrize("seed", range(20))
    def test_clause_order_does_not_matter(self, seed):
        g = small_random(seed)
        shuffled = GameInstance(Cnf(tuple(reversed(g.cnf.clauses))), g.universe_size, g.first, g.last)
        assert solve(g).winner == solve(shuffled).winner

    @pytest.mark.parametrize("seed", range(100))
    def test_adding_a_clause_never_helps_t(self, seed):
        bigger = small_random(seed, extra=1)
        smaller = GameInstance(Cnf(bigger.cnf.clauses[:-1]), bigger.universe_size, bigger.first, bigger.last)
        if solve(smaller).winner == Player.F:
            assert solve(bigger).winner == Player.F

    def test_solver_reuses_table(self):
        solver = Solver(build_fib_tt(3))
        first = solver.solve()
        again = solver.solve()
        assert first.winner == again.winner == Player.F
        assert again.nodes_explored < first.nodes_explored


class TestBestResponse:
    def test_chase_beats_every_t(self):
        g = build_fib_tt(3)
        assert best_response(g, ChaseStrategy(g), Player.F).winner == Player.F

    def test_greedy_beats_every_f(self):
        g = random_instance(RandomSpec(k=4, m=3, n=8, pattern="TF", seed=0))
        result = best_response(g, GreedyStrategy(g, PotentialScheme.SQRT2), Player.T)
        assert result.winner == Player.T

    def test_random_loses_contradiction(self, contradiction):
        assert best_response(contradiction, RandomStrategy(contradiction, Player.T, seed=4), Player.T).winner == Player.F

    @pytest.mark.parametrize("seed", range(5))
    def test_random_t_is_not_audited(self, seed):
        g = random_instance(RandomSpec(k=3, m=6, n=6, pattern="TF", seed=seed))
        result = best_response(g, RandomStrategy(g, Player.T, seed=seed), Player.T, audit_scheme=PotentialScheme.SQRT2)
        assert result.audit_failures == ()

    def test_optimal_matches_solve(self):
        g = build_xor_pairs(2)
        result = best_response(g, OptimalStrategy(g, Player.T), Player.T)
        assert result.winner == solve(g).winner

    def test_illegal_move_reports_prefix(self):
        g = GameInstance(Cnf.from_signed([[2], [3]]), 3, Player.T, Player.T)
        with pytest.raises(IllegalMoveError) as info:
            best_response(g, FixedMoveStrategy(g, Player.T), Player.T)
        assert info.value.transcript_prefix == ["T:x0", "F:x1"]

    def test_limit(self, isolated_game_env):
        isolated_game_env.setenv("CNFGAME_BEST_RESPONSE_LIMIT", "2")
        g = build_xor_pairs(4)
        with pytest.raises(LimitExceededError):
            best_response(g, ChaseStrategy(g), Player.F)


class TestEnumerate:
    def test_single_literal(self):
        instances = list(enumerate_instances(1, 1, 1, "TT"))
        assert [g.cnf for g in instances] == [Cnf.from_signed([[1]]), Cnf.from_signed([[-1]])]

    def test_one_two_clause(self):
        assert len(list(enumerate_instances(2, 1, 2, "TF"))) == 4

    def test_two_clause_count_matches_brute_force(self):
        instances = list(enumerate_instances(2, 2, 3, "TT"))
        naive = set()
        for variables in itertools.permutations(range(3), 2):
            for signs in itertools.product((False, True), repeat=2):
                naive.add(Clause(tuple(Literal(v, s) for v, s in zip(variables, signs))))
        pairs = {frozenset(p) for p in itertools.product(naive, repeat=2) if p[0] != p[1]}
        assert len(instances) == len(pairs) == 66
        assert len({g.cnf.canonical() for g in instances}) == 66

    def test_all_clauses_are_uniform(self):
        assert len(all_clauses(3, 4)) == 4 * 8
        assert all(c.width == 3 for c in all_clauses(3, 4))

    def test_bounds(self):
        with pytest.raises(LimitExceededError):
            list(enumerate_instances(5, 1, 6))
        with pytest.raises(LimitExceededError):
            list(enumerate_instances(2, 1, 8))

    @pytest.mark.parametrize("n", [2, 4])
    def test_every_single_2_clause_is_t_win(self, n):
        instances = list(enumerate_instances(2, 1, n, "TF"))
        assert instances
        assert all(solve(g).winner == Player.T for g in instances)
        assert solve(build_xor_pairs(2)).winner == Player.F
