"""
Exhaustive oracle for small games.

solve decides the winner under optimal play for both sides; best_response
fixes one side to a strategy and searches the other exhaustively, which only
branches on the opponent's moves and so reaches larger universes.

Positions are keyed by (assigned mask, values mask). Whose turn it is follows
from the number of assigned variables, and the residual CNF from the masks.
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, Hashable, Iterator, List, Optional, Tuple, Union

from .cnf import Assignment, Clause, Cnf, GameInstance, Literal, Player, clause_masks, pattern_from_text
from .config import settings
from .errors import InstanceError, LimitExceededError
from .models import AuditRecord
from .potential import PotentialScheme, cnf_potential
from .strategies import MONOTONE_STRATEGIES, ROUND_MONOTONE, GameState, MoveChoice, Strategy

logger = logging.getLogger(__name__)

# (assigned mask, values mask); values only carries bits of assigned variables
PositionKey = Tuple[int, int]

# Largest arguments enumerate_instances accepts
ENUMERATE_MAX_K = 4
ENUMERATE_MAX_M = 3
ENUMERATE_MAX_N = 6


@dataclass(frozen=True)
class SolveResult:
    winner: Player
    principal_move: Optional[MoveChoice]
    nodes_explored: int
    audit_failures: Tuple[AuditRecord, ...] = ()


def position_key(assignment: Assignment) -> PositionKey:
    assigned = values = 0
    for var, bit in assignment.items():
        assigned |= 1 << var
        values |= bit << var
    return assigned, values


class Solver:
    """
    Memoized minimax over one instance. Keeps its table between calls, so
    repeated queries from the same game (the `optimal` strategy) stay cheap.
    """

    def __init__(self, instance: GameInstance, memoize: bool = True, limit: Optional[int] = None):
        limit = settings.SOLVE_LIMIT if limit is None else limit
        if instance.universe_size > limit:
            raise LimitExceededError("solve", limit, instance.universe_size)
        self.instance = instance
        self.n = instance.universe_size
        self.clauses = clause_masks(instance.cnf)
        self.memo: Optional[Dict[PositionKey, Player]] = {} if memoize else None
        self.nodes = 0
        self._lock = threading.Lock()

    def decided(self, assigned: int, values: int) -> Optional[Player]:
        """T once every clause holds, F once one clause is all false, else None."""
        open_clause = False
        for pos, neg in self.clauses:
            if pos & values or neg & assigned & ~values:
                continue
            if (pos | neg) & ~assigned:
                open_clause = True
            else:
                return Player.F
        return None if open_clause else Player.T

    def mover(self, assigned: int) -> Player:
        return self.instance.to_move(bin(assigned).count("1"))

    def moves(self, assigned: int) -> Iterator[MoveChoice]:
        for var in range(self.n):
            if not assigned >> var & 1:
                yield var, 1
                yield var, 0

    def winner(self, assigned: int, values: int) -> Player:
        with self._lock:
            self.nodes += 1
        decided = self.decided(assigned, values)
        if decided is not None:
            return decided
        key = (assigned, values)
        if self.memo is not None:
            cached = self.memo.get(key)
            if cached is not None:
                return cached

        mover = self.mover(assigned)
        result = mover.other
        for var, bit in self.moves(assigned):
            if self.winner(assigned | 1 << var, values | bit << var) == mover:
                result = mover
                break

        if self.memo is not None:
            with self._lock:
                self.memo[key] = result
        return result

    def solve(self, assignment: Optional[Assignment] = None, workers: int = 1) -> SolveResult:
        assignment = assignment or Assignment()
        for var, _ in assignment.items():
            if not 0 <= var < self.n:
                raise InstanceError(f"x{var} is outside the universe")
        assigned, values = position_key(assignment)
        start = self.nodes
        moves = list(self.moves(assigned))
        principal = moves[0] if moves else None

        decided = self.decided(assigned, values)
        if decided is not None or not moves:
            with self._lock:
                self.nodes += 1
            return SolveResult(decided or Player.T, principal, self.nodes - start)

        mover = self.mover(assigned)
        if workers > 1:
            # every root child is searched so the choice matches the sequential order
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(
                    lambda move: self.winner(assigned | 1 << move[0], values | move[1] << move[0]), moves
                ))
            winning = [move for move, outcome in zip(moves, outcomes) if outcome == mover]
        else:
            winning = []
            for var, bit in moves:
                if self.winner(assigned | 1 << var, values | bit << var) == mover:
                    winning.append((var, bit))
                    break

        with self._lock:
            self.nodes += 1
        if winning:
            return SolveResult(mover, winning[0], self.nodes - start)
        return SolveResult(mover.other, principal, self.nodes - start)


def solve(instance: GameInstance, assignment: Optional[Assignment] = None, memoize: bool = True,
          workers: Optional[int] = None, limit: Optional[int] = None) -> SolveResult:
    """
    Winner of the game under optimal play.

    Args:
        instance: the game
        assignment: start from this partial assignment instead of the empty one
        memoize: keep a transposition table keyed on the position
        workers: threads for the root fan-out (defaults to CNFGAME_WORKERS)
        limit: universe size bound (defaults to CNFGAME_SOLVE_LIMIT)

    Raises:
        LimitExceededError: the universe is larger than the limit
    """
    workers = settings.WORKERS if workers is None else max(1, workers)
    result = Solver(instance, memoize=memoize, limit=limit).solve(assignment, workers=workers)
    logger.info("solved %s game over %d variables: %s wins after %d nodes",
                instance.pattern, instance.universe_size, result.winner.value, result.nodes_explored)
    return result


class OptimalStrategy(Strategy):
    """Plays the solver's principal move."""

    name = "optimal"

    def __init__(self, instance: GameInstance, player: Player):
        super().__init__(instance, player)
        self.solver = Solver(instance)

    def next_move(self, state: GameState) -> MoveChoice:
        move = self.solver.solve(state.assignment).principal_move
        if move is None:
            raise InstanceError("no move left")
        return move

    def fork(self) -> "OptimalStrategy":
        # stateless apart from the shared table
        return self

    def memo_key(self, state: GameState) -> Optional[Hashable]:
        return ()


def best_response(instance: GameInstance, fixed: Strategy, fixed_player: Union[Player, str],
                  audit_scheme: Optional[PotentialScheme] = None, limit: Optional[int] = None) -> SolveResult:
    """
    Winner when fixed_player follows `fixed` and the opponent plays every move.

    The strategy is forked at each opponent branch. With audit_scheme set, T
    fixed and `fixed` the strategy whose argument rests on that scheme, the
    potential of its round view must not rise from one T turn to the next;
    increases are returned as audit failures along with any the strategy
    recorded itself.

    Raises:
        LimitExceededError: the universe is larger than the limit
        IllegalMoveError: the strategy chose an illegal move
    """
    fixed_player = Player(fixed_player)
    limit = settings.BEST_RESPONSE_LIMIT if limit is None else limit
    if instance.universe_size > limit:
        raise LimitExceededError("best_response", limit, instance.universe_size)
    scheme = PotentialScheme(audit_scheme) if audit_scheme is not None else None
    monotone = scheme is not None and fixed.name == MONOTONE_STRATEGIES[scheme]

    memo: Dict[Tuple[Assignment, Hashable], Player] = {}
    failures: Dict[Tuple[int, str, str], AuditRecord] = {}
    nodes = 0
    principal: List[MoveChoice] = []

    def harvest(strategy: Strategy) -> None:
        for record in strategy.audit_failures:
            failures.setdefault((record.round, record.invariant, record.detail), record)
        strategy.audit_failures.clear()

    def search(state: GameState, strategy: Strategy, previous, root: bool = False) -> Player:
        nonlocal nodes
        nodes += 1
        if not state.psi:
            return Player.T
        if state.psi.has_empty_clause():
            return Player.F

        mover = state.to_move
        if monotone and fixed_player == Player.T and mover == Player.T:
            view = strategy.round_view(state)
            if view is not None:
                current = cnf_potential(view, scheme)
                if previous is not None and current > previous:
                    index = sum(1 for m in state.history if m.player == Player.T)
                    record = AuditRecord(round=index, invariant=ROUND_MONOTONE,
                                         detail=f"potential rose from {previous} to {current}")
                    failures.setdefault((record.round, record.invariant, record.detail), record)
                previous = current

        key = None
        extra = strategy.memo_key(state)
        if extra is not None and not root:
            key = (state.assignment, extra)
            if key in memo:
                return memo[key]

        if mover == fixed_player:
            var, bit = strategy.next_move(state)
            harvest(strategy)
            child = state.play(var, bit)
            strategy.observe(child, child.last_move)
            if root:
                principal.append((var, bit))
            result = search(child, strategy, previous)
        else:
            result = fixed_player
            for var in state.unplayed():
                for bit in (1, 0):
                    branch = strategy.fork()
                    child = state.play(var, bit)
                    branch.observe(child, child.last_move)
                    if search(child, branch, previous) == mover:
                        result = mover
                        if root:
                            principal.append((var, bit))
                        break
                if result == mover:
                    break
            if root and not principal and state.unplayed():
                principal.append((state.unplayed()[0], 1))

        if key is not None:
            memo[key] = result
        return result

    winner = search(GameState.initial(instance), fixed, None, root=True)
    audit = tuple(sorted(failures.values(), key=lambda r: (r.round, r.invariant, r.detail)))
    logger.info("best response vs %s (%s fixed): %s wins after %d nodes, %d audit failures",
                fixed.name, fixed_player.value, winner.value, nodes, len(audit))
    return SolveResult(winner, principal[0] if principal else None, nodes, audit)


def all_clauses(k: int, n: int) -> List[Clause]:
    """Every k-literal clause over variables 0..n-1, in canonical order."""
    clauses = []
    for variables in combinations(range(n), k):
        for signs in product((False, True), repeat=k):
            clauses.append(Clause(tuple(Literal(v, s) for v, s in zip(variables, signs))))
    return sorted(clauses)


def enumerate_instances(k: int, m: int, n: int, pattern: Union[str, Tuple[Player, Player]] = "TF") -> Iterator[GameInstance]:
    """
    All k-uniform CNFs of m distinct clauses over n variables, one per clause set.

    Raises:
        LimitExceededError: k, m or n above the enumeration bounds
        InstanceError: n does not fit the pattern's parity
    """
    for what, bound, size in (("k", ENUMERATE_MAX_K, k), ("m", ENUMERATE_MAX_M, m), ("n", ENUMERATE_MAX_N, n)):
        if size > bound:
            raise LimitExceededError(f"enumerate_instances {what}", bound, size)
    first, last = pattern_from_text(pattern) if isinstance(pattern, str) else pattern
    # validates parity before yielding anything
    GameInstance(Cnf(), n, first, last)
    for chosen in combinations(all_clauses(k, n), m):
        yield GameInstance(Cnf(chosen), n, first, last)
