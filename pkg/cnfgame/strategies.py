"""
Strategies for both players.

F: the construction-specific strategies (pairing on xor-pairs, the odd-width
composite, and the chase on the Fibonacci construction).
T: the greedy potential strategy (SQRT2 or PARITY scheme) and the zugzwang
strategy for patterns where T moves last, which keeps a modified CNF ψ, a
normal pool Y, a zugzwang pool Z and a set ζ of xor constraints.

Moves are (variable, bit) pairs. Ties between equally good literals are
always broken by lowest variable index, then positive polarity.
"""

import copy
import logging
import random
from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import combinations
from typing import FrozenSet, Hashable, List, Optional, Tuple

from .cnf import (
    Assignment,
    Cnf,
    Evaluation,
    GameInstance,
    Literal,
    Move,
    Player,
    clause_masks,
    evaluate,
    residual,
)
from .config import settings
from .errors import AuditError, IllegalMoveError, InstanceError, StrategyError
from .models import AuditRecord
from .potential import (
    ONE,
    ZERO,
    PotentialScheme,
    cnf_potential,
    literal_potentials,
    oct_split,
    zugzwang_margin,
)

logger = logging.getLogger(__name__)

MoveChoice = Tuple[int, int]

# Invariant names used in audit records
ROUND_MONOTONE = "round-potential-monotone"
ZUGZWANG_MONOTONE = "zugzwang-potential-monotone"
NORMAL_ROUND_MONOTONE = "normal-round-potential-monotone"
POOL_PARTITION = "pool-partition"
CONSTRAINT_SOUNDNESS = "constraint-soundness"
POTENTIAL_BELOW_ONE = "potential-below-one"

# The T strategy whose potential argument forbids a round-to-round rise under each scheme
MONOTONE_STRATEGIES = {
    PotentialScheme.SQRT2: "t-greedy-sqrt2",
    PotentialScheme.PARITY: "t-greedy-parity",
    PotentialScheme.THREE_HALVES: "t-zugzwang",
}


@dataclass(frozen=True, order=True)
class XorConstraint:
    """(li ⊕ lj), stored with the lower variable first and that literal positive."""

    li: Literal
    lj: Literal

    @classmethod
    def make(cls, li: Literal, lj: Literal) -> "XorConstraint":
        if li.var == lj.var:
            raise InstanceError("xor constraint needs two distinct variables")
        if lj.var < li.var:
            li, lj = lj, li
        if li.negated:
            li, lj = li.negate(), lj.negate()
        return cls(li, lj)

    @property
    def variables(self) -> Tuple[int, int]:
        return self.li.var, self.lj.var

    def partner(self, var: int) -> Literal:
        return self.lj if var == self.li.var else self.li

    def literal_of(self, var: int) -> Literal:
        return self.li if var == self.li.var else self.lj

    def holds(self, assignment: Assignment) -> Optional[bool]:
        a, b = assignment.literal_value(self.li), assignment.literal_value(self.lj)
        if a is None or b is None:
            return None
        return a != b

    def __str__(self) -> str:
        return f"({self.li} ^ {self.lj})"


@dataclass(frozen=True)
class GameState:
    """
    A position, as seen by a player.

    For the plain game (and every strategy except zugzwang) Z and zeta are
    empty and psi is the residual of the instance CNF under the assignment.
    """

    instance: GameInstance
    assignment: Assignment
    psi: Cnf
    Y: FrozenSet[int]
    Z: FrozenSet[int] = frozenset()
    zeta: FrozenSet[XorConstraint] = frozenset()
    history: Tuple[Move, ...] = ()

    @classmethod
    def initial(cls, instance: GameInstance) -> "GameState":
        return cls(
            instance=instance,
            assignment=Assignment(),
            psi=instance.cnf,
            Y=frozenset(range(instance.universe_size)),
        )

    @property
    def to_move(self) -> Player:
        return self.instance.to_move(len(self.history))

    @property
    def last_move(self) -> Optional[Move]:
        return self.history[-1] if self.history else None

    @property
    def is_over(self) -> bool:
        return len(self.history) >= self.instance.universe_size

    def unplayed(self) -> List[int]:
        return [v for v in range(self.instance.universe_size) if v not in self.assignment]

    def outcome(self) -> Evaluation:
        return evaluate(self.instance.cnf, self.assignment)

    def transcript_prefix(self) -> List[str]:
        return [str(m) for m in self.history]

    def check_legal(self, var: int, bit: int) -> None:
        if self.is_over:
            raise IllegalMoveError("game is already over", self.transcript_prefix())
        if not 0 <= var < self.instance.universe_size:
            raise IllegalMoveError(f"x{var} is outside the universe", self.transcript_prefix())
        if var in self.assignment:
            raise IllegalMoveError(f"x{var} is already assigned", self.transcript_prefix())
        if bit not in (0, 1):
            raise IllegalMoveError(f"bit {bit} is not 0 or 1", self.transcript_prefix())

    def play(self, var: int, bit: int) -> "GameState":
        """Apply a move to the plain game state."""
        self.check_legal(var, bit)
        move = Move(self.to_move, var, bit)
        return replace(
            self,
            assignment=self.assignment.assign(var, bit),
            psi=residual(self.psi, move.literal),
            Y=self.Y - {var},
            history=self.history + (move,),
        )


class Strategy:
    """
    A player's policy. The match engine calls next_move on the owner's turns
    and observe after every move (both players'), passing the new state.
    """

    name = "strategy"

    def __init__(self, instance: GameInstance, player: Player):
        self.instance = instance
        self.player = Player(player)
        self.audit_failures: List[AuditRecord] = []

    def next_move(self, state: GameState) -> MoveChoice:
        raise NotImplementedError

    def observe(self, state: GameState, move: Move) -> None:
        pass

    def fork(self) -> "Strategy":
        return copy.deepcopy(self)

    def memo_key(self, state: GameState) -> Optional[Hashable]:
        """Everything beyond the assignment that decides future play, or None if unknown."""
        return None

    def round_view(self, state: GameState) -> Optional[Cnf]:
        """The CNF whose potential is audited at this round boundary, or None."""
        return state.psi

    def record(self, round_index: int, invariant: str, detail: str = "") -> None:
        logger.warning("audit failure %s at round %d: %s", invariant, round_index, detail)
        self.audit_failures.append(AuditRecord(round=round_index, invariant=invariant, detail=detail))


# ==================== F strategies ====================


def _last_t_move(state: GameState) -> Move:
    last = state.last_move
    if last is None or last.player != Player.T:
        raise StrategyError("F's construction strategies only answer a T move")
    return last


def _claim(state: GameState, var: int, bit: int) -> MoveChoice:
    if not 0 <= var < state.instance.universe_size or var in state.assignment:
        raise StrategyError(f"x{var} is not available; state unreachable under this strategy")
    return var, bit


def f_pairing_xor(state: GameState) -> MoveChoice:
    """Answer T's move on one variable of a pair by copying its bit onto the partner."""
    last = _last_t_move(state)
    return _claim(state, last.var ^ 1, last.bit)


def f_odd_strategy(state: GameState) -> MoveChoice:
    """Zero the other fresh variable when T plays one; otherwise pair as on xor-pairs."""
    last = _last_t_move(state)
    k = state.instance.universe_size - 1
    fresh = (k - 1, k)
    if last.var in fresh:
        other = fresh[1] if last.var == fresh[0] else fresh[0]
        return _claim(state, other, 0)
    return f_pairing_xor(state)


def chase_partner(var: int) -> Optional[int]:
    """Pairs of the Fibonacci construction are (1,2), (3,4), ...; x0 is unpaired."""
    if var == 0:
        return None
    return var + 1 if var % 2 else var - 1


def _open_fresh_pair(state: GameState) -> MoveChoice:
    n = state.instance.universe_size
    for low in range(1, n - 1, 2):
        if low not in state.assignment and low + 1 not in state.assignment:
            return low, 0
    # every pair already holds a zero
    unplayed = state.unplayed()
    if not unplayed:
        raise StrategyError("no variable left for F")
    return unplayed[0], 0


def f_chase_strategy(state: GameState) -> MoveChoice:
    """
    Keep a zero in every pair.

    T plays inside a pair with a free partner → zero the partner.
    T plays x0, or returns to the pair F opened → open the lowest fresh pair
    by zeroing its lower variable.
    """
    last = _last_t_move(state)
    partner = chase_partner(last.var)
    if partner is not None and partner < state.instance.universe_size and partner not in state.assignment:
        return partner, 0
    return _open_fresh_pair(state)


class PairingStrategy(Strategy):
    name = "f-pairing"

    def __init__(self, instance: GameInstance, player: Player = Player.F):
        super().__init__(instance, player)

    def next_move(self, state: GameState) -> MoveChoice:
        return f_pairing_xor(state)

    def memo_key(self, state: GameState) -> Optional[Hashable]:
        return state.last_move


class OddStrategy(PairingStrategy):
    name = "f-odd"

    def next_move(self, state: GameState) -> MoveChoice:
        return f_odd_strategy(state)


class ChaseStrategy(PairingStrategy):
    name = "f-chase"

    def next_move(self, state: GameState) -> MoveChoice:
        return f_chase_strategy(state)


# ==================== T strategies ====================


def _best_literal(psi: Cnf, pool, scheme: PotentialScheme, difference: bool) -> Literal:
    potentials = literal_potentials(psi, scheme)
    best: Optional[Literal] = None
    best_value = None
    for var in sorted(pool):
        for lit in (Literal.pos(var), Literal.neg(var)):
            value = potentials.get(lit, ZERO)
            if difference:
                value = value - potentials.get(lit.negate(), ZERO)
            if best is None or value > best_value:
                best, best_value = lit, value
    if best is None:
        raise StrategyError("no unplayed variable to choose from")
    return best


def t_greedy(state: GameState, scheme: PotentialScheme = PotentialScheme.SQRT2) -> MoveChoice:
    """Play the literal of largest potential p(ψ, ℓ) true."""
    lit = _best_literal(state.psi, state.Y, PotentialScheme(scheme), difference=False)
    return lit.var, lit.bit


class GreedyStrategy(Strategy):
    def __init__(self, instance: GameInstance, scheme: PotentialScheme = PotentialScheme.SQRT2,
                 player: Player = Player.T):
        super().__init__(instance, player)
        self.scheme = PotentialScheme(scheme)
        self.name = "t-greedy-sqrt2" if self.scheme == PotentialScheme.SQRT2 else "t-greedy-parity"

    def next_move(self, state: GameState) -> MoveChoice:
        return t_greedy(state, self.scheme)

    def memo_key(self, state: GameState) -> Optional[Hashable]:
        return ()


@lru_cache(maxsize=65536)
def find_zugzwang(psi: Cnf, Y: FrozenSet[int],
                  scheme: PotentialScheme = PotentialScheme.THREE_HALVES) -> Optional[Tuple[Literal, Literal]]:
    """
    First literal pair (ℓi, ℓj) over distinct variables of Y with
    a + e >= 5/4 (b + d) + 1/2 (c + f + g + h), or None.

    Pairs i < j are scanned lexicographically, polarities (+,+), (+,-), (-,+).
    Complementing both literals leaves the condition unchanged, so (-,-) is skipped.
    """
    scheme = PotentialScheme(scheme)
    for i, j in combinations(sorted(Y), 2):
        for neg_i, neg_j in ((False, False), (False, True), (True, False)):
            li, lj = Literal(i, neg_i), Literal(j, neg_j)
            if zugzwang_margin(oct_split(psi, li, lj, scheme)) >= ZERO:
                return li, lj
    return None


def apply_zugzwang(state: GameState, li: Literal, lj: Literal,
                   scheme: PotentialScheme = PotentialScheme.THREE_HALVES,
                   audit: bool = True) -> GameState:
    """
    Set (ℓi, ℓj) aside: T will later answer F's move on either with the opposite value.

    Clauses holding ℓi and ℓj, or ~ℓi and ~ℓj, are dropped (the constraint
    satisfies them); the four literals are stripped from every other clause.
    """
    if li.var not in state.Y or lj.var not in state.Y or li.var == lj.var:
        raise StrategyError(f"zugzwang pair {li}, {lj} is not two distinct Y variables")
    ni, nj = li.negate(), lj.negate()
    clauses = []
    for clause in state.psi:
        if (li in clause and lj in clause) or (ni in clause and nj in clause):
            continue
        clauses.append(clause.without(li, ni, lj, nj))
    psi = Cnf(tuple(clauses))

    if audit:
        before, after = cnf_potential(state.psi, scheme), cnf_potential(psi, scheme)
        if after > before:
            raise AuditError(ZUGZWANG_MONOTONE, detail=f"potential rose from {before} to {after} on {li}, {lj}")

    return replace(
        state,
        psi=psi,
        Y=state.Y - {li.var, lj.var},
        Z=state.Z | {li.var, lj.var},
        zeta=state.zeta | {XorConstraint.make(li, lj)},
    )


def zugzwang_answer(state: GameState) -> Optional[MoveChoice]:
    """If F just played a Z variable, the move that makes its constraint hold."""
    last = state.last_move
    if last is None or last.player != Player.F or last.var not in state.Z:
        return None
    for constraint in state.zeta:
        if last.var in constraint.variables:
            played_true = constraint.literal_of(last.var).value_under(last.bit)
            partner = constraint.partner(last.var)
            # the partner literal takes the opposite truth value
            bit = 1 - partner.bit if played_true else partner.bit
            return partner.var, bit
    raise StrategyError(f"x{last.var} is in Z but in no constraint")


def t_zugzwang_strategy(state: GameState,
                        scheme: PotentialScheme = PotentialScheme.THREE_HALVES,
                        audit: bool = True) -> Tuple[MoveChoice, GameState]:
    """
    One T turn of the zugzwang strategy on T's own view of the game.

    Returns the move and the view after any pairs were set aside. The move
    itself is not applied; the caller observes it like any other move.
    """
    answer = zugzwang_answer(state)
    if answer is not None:
        return answer, state

    while True:
        pair = find_zugzwang(state.psi, state.Y, scheme)
        if pair is None:
            break
        state = apply_zugzwang(state, pair[0], pair[1], scheme, audit=audit)

    lit = _best_literal(state.psi, state.Y, scheme, difference=True)
    return (lit.var, lit.bit), state


def _all_hold(compiled: List[Tuple[int, int]], values: int) -> bool:
    return all((pos & values) or (neg & ~values) for pos, neg in compiled)


class ZugzwangStrategy(Strategy):
    """
    T's strategy when T moves last. Keeps its own view (ψ, Y, Z, ζ) and
    audits the pool, soundness and potential invariants at every round boundary.
    """

    name = "t-zugzwang"

    def __init__(self, instance: GameInstance, player: Player = Player.T,
                 audit: bool = True, strict: bool = False):
        super().__init__(instance, player)
        self.scheme = PotentialScheme.THREE_HALVES
        self.audit = audit
        self.strict = strict
        self.view = GameState.initial(instance)
        self.rounds = 0
        self.initially_below_one: Optional[bool] = None
        self._normal_round_start = None
        self._phi = clause_masks(instance.cnf)

    def _fail(self, invariant: str, detail: str) -> None:
        if self.strict:
            raise AuditError(invariant, self.rounds, detail)
        self.record(self.rounds, invariant, detail)

    def next_move(self, state: GameState) -> MoveChoice:
        if state.assignment != self.view.assignment:
            raise StrategyError("zugzwang strategy missed a move")

        answering = zugzwang_answer(self.view) is not None
        if not answering:
            self.rounds += 1
            if self.audit:
                self._audit_boundary()

        try:
            move, self.view = t_zugzwang_strategy(self.view, self.scheme, audit=self.audit)
        except AuditError as e:
            if self.strict:
                raise
            self.record(self.rounds, e.invariant, e.detail)
            move, self.view = t_zugzwang_strategy(self.view, self.scheme, audit=False)

        if not answering:
            self._normal_round_start = cnf_potential(self.view.psi, self.scheme)
        return move

    def observe(self, state: GameState, move: Move) -> None:
        view = self.view
        assignment = view.assignment.assign(move.var, move.bit)
        history = view.history + (move,)
        if move.var in view.Y:
            self.view = replace(view, assignment=assignment, history=history,
                                psi=residual(view.psi, move.literal), Y=view.Y - {move.var})
            return
        if move.var in view.Z and move.player == Player.T:
            # T's answer closes the constraint holding both variables
            constraint = next(c for c in view.zeta if move.var in c.variables)
            self.view = replace(view, assignment=assignment, history=history,
                                Z=view.Z - set(constraint.variables), zeta=view.zeta - {constraint})
            return
        self.view = replace(view, assignment=assignment, history=history)

    def round_view(self, state: GameState) -> Optional[Cnf]:
        if zugzwang_answer(self.view) is not None:
            return None
        return self.view.psi

    # ==================== Audits ====================

    def _audit_boundary(self) -> None:
        view = self.view
        psi_potential = cnf_potential(view.psi, self.scheme)

        if self._normal_round_start is not None and psi_potential > self._normal_round_start:
            self._fail(NORMAL_ROUND_MONOTONE,
                       f"potential rose from {self._normal_round_start} to {psi_potential}")
        self._normal_round_start = None

        unplayed = frozenset(v for v in range(self.instance.universe_size) if v not in view.assignment)
        zeta_vars = frozenset(v for c in view.zeta for v in c.variables)
        if (view.Y & view.Z or view.Y | view.Z != unplayed or not view.psi.variables() <= view.Y
                or zeta_vars != view.Z or len(view.Z) % 2):
            self._fail(POOL_PARTITION, f"Y={sorted(view.Y)} Z={sorted(view.Z)} unplayed={sorted(unplayed)}")

        # measured at T's first turn, after any opening F move
        if self.initially_below_one is None:
            self.initially_below_one = psi_potential < ONE
        elif self.initially_below_one and psi_potential >= ONE:
            self._fail(POTENTIAL_BELOW_ONE, f"p(psi) = {psi_potential}")

        free = sorted(view.Y | view.Z)
        if len(free) <= settings.AUDIT_EXHAUSTIVE_LIMIT:
            counterexample = self._soundness_counterexample(free)
            if counterexample is not None:
                self._fail(CONSTRAINT_SOUNDNESS, f"psi and zeta hold but phi fails at {counterexample:b}")

    def _soundness_counterexample(self, free: List[int]) -> Optional[int]:
        view = self.view
        played = sum(1 << v for v, b in view.assignment.items() if b)
        psi = clause_masks(view.psi)
        zeta = [(c.li, c.lj) for c in view.zeta]
        for bits in range(2 ** len(free)):
            values = played
            for index, var in enumerate(free):
                if bits >> index & 1:
                    values |= 1 << var
            if not _all_hold(psi, values):
                continue
            if not all(li.value_under(values >> li.var & 1) != lj.value_under(values >> lj.var & 1)
                       for li, lj in zeta):
                continue
            if not _all_hold(self._phi, values):
                return values
        return None


class RandomStrategy(Strategy):
    def __init__(self, instance: GameInstance, player: Player, seed: int = 0):
        super().__init__(instance, player)
        self.seed = seed
        self.name = f"random:{seed}"
        self.rng = random.Random(seed)

    def next_move(self, state: GameState) -> MoveChoice:
        unplayed = state.unplayed()
        if not unplayed:
            raise StrategyError("no variable left")
        return self.rng.choice(unplayed), self.rng.randint(0, 1)
