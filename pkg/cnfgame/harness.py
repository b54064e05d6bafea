"""
Verification driver: match playouts with potential audits, construction
verification against an exhaustive T, seeded random instances and
lower-bound sweeps.
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from math import comb
from typing import Callable, Dict, Hashable, List, Optional, Tuple, Union

from .cnf import (
    Clause,
    Cnf,
    Evaluation,
    GameInstance,
    Literal,
    Player,
    Transcript,
    evaluate,
    parse_instance,
    pattern_from_text,
    serialize_instance,
    serialize_transcript,
    validate_uniform,
)
from .config import settings
from .constructions import add_universal_variable, build, expected_clause_count
from .errors import InstanceError, StrategyError
from .models import AuditRecord, MatchReport, MoveRecord, RandomSpec, RoundPotential, SweepSummary, VerificationReport
from .potential import PotentialScheme, below_threshold, cnf_potential, scheme_threshold
from .solver import ENUMERATE_MAX_K, ENUMERATE_MAX_M, ENUMERATE_MAX_N, OptimalStrategy, best_response, enumerate_instances
from .strategies import (
    MONOTONE_STRATEGIES,
    ROUND_MONOTONE,
    ChaseStrategy,
    GameState,
    GreedyStrategy,
    MoveChoice,
    OddStrategy,
    PairingStrategy,
    RandomStrategy,
    Strategy,
    ZugzwangStrategy,
)

logger = logging.getLogger(__name__)

STRATEGY_NAMES = ["f-pairing", "f-odd", "f-chase", "t-greedy-sqrt2", "t-greedy-parity", "t-zugzwang", "optimal", "random:<seed>"]

_FACTORIES: Dict[str, Callable[[GameInstance, Player], Strategy]] = {
    "f-pairing": lambda g, p: PairingStrategy(g, p),
    "f-odd": lambda g, p: OddStrategy(g, p),
    "f-chase": lambda g, p: ChaseStrategy(g, p),
    "t-greedy-sqrt2": lambda g, p: GreedyStrategy(g, PotentialScheme.SQRT2, p),
    "t-greedy-parity": lambda g, p: GreedyStrategy(g, PotentialScheme.PARITY, p),
    "t-zugzwang": lambda g, p: ZugzwangStrategy(g, p),
    "optimal": lambda g, p: OptimalStrategy(g, p),
}


def make_strategy(name: str, instance: GameInstance, player: Union[Player, str]) -> Strategy:
    """Build a strategy from its CLI name."""
    player = Player(player)
    if name.startswith("random:"):
        try:
            seed = int(name.split(":", 1)[1])
        except ValueError:
            raise StrategyError(f"random strategy needs an integer seed, got {name!r}")
        return RandomStrategy(instance, player, seed)
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise StrategyError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_NAMES)}")
    if name.startswith("t-") and player != Player.T or name.startswith("f-") and player != Player.F:
        raise StrategyError(f"{name} cannot play for {player.value}")
    if name == "t-zugzwang" and instance.last != Player.T:
        raise StrategyError("t-zugzwang needs T to move last")
    return factory(instance, player)


def _as_strategy(strategy: Union[Strategy, str], instance: GameInstance, player: Player) -> Strategy:
    return strategy if isinstance(strategy, Strategy) else make_strategy(strategy, instance, player)


def run_match(instance: GameInstance, t_strategy: Union[Strategy, str], f_strategy: Union[Strategy, str],
              audit_scheme: Optional[PotentialScheme] = None) -> MatchReport:
    """
    Play the game out to the last variable.

    With audit_scheme set, the potential of T's round view is recorded at the
    start of each T turn (and once more after a final F move). A rise between
    consecutive records is an audit failure only for the T strategy whose
    argument rests on that scheme; other strategies just get the record.

    Raises:
        IllegalMoveError: a strategy chose an illegal move; the match is abandoned
    """
    t = _as_strategy(t_strategy, instance, Player.T)
    f = _as_strategy(f_strategy, instance, Player.F)
    scheme = PotentialScheme(audit_scheme) if audit_scheme is not None else None
    monotone = scheme is not None and t.name == MONOTONE_STRATEGIES[scheme]
    players = {Player.T: t, Player.F: f}

    state = GameState.initial(instance)
    potentials: List[RoundPotential] = []
    failures: List[AuditRecord] = []
    previous = None

    def audit_round() -> None:
        nonlocal previous
        view = t.round_view(state)
        if view is None:
            return
        current = cnf_potential(view, scheme)
        index = len(potentials) + 1
        potentials.append(RoundPotential(round=index, scheme=scheme.value, potential=str(current)))
        if monotone and previous is not None and current > previous:
            failures.append(AuditRecord(round=index, invariant=ROUND_MONOTONE,
                                        detail=f"potential rose from {previous} to {current}"))
        previous = current

    while not state.is_over:
        mover = state.to_move
        if scheme is not None and mover == Player.T:
            audit_round()
        var, bit = players[mover].next_move(state)
        state = state.play(var, bit)
        t.observe(state, state.last_move)
        f.observe(state, state.last_move)

    if scheme is not None and state.last_move is not None and state.last_move.player == Player.F:
        audit_round()

    failures.extend(t.audit_failures)
    failures.extend(f.audit_failures)
    winner = Player.T if evaluate(instance.cnf, state.assignment) == Evaluation.SATISFIED else Player.F
    transcript = Transcript(instance, state.history, winner)
    logger.info("match %s vs %s: %s wins", t.name, f.name, winner.value)

    return MatchReport(
        instance=serialize_instance(instance),
        tStrategy=t.name,
        fStrategy=f.name,
        winner=winner.value,
        transcript=serialize_transcript(transcript),
        moves=[MoveRecord(player=m.player.value, variable=m.var, bit=m.bit) for m in state.history],
        auditScheme=scheme.value if scheme is not None else None,
        perRoundPotentials=potentials,
        auditFailures=failures,
    )


# ==================== Construction verification ====================

F_STRATEGIES = {"xor-pairs": "f-pairing", "odd-tf": "f-odd", "fib-tt": "f-chase"}


class FreshZeroStrategy(Strategy):
    """
    F's strategy on add_universal_variable(g): zero the fresh variable first,
    then play `inner` on the original game.
    """

    def __init__(self, instance: GameInstance, inner: Strategy):
        super().__init__(instance, Player.F)
        self.inner = inner
        self.fresh = instance.universe_size - 1
        self.name = f"fresh-zero+{inner.name}"

    def _inner_state(self, state: GameState) -> GameState:
        history = tuple(m for m in state.history if m.var != self.fresh)
        inner = GameState.initial(self.inner.instance)
        for move in history:
            inner = inner.play(move.var, move.bit)
        return inner

    def next_move(self, state: GameState) -> MoveChoice:
        if self.fresh not in state.assignment:
            return self.fresh, 0
        return self.inner.next_move(self._inner_state(state))

    def memo_key(self, state: GameState) -> Optional[Hashable]:
        if self.fresh not in state.assignment:
            return None
        return self.inner.memo_key(self._inner_state(state))


def verify_construction(name: str, k: int, first_f: bool = False) -> VerificationReport:
    """
    Check a construction: k-uniform, the expected clause count, and an F win
    for its strategy against every T behaviour. With first_f the construction
    is lifted to the F-first game by add_universal_variable.
    """
    instance = build(name, k)
    base = instance
    width = k
    strategy = make_strategy(F_STRATEGIES[name], base, Player.F)
    if first_f:
        instance = add_universal_variable(base)
        width = k + 1
        strategy = FreshZeroStrategy(instance, strategy)

    expected = expected_clause_count(name, k)
    uniform = validate_uniform(instance.cnf, width).ok
    result = best_response(instance, strategy, Player.F)

    report = VerificationReport(
        name=name,
        k=k,
        firstPlayer=instance.first.value,
        clauseCount=len(instance.cnf),
        expectedClauseCount=expected,
        uniform=uniform,
        clauseCountOk=len(instance.cnf) == expected,
        winner=result.winner.value,
        fStrategy=strategy.name,
        nodesExplored=result.nodes_explored,
        auditFailures=list(result.audit_failures),
    )
    if not report.green:
        logger.warning("construction %s(k=%d) is red: %s", name, k, report.model_dump())
    return report


# ==================== Random instances ====================


def random_instance(spec: RandomSpec) -> GameInstance:
    """
    m distinct k-uniform clauses over n variables, seeded.

    Raises:
        InstanceError: m exceeds the number of distinct k-clauses over n variables
    """
    possible = comb(spec.n, spec.k) * 2 ** spec.k
    if spec.m > possible:
        raise InstanceError(f"only {possible} distinct {spec.k}-clauses exist over {spec.n} variables, asked for {spec.m}")
    rng = random.Random(spec.seed)
    seen = set()
    clauses: List[Clause] = []
    while len(clauses) < spec.m:
        variables = sorted(rng.sample(range(spec.n), spec.k))
        clause = Clause(tuple(Literal(v, bool(rng.getrandbits(1))) for v in variables))
        if clause in seen:
            continue
        seen.add(clause)
        clauses.append(clause)
    first, last = spec.players
    return GameInstance(Cnf(tuple(clauses)), spec.n, Player(first), Player(last))


# ==================== Lower-bound sweeps ====================

SWEEP_STRATEGIES = MONOTONE_STRATEGIES


def largest_below_threshold(scheme: PotentialScheme, k: int) -> int:
    m = 0
    while below_threshold(m + 1, scheme, k):
        m += 1
    return m


def _fit_parity(n: int, first: Player, last: Player) -> int:
    return n if (n % 2 == 1) == (first == last) else n + 1


def _sweep_item(item: Tuple[str, str, str, str]) -> Tuple[str, bool, List[AuditRecord], str]:
    label, text, strategy_name, scheme = item
    instance = parse_instance(text)
    strategy = make_strategy(strategy_name, instance, Player.T)
    result = best_response(instance, strategy, Player.T, audit_scheme=PotentialScheme(scheme))
    failures = [
        AuditRecord(round=r.round, invariant=r.invariant, detail=f"{label}: {r.detail}")
        for r in result.audit_failures
    ]
    return label, result.winner == Player.T, failures, text


def sweep_bound(k: int, pattern: str, scheme: Union[PotentialScheme, str], clauses: Optional[int] = None,
                seeds: int = 100, n: Optional[int] = None, enumerate_cap: Optional[int] = None,
                workers: Optional[int] = None) -> SweepSummary:
    """
    Run the T strategy of `scheme` against an exhaustive F on every instance
    of a corpus strictly below the scheme's clause threshold.

    When F moves first, F's opening move leaves every clause with at least
    k-1 literals and T plays the rest of the game first, so the threshold is
    the one for width k-1.

    The corpus is every enumerable instance at the smallest universe that fits
    the pattern (at most enumerate_cap of them) plus `seeds` random instances
    over n variables (default 2k, raised by one when the pattern needs it).

    Raises:
        InstanceError: the configuration is not strictly below threshold, or
            the pattern does not suit the scheme's strategy
    """
    scheme = PotentialScheme(scheme)
    first, last = pattern_from_text(pattern)
    strategy_name = SWEEP_STRATEGIES[scheme]
    if scheme == PotentialScheme.THREE_HALVES and last != Player.T:
        raise InstanceError("the three-halves sweep needs T to move last")
    width = k if first == Player.T else k - 1
    if width < 0:
        raise InstanceError("an F-first sweep needs k >= 1")
    m = largest_below_threshold(scheme, width) if clauses is None else clauses
    if not below_threshold(m, scheme, width):
        raise InstanceError(f"{m} clauses is not strictly below the {scheme.value} threshold "
                            f"{scheme_threshold(scheme, width)} at width {width}")
    n = _fit_parity(max(k, 2 * k) if n is None else n, first, last)
    if n < k:
        raise InstanceError(f"universe n={n} is smaller than width k={k}")
    workers = settings.WORKERS if workers is None else max(1, workers)

    items: List[Tuple[str, str, str, str]] = []
    enumerated = 0
    n_enum = _fit_parity(k, first, last)
    if k <= ENUMERATE_MAX_K and m <= ENUMERATE_MAX_M and n_enum <= ENUMERATE_MAX_N:
        for index, instance in enumerate(enumerate_instances(k, m, n_enum, (first, last))):
            if enumerate_cap is not None and index >= enumerate_cap:
                break
            items.append((f"enum:{index:05d}", serialize_instance(instance), strategy_name, scheme.value))
            enumerated += 1
    possible = comb(n, k) * 2 ** k
    if m <= possible:
        for seed in range(seeds):
            instance = random_instance(RandomSpec(k=k, m=m, n=n, pattern=first.value + last.value, seed=seed))
            items.append((f"seed:{seed:05d}", serialize_instance(instance), strategy_name, scheme.value))
    logger.info("sweep k=%d %s %s m=%d: %d instances", k, first.value + last.value, scheme.value, m, len(items))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_item, items))
    else:
        results = [_sweep_item(item) for item in items]
    results.sort(key=lambda r: r[0])

    summary = SweepSummary(
        k=k,
        pattern=first.value + last.value,
        scheme=scheme.value,
        clauses=m,
        universeSize=n,
        tStrategy=strategy_name,
        threshold=str(scheme_threshold(scheme, width)),
        total=len(results),
        enumerated=enumerated,
        randomized=len(results) - enumerated,
    )
    for label, t_won, failures, text in results:
        if t_won:
            summary.tWins += 1
        else:
            logger.warning("T lost %s", label)
            summary.counterexamples.append(text)
        summary.auditFailures.extend(failures)
    return summary
