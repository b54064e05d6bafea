"""
Generators for the extremal instances where F wins with few clauses, and the
two reductions between F-first and T-first games.

Variable numbering (internal, 0-indexed):
- xor-pairs(k): x1..xk are variables 0..k-1, pairs (0,1), (2,3), ...
- odd-tf(k): x1..x(k+1) are variables 0..k; the two fresh variables are k-1 and k
- fib-tt(k): x0..x(2k-2) are variables 0..2k-2, pairs (1,2), (3,4), ...
"""

import logging
from typing import Callable, Dict, List

from .cnf import Clause, Cnf, GameInstance, Literal, Player, rename_variables
from .errors import InstanceError

logger = logging.getLogger(__name__)


def build_xor_pairs(k: int) -> GameInstance:
    """
    (x1 ⊕ x2) ∨ (x3 ⊕ x4) ∨ ... expanded into a k-uniform CNF, pattern T···F.

    One clause per subset S of pairs: pairs in S contribute (~xi | ~xi+1),
    the others (xi | xi+1). 2^(k/2) clauses in all.
    """
    if k < 0 or k % 2:
        raise InstanceError(f"xor-pairs needs an even width k >= 0, got {k}")
    pairs = k // 2
    clauses = []
    for subset in range(2 ** pairs):
        literals = []
        for t in range(pairs):
            negated = bool(subset >> t & 1)
            literals.append(Literal(2 * t, negated))
            literals.append(Literal(2 * t + 1, negated))
        clauses.append(Clause(tuple(literals)))
    return GameInstance(Cnf(tuple(clauses)), k, Player.T, Player.F)


def build_odd_tf(k: int) -> GameInstance:
    """Two copies of xor-pairs(k-1), one extended by x_k and the other by x_(k+1)."""
    if k < 1 or k % 2 == 0:
        raise InstanceError(f"odd-tf needs an odd width k >= 1, got {k}")
    inner = build_xor_pairs(k - 1).cnf
    low, high = Literal.pos(k - 1), Literal.pos(k)
    clauses = []
    for clause in inner:
        clauses.append(clause.with_literal(low))
        clauses.append(clause.with_literal(high))
    return GameInstance(Cnf(tuple(clauses)), k + 1, Player.T, Player.F)


def _fib_clauses(k: int) -> List[Clause]:
    if k == 0:
        return [Clause()]
    if k == 1:
        return [Clause.of(Literal.pos(0)), Clause.of(Literal.neg(0))]
    pivot = 2 * k - 3
    clauses = [c.with_literal(Literal.pos(pivot)) for c in _fib_clauses(k - 1)]
    clauses += [
        c.with_literal(Literal.neg(pivot)).with_literal(Literal.pos(pivot + 1))
        for c in _fib_clauses(k - 2)
    ]
    return clauses


def build_fib_tt(k: int) -> GameInstance:
    """The Fibonacci-sized k-uniform CNF where F wins under pattern T···T."""
    if k < 0:
        raise InstanceError(f"fib-tt needs k >= 0, got {k}")
    universe = 2 * k - 1 if k > 0 else 1
    return GameInstance(Cnf(tuple(_fib_clauses(k))), universe, Player.T, Player.T)


def fibonacci(n: int) -> int:
    """Fib_1 = Fib_2 = 1."""
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def expected_clause_count(name: str, k: int) -> int:
    if name == "xor-pairs":
        return 2 ** (k // 2)
    if name == "odd-tf":
        return 2 ** ((k + 1) // 2)
    if name == "fib-tt":
        return fibonacci(k + 2)
    raise InstanceError(f"unknown construction {name!r}")


CONSTRUCTIONS: Dict[str, Callable[[int], GameInstance]] = {
    "xor-pairs": build_xor_pairs,
    "odd-tf": build_odd_tf,
    "fib-tt": build_fib_tt,
}


def build(name: str, k: int) -> GameInstance:
    try:
        builder = CONSTRUCTIONS[name]
    except KeyError:
        raise InstanceError(f"unknown construction {name!r}; choose from {', '.join(CONSTRUCTIONS)}")
    instance = builder(k)
    logger.info("built %s(k=%d): %d clauses over %d variables", name, k, len(instance.cnf), instance.universe_size)
    return instance


# ==================== F-first reductions ====================


def add_universal_variable(instance: GameInstance) -> GameInstance:
    """
    T-first (k)-uniform game → F-first (k+1)-uniform game with the same clause count.

    A fresh variable joins every clause; F wins the new game by zeroing it first.
    """
    if instance.first != Player.T:
        raise InstanceError("add_universal_variable needs a T-first instance")
    fresh = Literal.pos(instance.universe_size)
    cnf = Cnf(tuple(clause.with_literal(fresh) for clause in instance.cnf))
    return GameInstance(cnf, instance.universe_size + 1, Player.F, instance.last)


def reduce_by_first_move(instance: GameInstance, lit: Literal) -> GameInstance:
    """
    F-first k-uniform game, with F opening lit = 1 → T-first (k-1)-uniform game.

    Clauses holding lit vanish, ~lit is stripped, and every other clause loses
    its highest-variable literal. The played variable leaves the universe and
    higher variables shift down by one.
    """
    if instance.first != Player.F:
        raise InstanceError("reduce_by_first_move needs an F-first instance")
    if not 0 <= lit.var < instance.universe_size:
        raise InstanceError(f"{lit} is outside the universe")
    widths = set(instance.cnf.widths())
    if len(widths) > 1:
        raise InstanceError(f"instance is not uniform (widths {sorted(widths)})")
    if widths == {0}:
        raise InstanceError("cannot reduce a 0-uniform instance")

    complement = lit.negate()
    clauses = []
    for clause in instance.cnf:
        if lit in clause:
            continue
        if complement in clause:
            clauses.append(clause.without(complement))
        else:
            clauses.append(clause.without(clause.literals[-1]))

    mapping = {v: (v if v < lit.var else v - 1) for v in range(instance.universe_size) if v != lit.var}
    cnf = rename_variables(Cnf(tuple(clauses)), mapping)
    return GameInstance(cnf, instance.universe_size - 1, Player.T, instance.last)
