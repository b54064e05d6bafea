"""
Exact potentials.

Quad is an exact element of Q[√2]. Every clause potential, CNF potential and
oct split is a Quad, so argmax choices and monotonicity audits never depend
on floating point.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Union

from .cnf import Clause, Cnf, Literal
from .errors import InstanceError

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class Quad:
    """The real number r + s·√2 with rational r, s."""

    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "s", Fraction(self.s))

    @staticmethod
    def coerce(value: Union["Quad", Rational]) -> "Quad":
        if isinstance(value, Quad):
            return value
        if isinstance(value, (int, Fraction)):
            return Quad(Fraction(value))
        raise TypeError(f"cannot use {type(value).__name__} as an exact quad")

    @staticmethod
    def sqrt2_power(n: int) -> "Quad":
        """√2 to an integer power, exactly."""
        base = Fraction(2) ** (n // 2)
        return Quad(0, base) if n % 2 else Quad(base)

    def __add__(self, other):
        try:
            other = Quad.coerce(other)
        except TypeError:
            return NotImplemented
        return Quad(self.r + other.r, self.s + other.s)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.r, -self.s)

    def __sub__(self, other):
        try:
            other = Quad.coerce(other)
        except TypeError:
            return NotImplemented
        return Quad(self.r - other.r, self.s - other.s)

    def __rsub__(self, other):
        return Quad.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Quad.coerce(other)
        except TypeError:
            return NotImplemented
        # (r1 + s1√2)(r2 + s2√2) = r1r2 + 2s1s2 + (r1s2 + s1r2)√2
        return Quad(self.r * other.r + 2 * self.s * other.s, self.r * other.s + self.s * other.r)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("only non-negative powers are supported")
        result = Quad(1)
        for _ in range(exponent):
            result = result * self
        return result

    def sign(self) -> int:
        """Exact sign, from the signs of r, s and a comparison of r² with 2s²."""
        r_sign = (self.r > 0) - (self.r < 0)
        s_sign = (self.s > 0) - (self.s < 0)
        if s_sign == 0:
            return r_sign
        if r_sign == 0 or r_sign == s_sign:
            return s_sign
        gap = self.r * self.r - 2 * self.s * self.s
        # r and s disagree in sign: whichever magnitude dominates decides
        if gap > 0:
            return r_sign
        if gap < 0:
            return s_sign
        return 0

    def _compare(self, other) -> int:
        return (self - Quad.coerce(other)).sign()

    def __eq__(self, other):
        try:
            other = Quad.coerce(other)
        except TypeError:
            return NotImplemented
        return self.r == other.r and self.s == other.s

    def __hash__(self):
        return hash(self.r) if self.s == 0 else hash((self.r, self.s))

    def __lt__(self, other):
        return self._compare(other) < 0

    def __le__(self, other):
        return self._compare(other) <= 0

    def __gt__(self, other):
        return self._compare(other) > 0

    def __ge__(self, other):
        return self._compare(other) >= 0

    def is_zero(self) -> bool:
        return self.r == 0 and self.s == 0

    def __float__(self):
        return float(self.r) + float(self.s) * 2 ** 0.5

    def __str__(self):
        if self.s == 0:
            return str(self.r)
        root = f"{abs(self.s)}√2" if abs(self.s) != 1 else "√2"
        if self.r == 0:
            return root if self.s > 0 else f"-{root}"
        return f"{self.r} {'+' if self.s > 0 else '-'} {root}"

    def __repr__(self):
        return f"Quad({self})"


ZERO = Quad()
ONE = Quad(1)
SQRT2 = Quad(0, 1)


class PotentialScheme(str, Enum):
    SQRT2 = "sqrt2"
    PARITY = "parity"
    THREE_HALVES = "three-halves"


@lru_cache(maxsize=None)
def width_potential(width: int, scheme: PotentialScheme) -> Quad:
    if scheme == PotentialScheme.SQRT2:
        return Quad.sqrt2_power(-width)
    if scheme == PotentialScheme.PARITY:
        if width % 2 == 0:
            return Quad.sqrt2_power(-width)
        return Fraction(2, 3) * Quad.sqrt2_power(-(width - 1))
    if scheme == PotentialScheme.THREE_HALVES:
        return Quad(Fraction(2, 3) ** width)
    raise ValueError(f"unknown scheme {scheme!r}")


def clause_potential(clause: Clause, scheme: PotentialScheme) -> Quad:
    return width_potential(clause.width, PotentialScheme(scheme))


def cnf_potential(cnf: Cnf, scheme: PotentialScheme) -> Quad:
    scheme = PotentialScheme(scheme)
    total = ZERO
    for clause in cnf.clauses:
        total = total + width_potential(clause.width, scheme)
    return total


def literal_potential(cnf: Cnf, lit: Literal, scheme: PotentialScheme) -> Quad:
    scheme = PotentialScheme(scheme)
    total = ZERO
    for clause in cnf.clauses:
        if lit in clause:
            total = total + width_potential(clause.width, scheme)
    return total


def literal_potentials(cnf: Cnf, scheme: PotentialScheme) -> Dict[Literal, Quad]:
    """p(cnf, ℓ) for every literal occurring in cnf, in one pass."""
    scheme = PotentialScheme(scheme)
    totals: Dict[Literal, Quad] = {}
    for clause in cnf.clauses:
        weight = width_potential(clause.width, scheme)
        for lit in clause:
            totals[lit] = totals.get(lit, ZERO) + weight
    return totals


def scheme_threshold(scheme: PotentialScheme, k: int) -> Quad:
    """1 / p(width-k clause): below this many clauses the T strategy for the scheme wins."""
    scheme = PotentialScheme(scheme)
    if scheme == PotentialScheme.SQRT2:
        return Quad.sqrt2_power(k)
    if scheme == PotentialScheme.PARITY:
        if k % 2 == 0:
            return Quad.sqrt2_power(k)
        return Fraction(3, 2) * Quad.sqrt2_power(k - 1)
    return Quad(Fraction(3, 2) ** k)


def below_threshold(clause_count: int, scheme: PotentialScheme, k: int) -> bool:
    return clause_count * width_potential(k, PotentialScheme(scheme)) < ONE


@dataclass(frozen=True)
class OctSplit:
    """
    Potentials of the clauses of ψ grouped by which of ℓi, ~ℓi, ℓj, ~ℓj they hold.

        rows ℓi / ~ℓi / neither, columns ℓj / ~ℓj / neither:
            a b c
            d e f
            g h
    """

    a: Quad = ZERO
    b: Quad = ZERO
    c: Quad = ZERO
    d: Quad = ZERO
    e: Quad = ZERO
    f: Quad = ZERO
    g: Quad = ZERO
    h: Quad = ZERO

    def as_dict(self) -> Dict[str, str]:
        return {name: str(getattr(self, name)) for name in "abcdefgh"}


def oct_split(cnf: Cnf, li: Literal, lj: Literal, scheme: PotentialScheme) -> OctSplit:
    if li.var == lj.var:
        raise InstanceError(f"oct split needs two variables, got {li} and {lj}")
    scheme = PotentialScheme(scheme)
    ni, nj = li.negate(), lj.negate()
    sums = dict.fromkeys("abcdefgh", ZERO)
    for clause in cnf.clauses:
        if li in clause:
            row = "abc"
        elif ni in clause:
            row = "def"
        else:
            row = "gh-"
        if lj in clause:
            key = row[0]
        elif nj in clause:
            key = row[1]
        else:
            key = row[2]
        if key == "-":
            continue
        sums[key] = sums[key] + width_potential(clause.width, scheme)
    return OctSplit(**sums)


def zugzwang_margin(split: OctSplit) -> Quad:
    """a + e − (5/4(b + d) + 1/2(c + f + g + h)); non-negative marks a zugzwang pair."""
    return (split.a + split.e
            - Fraction(5, 4) * (split.b + split.d)
            - Fraction(1, 2) * (split.c + split.f + split.g + split.h))


def round_drop_bound(split: OctSplit, scheme: PotentialScheme) -> Quad:
    """
    Lower bound on p(ψ) − p(ψ') for a round where T plays ℓi = 1 then F plays ℓj = 1.

    Exact for SQRT2 and THREE_HALVES; for PARITY single-literal shrinks are
    charged the larger of their two ratios (3/2).
    """
    scheme = PotentialScheme(scheme)
    removed = split.a + split.b + split.c + split.d + split.g
    if scheme == PotentialScheme.SQRT2:
        return removed - split.e - (SQRT2 - 1) * (split.f + split.h)
    if scheme == PotentialScheme.PARITY:
        return removed - split.e - Fraction(1, 2) * (split.f + split.h)
    return removed - Fraction(5, 4) * split.e - Fraction(1, 2) * (split.f + split.h)
