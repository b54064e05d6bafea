"""
Core game objects for the unordered CNF game.

Literals, clauses, CNFs, game instances, partial assignments and transcripts,
plus residuals, evaluation and the line-oriented instance/transcript formats.

All objects are immutable values; every operation here is a pure function.
Variables are 0-indexed internally and 1-indexed (signed) in files.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple

from .errors import InstanceError, InstanceFormatError


class Player(str, Enum):
    T = "T"
    F = "F"

    @property
    def other(self) -> "Player":
        return Player.F if self is Player.T else Player.T


class Evaluation(str, Enum):
    SATISFIED = "satisfied"
    FALSIFIED = "falsified"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True, order=True)
class Literal:
    """A variable with a polarity. Orders by variable, positive before negative."""

    var: int
    negated: bool = False

    def __post_init__(self):
        if self.var < 0:
            raise InstanceError(f"variable index must be non-negative, got {self.var}")

    @classmethod
    def pos(cls, var: int) -> "Literal":
        return cls(var, False)

    @classmethod
    def neg(cls, var: int) -> "Literal":
        return cls(var, True)

    @classmethod
    def from_signed(cls, value: int) -> "Literal":
        """Build from the 1-indexed signed file encoding."""
        if value == 0:
            raise InstanceError("0 is not a literal")
        return cls(abs(value) - 1, value < 0)

    def to_signed(self) -> int:
        return -(self.var + 1) if self.negated else self.var + 1

    def negate(self) -> "Literal":
        return Literal(self.var, not self.negated)

    @property
    def bit(self) -> int:
        """The bit that makes this literal true."""
        return 0 if self.negated else 1

    def value_under(self, bit: int) -> bool:
        return bit == self.bit

    def __str__(self) -> str:
        return f"~x{self.var}" if self.negated else f"x{self.var}"


@dataclass(frozen=True, order=True)
class Clause:
    """A disjunction of literals over distinct variables, kept sorted by variable."""

    literals: Tuple[Literal, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.literals))
        seen = set()
        for lit in ordered:
            if lit.var in seen:
                raise InstanceError(f"variable x{lit.var} repeated in clause")
            seen.add(lit.var)
        object.__setattr__(self, "literals", ordered)

    @classmethod
    def of(cls, *literals: Literal) -> "Clause":
        return cls(tuple(literals))

    @classmethod
    def from_signed(cls, values: Iterable[int]) -> "Clause":
        return cls(tuple(Literal.from_signed(v) for v in values))

    @property
    def width(self) -> int:
        return len(self.literals)

    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(lit.var for lit in self.literals)

    def without(self, *removed: Literal) -> "Clause":
        return Clause(tuple(lit for lit in self.literals if lit not in removed))

    def with_literal(self, lit: Literal) -> "Clause":
        return Clause(self.literals + (lit,))

    def __contains__(self, lit: object) -> bool:
        return lit in self.literals

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __str__(self) -> str:
        if not self.literals:
            return "()"
        return "(" + " | ".join(str(lit) for lit in self.literals) + ")"


@dataclass(frozen=True)
class Cnf:
    """An ordered multiset of clauses. Duplicates are kept and counted."""

    clauses: Tuple[Clause, ...] = ()

    @classmethod
    def of(cls, *clauses: Clause) -> "Cnf":
        return cls(tuple(clauses))

    @classmethod
    def from_signed(cls, clauses: Iterable[Iterable[int]]) -> "Cnf":
        return cls(tuple(Clause.from_signed(c) for c in clauses))

    def canonical(self) -> "Cnf":
        return Cnf(tuple(sorted(self.clauses)))

    def variables(self) -> frozenset:
        return frozenset(lit.var for clause in self.clauses for lit in clause)

    def widths(self) -> List[int]:
        return [clause.width for clause in self.clauses]

    def has_empty_clause(self) -> bool:
        return any(clause.width == 0 for clause in self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __bool__(self) -> bool:
        return bool(self.clauses)

    def __str__(self) -> str:
        if not self.clauses:
            return "<empty cnf>"
        return " & ".join(str(clause) for clause in self.clauses)


@dataclass(frozen=True)
class GameInstance:
    cnf: Cnf
    universe_size: int
    first: Player = Player.T
    last: Player = Player.F

    def __post_init__(self):
        object.__setattr__(self, "first", Player(self.first))
        object.__setattr__(self, "last", Player(self.last))
        if self.universe_size < 0:
            raise InstanceError("universe size must be non-negative")
        out_of_range = [v for v in self.cnf.variables() if v >= self.universe_size]
        if out_of_range:
            raise InstanceError(
                f"variable x{min(out_of_range)} outside universe of size {self.universe_size}"
            )
        check_parity(self.universe_size, self.first, self.last)

    @property
    def pattern(self) -> str:
        return f"{self.first.value}{self.last.value}"

    def to_move(self, played: int) -> Player:
        return self.first if played % 2 == 0 else self.first.other

    def uniform_width(self) -> Optional[int]:
        widths = set(self.cnf.widths())
        return widths.pop() if len(widths) == 1 else None


def check_parity(universe_size: int, first: Player, last: Player) -> None:
    """Same player first and last iff the universe is odd."""
    if (universe_size % 2 == 1) != (first == last):
        raise InstanceError(
            f"universe size {universe_size} does not fit pattern {first.value}...{last.value}"
        )


def pattern_from_text(pattern: str) -> Tuple[Player, Player]:
    text = pattern.replace(".", "").replace("·", "").strip().upper()
    if len(text) != 2 or any(ch not in "TF" for ch in text):
        raise InstanceError(f"pattern must be two of T/F, got {pattern!r}")
    return Player(text[0]), Player(text[1])


class Assignment:
    """A partial map from variable to bit. Values never change once set."""

    __slots__ = ("_values",)

    def __init__(self, values: Optional[Dict[int, int]] = None):
        checked: Dict[int, int] = {}
        for var, bit in (values or {}).items():
            if bit not in (0, 1):
                raise InstanceError(f"bit for x{var} must be 0 or 1, got {bit}")
            checked[var] = bit
        self._values = checked

    def get(self, var: int) -> Optional[int]:
        return self._values.get(var)

    def assign(self, var: int, bit: int) -> "Assignment":
        if var in self._values:
            raise InstanceError(f"x{var} is already assigned")
        values = dict(self._values)
        values[var] = bit
        return Assignment(values)

    def literal_value(self, lit: Literal) -> Optional[bool]:
        bit = self._values.get(lit.var)
        return None if bit is None else lit.value_under(bit)

    def restrict(self, variables: Iterable[int]) -> "Assignment":
        keep = set(variables)
        return Assignment({v: b for v, b in self._values.items() if v in keep})

    def items(self):
        return sorted(self._values.items())

    def __contains__(self, var: object) -> bool:
        return var in self._values

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Assignment):
            return NotImplemented
        return self._values == other._values

    def __hash__(self) -> int:
        return hash(frozenset(self._values.items()))

    def __repr__(self) -> str:
        return f"Assignment({dict(self.items())})"


class Move(NamedTuple):
    player: Player
    var: int
    bit: int

    @property
    def literal(self) -> Literal:
        """The literal this move makes true."""
        return Literal(self.var, self.bit == 0)

    def __str__(self) -> str:
        return f"{self.player.value}:{self.literal}"


@dataclass(frozen=True)
class Transcript:
    instance: GameInstance
    moves: Tuple[Move, ...] = ()
    winner: Optional[Player] = None

    @property
    def complete(self) -> bool:
        return len(self.moves) == self.instance.universe_size

    def assignment(self) -> Assignment:
        return Assignment({m.var: m.bit for m in self.moves})

    def first_violation(self) -> Optional[Tuple[Optional[int], str]]:
        """(index of the offending move, or None for the winner claim, message), or None."""
        seen = set()
        for index, move in enumerate(self.moves):
            expected = self.instance.to_move(index)
            if move.player != expected:
                return index, f"move {index + 1} by {move.player.value}, expected {expected.value}"
            if move.var in seen:
                return index, f"move {index + 1} replays x{move.var}"
            if not 0 <= move.var < self.instance.universe_size:
                return index, f"move {index + 1} outside the universe"
            seen.add(move.var)
        if self.complete and self.winner is not None:
            outcome = evaluate(self.instance.cnf, self.assignment())
            actual = Player.T if outcome == Evaluation.SATISFIED else Player.F
            if actual != self.winner:
                return None, f"transcript claims {self.winner.value} but the formula says {actual.value}"
        return None

    def validate(self) -> None:
        violation = self.first_violation()
        if violation is not None:
            raise InstanceError(violation[1])


# ==================== Operations ====================


def residual(cnf: Cnf, lit: Literal) -> Cnf:
    """cnf[lit=1]: drop clauses containing lit, strip its complement elsewhere."""
    complement = lit.negate()
    clauses = []
    for clause in cnf.clauses:
        if lit in clause:
            continue
        if complement in clause:
            clause = clause.without(complement)
        clauses.append(clause)
    return Cnf(tuple(clauses))


def residual_under(cnf: Cnf, assignment: Assignment) -> Cnf:
    result = cnf
    for var, bit in assignment.items():
        result = residual(result, Literal(var, bit == 0))
    return result


def clause_masks(cnf: Cnf) -> List[Tuple[int, int]]:
    """(positive variables, negated variables) bitmasks per clause, for the bitmask searches."""
    return [
        (sum(1 << lit.var for lit in clause if not lit.negated),
         sum(1 << lit.var for lit in clause if lit.negated))
        for clause in cnf
    ]


def evaluate(cnf: Cnf, assignment: Assignment) -> Evaluation:
    undetermined = False
    for clause in cnf.clauses:
        satisfied = False
        open_literal = False
        for lit in clause:
            value = assignment.literal_value(lit)
            if value is None:
                open_literal = True
            elif value:
                satisfied = True
                break
        if satisfied:
            continue
        if not open_literal:
            return Evaluation.FALSIFIED
        undetermined = True
    return Evaluation.UNDETERMINED if undetermined else Evaluation.SATISFIED


@dataclass(frozen=True)
class UniformityReport:
    k: int
    offending: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.offending

    def __bool__(self) -> bool:
        return self.ok


def validate_uniform(cnf: Cnf, k: int) -> UniformityReport:
    return UniformityReport(k, tuple(i for i, c in enumerate(cnf.clauses) if c.width != k))


def dedupe(cnf: Cnf) -> Cnf:
    """Collapse duplicate clauses, keeping first occurrences in order."""
    seen = set()
    kept = []
    for clause in cnf.clauses:
        if clause not in seen:
            seen.add(clause)
            kept.append(clause)
    return Cnf(tuple(kept))


def rename_variables(cnf: Cnf, mapping: Dict[int, int]) -> Cnf:
    return Cnf(tuple(
        Clause(tuple(Literal(mapping[lit.var], lit.negated) for lit in clause))
        for clause in cnf.clauses
    ))


def prune_padding(instance: GameInstance) -> GameInstance:
    """
    Drop universe variables that occur in no clause and renumber densely.

    One spare variable is kept when needed so the universe parity still fits
    the instance's first/last pattern. Note this changes the game: padding
    variables act as pass moves.
    """
    used = sorted(instance.cnf.variables())
    mapping = {old: new for new, old in enumerate(used)}
    size = len(used)
    if (size % 2 == 1) != (instance.first == instance.last):
        size += 1
    return GameInstance(rename_variables(instance.cnf, mapping), size, instance.first, instance.last)


# ==================== File formats ====================


def serialize_instance(instance: GameInstance) -> str:
    lines = [
        f"p cnfgame {instance.universe_size} {len(instance.cnf)} "
        f"{instance.first.value} {instance.last.value}"
    ]
    for clause in instance.cnf.clauses:
        lines.append(" ".join([str(lit.to_signed()) for lit in clause] + ["0"]))
    return "\n".join(lines) + "\n"


def parse_instance(text: str, prune: bool = False) -> GameInstance:
    """
    Parse the cnfgame instance format.

    Args:
        text: file contents
        prune: drop padding variables after parsing (see prune_padding)

    Raises:
        InstanceFormatError: with the offending 1-based line number
    """
    header = None
    header_line = 0
    clauses: List[Clause] = []

    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue

        if line.startswith("p"):
            if header is not None:
                raise InstanceFormatError(number, "second header line")
            parts = line.split()
            if len(parts) != 6 or parts[1] != "cnfgame":
                raise InstanceFormatError(number, f"invalid header '{line}'")
            try:
                universe = int(parts[2])
                count = int(parts[3])
            except ValueError:
                raise InstanceFormatError(number, "universe size and clause count must be integers")
            if universe < 0 or count < 0:
                raise InstanceFormatError(number, "negative universe size or clause count")
            if parts[4] not in ("T", "F") or parts[5] not in ("T", "F"):
                raise InstanceFormatError(number, "first/last players must be T or F")
            first, last = Player(parts[4]), Player(parts[5])
            try:
                check_parity(universe, first, last)
            except InstanceError as e:
                raise InstanceFormatError(number, f"parity violation: {e}")
            header = (universe, count, first, last)
            header_line = number
            continue

        if header is None:
            raise InstanceFormatError(number, "clause before header")

        try:
            values = [int(token) for token in line.split()]
        except ValueError:
            raise InstanceFormatError(number, "non-integer field")
        if values[-1] != 0:
            raise InstanceFormatError(number, "clause line should end with 0")
        body = values[:-1]
        if 0 in body:
            raise InstanceFormatError(number, "0 inside clause")
        for value in body:
            if abs(value) > header[0]:
                raise InstanceFormatError(number, f"variable {abs(value)} out of range 1..{header[0]}")
        if len({abs(v) for v in body}) != len(body):
            raise InstanceFormatError(number, "duplicate variable in clause")
        clauses.append(Clause.from_signed(body))

    if header is None:
        raise InstanceFormatError(max(1, len(text.splitlines())), "missing header")
    universe, count, first, last = header
    if len(clauses) != count:
        raise InstanceFormatError(header_line, f"header declares {count} clauses, found {len(clauses)}")

    instance = GameInstance(Cnf(tuple(clauses)), universe, first, last)
    return prune_padding(instance) if prune else instance


def serialize_transcript(transcript: Transcript) -> str:
    winner = transcript.winner.value if transcript.winner else "?"
    lines = [f"t {winner}"]
    for move in transcript.moves:
        lines.append(f"{move.player.value} {move.literal.to_signed()}")
    return "\n".join(lines) + "\n"


def parse_transcript(text: str, instance: GameInstance) -> Transcript:
    winner = None
    moves: List[Move] = []
    move_lines: List[int] = []
    header_line = 1
    seen_header = False
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "t":
            if seen_header or len(parts) != 2 or parts[1] not in ("T", "F", "?"):
                raise InstanceFormatError(number, f"invalid transcript header '{line}'")
            winner = None if parts[1] == "?" else Player(parts[1])
            header_line = number
            seen_header = True
            continue
        if not seen_header:
            raise InstanceFormatError(number, "move before transcript header")
        if len(parts) != 2 or parts[0] not in ("T", "F"):
            raise InstanceFormatError(number, f"invalid move line '{line}'")
        try:
            lit = Literal.from_signed(int(parts[1]))
        except (ValueError, InstanceError):
            raise InstanceFormatError(number, f"invalid literal '{parts[1]}'")
        moves.append(Move(Player(parts[0]), lit.var, lit.bit))
        move_lines.append(number)
    if not seen_header:
        raise InstanceFormatError(1, "missing transcript header")
    transcript = Transcript(instance, tuple(moves), winner)
    violation = transcript.first_violation()
    if violation is not None:
        index, message = violation
        raise InstanceFormatError(header_line if index is None else move_lines[index], message)
    return transcript
