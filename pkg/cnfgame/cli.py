"""
Command line entry point: python -m cnfgame <command> ...

Exit codes: 0 all green, 1 an audit failure, red report or illegal move,
2 a usage, input, limit or configuration error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, ValidationError

from .cnf import parse_instance, parse_transcript, serialize_instance
from .config import settings
from .constructions import CONSTRUCTIONS, add_universal_variable, build
from .errors import (
    AuditError,
    ConfigError,
    IllegalMoveError,
    InstanceError,
    InstanceFormatError,
    LimitExceededError,
    StrategyError,
)
from .harness import STRATEGY_NAMES, random_instance, run_match, sweep_bound, verify_construction
from .models import InstanceReport, MoveRecord, RandomSpec, SolveReport
from .potential import PotentialScheme
from .solver import solve

logger = logging.getLogger(__name__)

SCHEMES = [scheme.value for scheme in PotentialScheme]


def _rule(title: str) -> None:
    print("=" * 60)
    print(title)
    print("=" * 60)


def _emit(report: BaseModel, as_json: bool) -> bool:
    """Print the report as JSON when asked; returns True if it did."""
    if as_json:
        print(report.model_dump_json(indent=2))
    return as_json


def _write_or_print(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text)
        print(f"✓ Written to: {output}")
    else:
        print(text, end="")


def _read_text(path: str) -> str:
    data = Path(path).read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise InstanceFormatError(data[:e.start].count(b"\n") + 1, "not UTF-8 text")


def parse_spec(text: str) -> RandomSpec:
    """'k=2,m=1,n=2,pattern=TF,seed=7' → RandomSpec."""
    fields: Dict[str, str] = {}
    for part in text.split(","):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise InstanceError(f"expected key=value in --spec, got {part!r}")
        fields[key.strip()] = value.strip()
    return RandomSpec(**fields)


# ==================== Commands ====================


def cmd_generate(args) -> int:
    instance = build(args.name, args.k)
    if args.first_f:
        instance = add_universal_variable(instance)
    text = serialize_instance(instance)
    report = InstanceReport(name=args.name, k=args.k, universeSize=instance.universe_size,
                            clauseCount=len(instance.cnf), pattern=instance.pattern, instance=text)
    if not _emit(report, args.json):
        _write_or_print(text, args.output)
    elif args.output:
        Path(args.output).write_text(text)
    return 0


def cmd_solve(args) -> int:
    instance = parse_instance(_read_text(args.file), prune=args.prune)
    result = solve(instance, workers=args.workers)
    move = result.principal_move
    report = SolveReport(
        winner=result.winner.value,
        principalMove=MoveRecord(player=instance.first.value, variable=move[0], bit=move[1]) if move else None,
        nodesExplored=result.nodes_explored,
        universeSize=instance.universe_size,
        clauseCount=len(instance.cnf),
        pattern=instance.pattern,
    )
    if not _emit(report, args.json):
        print(f"winner: {report.winner}")
        if move:
            print(f"principal move: x{move[0] + 1} = {move[1]}")
        print(f"nodes explored: {report.nodesExplored}")
    return 0


def cmd_play(args) -> int:
    instance = parse_instance(_read_text(args.file))
    report = run_match(instance, args.t, args.f, audit_scheme=args.audit)
    if args.transcript:
        # round-trip through the parser so a bad transcript never reaches disk
        parse_transcript(report.transcript, instance)
        Path(args.transcript).write_text(report.transcript)
    if not _emit(report, args.json):
        _rule(f"{report.tStrategy} (T) vs {report.fStrategy} (F)")
        print(" ".join(f"{m.player}:{'' if m.bit else '~'}x{m.variable + 1}" for m in report.moves))
        for row in report.perRoundPotentials:
            print(f"round {row.round:>3}  p = {row.potential}")
        print(f"winner: {report.winner}")
        for failure in report.auditFailures:
            print(f"✗ round {failure.round}: {failure.invariant} {failure.detail}")
    return 1 if report.auditFailures else 0


def cmd_verify(args) -> int:
    report = verify_construction(args.name, args.k, first_f=args.first_f)
    if not _emit(report, args.json):
        mark = "✓" if report.green else "✗"
        print(f"{mark} {report.name} k={report.k} ({report.firstPlayer} first)")
        print(f"  clauses: {report.clauseCount} (expected {report.expectedClauseCount})")
        print(f"  uniform: {report.uniform}")
        print(f"  winner vs exhaustive T: {report.winner} with {report.fStrategy}")
        for failure in report.auditFailures:
            print(f"  ✗ {failure.invariant}: {failure.detail}")
    return 0 if report.green else 1


def cmd_sweep(args) -> int:
    summary = sweep_bound(args.k, args.pattern, args.scheme, clauses=args.clauses, seeds=args.seeds,
                          n=args.n, enumerate_cap=args.enumerate_cap, workers=args.workers)
    if not _emit(summary, args.json):
        mark = "✓" if summary.green else "✗"
        print(f"{mark} k={summary.k} {summary.pattern} {summary.scheme} m={summary.clauses} "
              f"(threshold {summary.threshold}) with {summary.tStrategy}")
        print(f"  T wins {summary.tWins}/{summary.total} "
              f"({summary.enumerated} enumerated, {summary.randomized} random)")
        for failure in summary.auditFailures:
            print(f"  ✗ round {failure.round}: {failure.invariant} {failure.detail}")
        for text in summary.counterexamples:
            print("  counterexample:")
            print("    " + text.rstrip().replace("\n", "\n    "))
    return 0 if summary.green else 1


def cmd_random(args) -> int:
    spec = parse_spec(args.spec)
    instance = random_instance(spec)
    text = serialize_instance(instance)
    report = InstanceReport(name="random", k=spec.k, universeSize=instance.universe_size,
                            clauseCount=len(instance.cnf), pattern=instance.pattern, instance=text)
    if not _emit(report, args.json):
        _write_or_print(text, args.output)
    elif args.output:
        Path(args.output).write_text(text)
    return 0


# ==================== Parser ====================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnfgame", description="Unordered CNF game toolkit")
    parser.add_argument("--log-level", default=None, help="logging level (default CNFGAME_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_json(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--json", action="store_true", help="print the structured report")
        return p

    p = with_json(sub.add_parser("generate", help="build a construction"))
    p.add_argument("name", choices=list(CONSTRUCTIONS))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--first-f", action="store_true", help="lift to the F-first game")
    p.add_argument("--output", "-o")
    p.set_defaults(handler=cmd_generate)

    p = with_json(sub.add_parser("solve", help="decide the winner under optimal play"))
    p.add_argument("file")
    p.add_argument("--prune", action="store_true", help="drop padding variables")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(handler=cmd_solve)

    p = with_json(sub.add_parser("play", help="play two strategies against each other"))
    p.add_argument("file")
    p.add_argument("--t", required=True, help=", ".join(STRATEGY_NAMES))
    p.add_argument("--f", required=True, help=", ".join(STRATEGY_NAMES))
    p.add_argument("--audit", choices=SCHEMES, default=None)
    p.add_argument("--transcript")
    p.set_defaults(handler=cmd_play)

    p = with_json(sub.add_parser("verify", help="check a construction against exhaustive T"))
    p.add_argument("name", choices=list(CONSTRUCTIONS))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--first-f", action="store_true")
    p.set_defaults(handler=cmd_verify)

    p = with_json(sub.add_parser("sweep", help="run a T strategy below its clause threshold"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--pattern", required=True, help="TF, TT, FT or FF")
    p.add_argument("--scheme", choices=SCHEMES, required=True)
    p.add_argument("--clauses", type=int, default=None)
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--n", type=int, default=None, help="universe of the random instances")
    p.add_argument("--enumerate-cap", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(handler=cmd_sweep)

    p = with_json(sub.add_parser("random", help="seeded random instance"))
    p.add_argument("--spec", required=True, help="k=..,m=..,n=..,pattern=..,seed=..")
    p.add_argument("--output", "-o")
    p.set_defaults(handler=cmd_random)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        level = (args.log_level or settings.LOG_LEVEL).upper()
        logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                            format="%(levelname)s %(name)s: %(message)s")
        return args.handler(args)
    except (AuditError, IllegalMoveError) as e:
        print(f"✗ {e}", file=sys.stderr)
        return 1
    except (InstanceFormatError, InstanceError, LimitExceededError, ConfigError,
            StrategyError, ValidationError, OSError) as e:
        print(f"✗ {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
