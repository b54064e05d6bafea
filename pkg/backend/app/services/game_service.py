from typing import Optional

# Import the cnfgame package from the repository root
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', '..'))
from cnfgame.cnf import parse_instance, serialize_instance
from cnfgame.constructions import add_universal_variable, build
from cnfgame.harness import random_instance, run_match, sweep_bound, verify_construction
from cnfgame.models import InstanceReport, MatchReport, MoveRecord, RandomSpec, SolveReport, SweepSummary, VerificationReport
from cnfgame.solver import solve


class GameService:
    """Thin adapter from HTTP payloads to the cnfgame library."""

    def generate(self, name: str, k: int, first_f: bool = False) -> InstanceReport:
        instance = build(name, k)
        if first_f:
            instance = add_universal_variable(instance)
        return InstanceReport(
            name=name,
            k=k,
            universeSize=instance.universe_size,
            clauseCount=len(instance.cnf),
            pattern=instance.pattern,
            instance=serialize_instance(instance),
        )

    def random(self, spec: RandomSpec) -> InstanceReport:
        instance = random_instance(spec)
        return InstanceReport(
            name="random",
            k=spec.k,
            universeSize=instance.universe_size,
            clauseCount=len(instance.cnf),
            pattern=instance.pattern,
            instance=serialize_instance(instance),
        )

    def solve(self, text: str, prune: bool = False) -> SolveReport:
        instance = parse_instance(text, prune=prune)
        result = solve(instance)
        move = result.principal_move
        return SolveReport(
            winner=result.winner.value,
            principalMove=MoveRecord(player=instance.first.value, variable=move[0], bit=move[1]) if move else None,
            nodesExplored=result.nodes_explored,
            universeSize=instance.universe_size,
            clauseCount=len(instance.cnf),
            pattern=instance.pattern,
        )

    def play(self, text: str, t: str, f: str, audit: Optional[str] = None) -> MatchReport:
        return run_match(parse_instance(text), t, f, audit_scheme=audit)

    def verify(self, name: str, k: int, first_f: bool = False) -> VerificationReport:
        return verify_construction(name, k, first_f=first_f)

    def sweep(self, k: int, pattern: str, scheme: str, clauses: Optional[int], seeds: int,
              n: Optional[int] = None) -> SweepSummary:
        return sweep_bound(k, pattern, scheme, clauses=clauses, seeds=seeds, n=n)
