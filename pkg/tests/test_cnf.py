import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cnfgame.cnf import (
    Assignment,
    Clause,
    Cnf,
    Evaluation,
    GameInstance,
    Literal,
    Move,
    Player,
    Transcript,
    dedupe,
    evaluate,
    parse_instance,
    parse_transcript,
    pattern_from_text,
    prune_padding,
    residual,
    residual_under,
    serialize_instance,
    serialize_transcript,
    validate_uniform,
)
from cnfgame.constructions import build_fib_tt, build_xor_pairs
from cnfgame.errors import InstanceError, InstanceFormatError


@st.composite
def cnfs(draw, max_var=5, max_clauses=6):
    clauses = []
    for _ in range(draw(st.integers(0, max_clauses))):
        variables = draw(st.sets(st.integers(0, max_var - 1), max_size=3))
        clauses.append(Clause(tuple(Literal(v, draw(st.booleans())) for v in sorted(variables))))
    return Cnf(tuple(clauses))


class TestLiterals:
    def test_signed_encoding(self):
        assert Literal.from_signed(-3) == Literal(2, True)
        assert Literal.from_signed(1).to_signed() == 1
        assert Literal.neg(4).to_signed() == -5

    def test_zero_is_not_a_literal(self):
        with pytest.raises(InstanceError):
            Literal.from_signed(0)

    def test_bit_makes_literal_true(self):
        assert Literal.pos(0).bit == 1
        assert Literal.neg(0).bit == 0
        assert Literal.neg(0).value_under(0)

    def test_move_literal(self):
        assert Move(Player.T, 3, 0).literal == Literal.neg(3)
        assert Move(Player.F, 3, 1).literal == Literal.pos(3)


class TestClauses:
    def test_repeated_variable_rejected(self):
        with pytest.raises(InstanceError):
            Clause.of(Literal.pos(1), Literal.neg(1))

    def test_literals_sorted(self):
        clause = Clause.from_signed([3, -1, 2])
        assert clause.variables == (0, 1, 2)
        assert str(clause) == "(~x0 | x1 | x2)"

    def test_empty_clause_is_falsified(self):
        cnf = Cnf.of(Clause())
        assert cnf.has_empty_clause()
        assert evaluate(cnf, Assignment()) == Evaluation.FALSIFIED


class TestGameInstance:
    def test_parity_is_enforced(self):
        with pytest.raises(InstanceError):
            GameInstance(Cnf(), 2, Player.T, Player.T)
        with pytest.raises(InstanceError):
            GameInstance(Cnf(), 3, Player.T, Player.F)

    def test_variables_must_fit_universe(self):
        with pytest.raises(InstanceError):
            GameInstance(Cnf.from_signed([[1, 3]]), 2, Player.T, Player.F)

    def test_turn_order(self):
        g = GameInstance(Cnf(), 3, Player.T, Player.T)
        assert [g.to_move(i) for i in range(3)] == [Player.T, Player.F, Player.T]
        assert g.pattern == "TT"

    def test_pattern_text(self):
        assert pattern_from_text("T···F") == (Player.T, Player.F)
        assert pattern_from_text("ff") == (Player.F, Player.F)
        with pytest.raises(InstanceError):
            pattern_from_text("TX")


class TestResidual:
    def test_residual_drops_and_strips(self):
        cnf = Cnf.from_signed([[1, 2], [-1, 3], [2, 3]])
        assert residual(cnf, Literal.pos(0)) == Cnf.from_signed([[3], [2, 3]])

    def test_evaluation_states(self):
        cnf = Cnf.from_signed([[1, 2], [-1]])
        assert evaluate(cnf, Assignment({0: 0})) == Evaluation.UNDETERMINED
        assert evaluate(cnf, Assignment({0: 0, 1: 1})) == Evaluation.SATISFIED
        assert evaluate(cnf, Assignment({0: 1})) == Evaluation.FALSIFIED
        assert evaluate(Cnf(), Assignment()) == Evaluation.SATISFIED

    @given(cnfs(), st.lists(st.integers(0, 1), min_size=5, max_size=5))
    @settings(max_examples=200, deadline=None)
    def test_residual_agrees_with_evaluate(self, cnf, bits):
        assignment = Assignment(dict(enumerate(bits)))
        left = residual_under(cnf, assignment)
        outcome = evaluate(cnf, assignment)
        if outcome == Evaluation.SATISFIED:
            assert len(left) == 0
        else:
            assert outcome == Evaluation.FALSIFIED
            assert left.has_empty_clause()

    @pytest.mark.slow
    def test_residual_coherent_on_every_small_cnf(self):
        literals = [Literal(v, negated) for v in range(4) for negated in (False, True)]
        clauses = [Clause(())] + [Clause((lit,)) for lit in literals]
        clauses += [Clause((Literal(a, na), Literal(b, nb)))
                    for a, b in itertools.combinations(range(4), 2) for na in (False, True) for nb in (False, True)]
        assert len(clauses) == 33
        for size in range(4):
            for chosen in itertools.combinations(clauses, size):
                cnf = Cnf(chosen)
                for lit in literals:
                    reduced = residual(cnf, lit)
                    for bits in itertools.product((0, 1), repeat=4):
                        if bits[lit.var] != lit.bit:
                            continue
                        assignment = Assignment(dict(enumerate(bits)))
                        assert evaluate(cnf, assignment) == evaluate(reduced, assignment), (cnf, lit, bits)

    def test_assignment_is_write_once(self):
        assignment = Assignment().assign(0, 1)
        with pytest.raises(InstanceError):
            assignment.assign(0, 0)


class TestCnfHelpers:
    def test_validate_uniform(self):
        cnf = Cnf.from_signed([[1, 2], [3], [-1, -2]])
        report = validate_uniform(cnf, 2)
        assert not report.ok
        assert report.offending == (1,)
        assert validate_uniform(build_fib_tt(4).cnf, 4)

    def test_dedupe_keeps_first_occurrence(self):
        cnf = Cnf.from_signed([[1, 2], [2, 1], [-1]])
        assert dedupe(cnf) == Cnf.from_signed([[1, 2], [-1]])

    def test_prune_padding_keeps_parity(self):
        g = GameInstance(Cnf.from_signed([[1, 4]]), 4, Player.T, Player.F)
        pruned = prune_padding(g)
        assert pruned.universe_size == 2
        assert pruned.cnf == Cnf.from_signed([[1, 2]])

        g = GameInstance(Cnf.from_signed([[1, 5]]), 5, Player.T, Player.T)
        assert prune_padding(g).universe_size == 3


class TestInstanceFormat:
    def test_serialize_xor_pairs(self):
        assert serialize_instance(build_xor_pairs(2)) == "p cnfgame 2 2 T F\n1 2 0\n-1 -2 0\n"

    def test_parse_roundtrip(self):
        g = build_fib_tt(3)
        assert parse_instance(serialize_instance(g)) == g

    def test_parse_with_comments_and_empty_clause(self):
        g = parse_instance("c a comment\np cnfgame 1 1 T T\n0\n")
        assert g.cnf.has_empty_clause()

    def test_prune_on_parse(self):
        g = parse_instance("p cnfgame 6 1 T F\n1 6 0\n", prune=True)
        assert g.universe_size == 2

    @pytest.mark.parametrize("text, line", [
        ("p cnfgame 2 1 T T\n1 0\n", 1),
        ("p cnfgame 2 1 T F\n1 3 0\n", 2),
        ("p cnfgame 2 2 T F\n1 2 0\n", 1),
        ("1 2 0\n", 1),
        ("p cnfgame 2 1 T F\n1 1 0\n", 2),
        ("p cnfgame 2 1 T F\n1 0 2 0\n", 2),
        ("p cnfgame 2 1 T F\n\n1 2\n", 3),
        ("p dimacs 2 1\n", 1),
    ])
    def test_parse_errors_carry_line(self, text, line):
        with pytest.raises(InstanceFormatError) as info:
            parse_instance(text)
        assert info.value.line == line


class TestTranscripts:
    def test_roundtrip(self):
        g = build_xor_pairs(2)
        moves = (Move(Player.T, 0, 1), Move(Player.F, 1, 1))
        transcript = Transcript(g, moves, Player.F)
        text = serialize_transcript(transcript)
        assert text == "t F\nT 1\nF 2\n"
        assert parse_transcript(text, g) == transcript

    def test_wrong_winner_rejected(self):
        g = build_xor_pairs(2)
        # x0=1, x1=0 satisfies both xor clauses
        with pytest.raises(InstanceFormatError):
            parse_transcript("t F\nT 1\nF -2\n", g)
        assert parse_transcript("t T\nT 1\nF -2\n", g).winner == Player.T

    def test_out_of_turn_rejected(self):
        with pytest.raises(InstanceFormatError):
            parse_transcript("t ?\nF 1\n", build_xor_pairs(2))

    @pytest.mark.parametrize("text, line", [
        ("t ?\nT 1\nT 2\n", 3),
        ("t ?\nT 1\n\nF 1\n", 4),
        ("t ?\nT 1\nF 9\n", 3),
        ("c note\nt F\nT 1\nF -2\n", 2),
    ])
    def test_violations_name_their_line(self, text, line):
        with pytest.raises(InstanceFormatError) as info:
            parse_transcript(text, build_xor_pairs(2))
        assert info.value.line == line
