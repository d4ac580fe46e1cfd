import pytest
from hypothesis import given, settings, strategies as st

from mallnet.errors import NotTransposable, ParseError, RuleMismatch, WithContextMismatch
from mallnet.proofs import (
    Ax,
    Par,
    Perm,
    Plus,
    Tensor,
    With,
    check_proof,
    enumerate_proofs,
    normalize_perms,
    parse_proof,
    random_proof,
    render_proof,
    rule_count,
    transpose_adjacent_withs,
)
from mallnet.syntax import Literal, parse_sequent, render

from fixtures import DATA, PLUS_LEFT, PLUS_RIGHT, double_with_left, double_with_right, proof

a = Literal("a")


def test_axiom():
    assert render(check_proof(Ax(Literal("p")))) == "p, ~p"


def test_rules_act_at_fixed_positions():
    assert render(check_proof(Par(Ax(a)))) == "(a | ~a)"
    assert render(check_proof(Plus(2, Literal("b"), Ax(a)))) == "a, (b + ~a)"
    assert render(check_proof(Plus(1, Literal("b"), Ax(a)))) == "a, (~a + b)"
    assert render(check_proof(Tensor(Ax(a), Ax(a)))) == "a, (~a * a), ~a"
    assert render(check_proof(With(Ax(a), Ax(a)))) == "a, (~a & ~a)"
    assert render(check_proof(Perm((1, 0), Ax(a)))) == "~a, a"


def test_plus_over_with_conclusions():
    assert render(check_proof(proof(PLUS_LEFT))) == "(b + ~a), (a & a)"
    assert render(check_proof(proof(PLUS_RIGHT))) == "(b + ~a), (a & a)"


def test_with_context_mismatch():
    left = Perm((1, 0), Ax(a))  # ~a, a
    right = Perm((1, 0), Ax(Literal("b")))  # ~b, b
    with pytest.raises(WithContextMismatch) as e:
        check_proof(With(left, right))
    assert e.value.path == ()


def test_mismatch_reports_path():
    bad = Tensor(Ax(a), Perm((0, 0), Ax(a)))
    with pytest.raises(RuleMismatch) as e:
        check_proof(bad)
    assert e.value.path == (1,)


def test_par_needs_two_formulas():
    with pytest.raises(RuleMismatch):
        check_proof(Par(Par(Ax(a))))


def test_text_round_trip():
    for text in [PLUS_LEFT, PLUS_RIGHT, "(ax ~a)", "(plus1 (b & c) (ax a))"]:
        p = parse_proof(text)
        assert parse_proof(render_proof(p)) == p


@pytest.mark.parametrize("text", ["", "(ax)", "(ax a", "(foo a)", "(perm (1 x) (ax a))", "(ax a) x"])
def test_bad_proof_text(text):
    with pytest.raises(ParseError):
        parse_proof(text)


def test_enumeration_small_cases():
    assert [render_proof(p) for p in enumerate_proofs(parse_sequent("a, ~a"))] == ["(ax a)"]
    assert list(enumerate_proofs(parse_sequent("a, a"))) == []
    # compare rule skeletons: perms dropped, axioms unoriented
    s = parse_sequent("(b + ~a), (a & a)")
    found = {skeleton(p) for p in enumerate_proofs(s)}
    assert skeleton(proof(PLUS_LEFT)) in found
    assert skeleton(proof(PLUS_RIGHT)) in found
    assert len(found) == 2


def skeleton(p):
    if isinstance(p, Perm):
        return skeleton(p.premise)
    if isinstance(p, Ax):
        return ("ax", p.literal.name)
    if isinstance(p, Plus):
        return ("plus", p.side, p.other, skeleton(p.premise))
    return (type(p).__name__,) + tuple(skeleton(c) for c in p.children)


def test_enumerated_proofs_conclude_exactly():
    for text in ["(a & a), (~a + b)", "(a * b), (~b | ~a)", "(p & p), (~p & ~p)"]:
        s = parse_sequent(text)
        proofs = list(enumerate_proofs(s))
        assert proofs
        assert all(check_proof(p) == s for p in proofs)


def test_double_with_transposition():
    t = transpose_adjacent_withs(double_with_left())
    assert t == double_with_right()
    assert transpose_adjacent_withs(t) == double_with_left()


def test_transposition_needs_the_pattern():
    with pytest.raises(NotTransposable):
        transpose_adjacent_withs(Ax(a))
    with pytest.raises(NotTransposable):
        transpose_adjacent_withs(With(Ax(a), Ax(a)))


def test_random_proof_smallest():
    assert isinstance(random_proof(0, 1), Ax)


@given(st.integers(0, 10**6), st.integers(1, 14))
@settings(max_examples=200)
def test_random_proofs_are_valid_and_bounded(seed, k):
    p = random_proof(seed, k)
    check_proof(p)
    assert rule_count(p) <= k
    assert random_proof(seed, k) == p


def test_random_conclusions_golden():
    lines = (DATA / "random_conclusions.txt").read_text().splitlines()
    rows = [l.split("\t") for l in lines if not l.startswith("#")]
    assert len(rows) == 500
    for seed, conclusion in rows:
        assert render(check_proof(random_proof(int(seed), 12))) == conclusion


@given(st.integers(0, 10**6))
@settings(max_examples=60)
def test_normalize_perms_keeps_conclusion(seed):
    p = random_proof(seed, 10)
    assert check_proof(normalize_perms(p)) == check_proof(p)
