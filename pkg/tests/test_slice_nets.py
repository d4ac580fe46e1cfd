import pytest
from hypothesis import given, settings, strategies as st

from mallnet.errors import NotANet, NotReady, ParseError
from mallnet.proofs import Ax, check_proof, random_proof
from mallnet.rewrite import ERROR, Root
from mallnet.slice_nets import (
    LinkingSet,
    erase_root_ls,
    format_slice_net,
    is_slice_net,
    linking_set_problem,
    net_verdict,
    normal_forms_ls,
    normalize_ls,
    parse_slice_net,
    ready_roots_ls,
    sequentialize_slice_net,
    step_bound,
    validate_linking_set,
)
from mallnet.syntax import Literal, parse_sequent, render
from mallnet.translate import to_slice_net

from fixtures import blowup, double_with_left


def ls(text, *members):
    return LinkingSet(parse_sequent(text), frozenset(frozenset(m) for m in members))


def double_with():
    return ls("(p & p), (~p & ~p)", [(1, 3)], [(1, 4)], [(2, 3)], [(2, 4)])


def test_double_with_slice_net():
    assert double_with() == to_slice_net(double_with_left())
    assert validate_linking_set(double_with())
    assert is_slice_net(double_with())


def test_member_invariants():
    assert not validate_linking_set(ls("a, ~a", []))
    assert "dual" in linking_set_problem(ls("a, a", [(1, 2)]))
    assert "share leaf" in linking_set_problem(ls("a, ~a, ~a", [(1, 2), (1, 3)]))
    assert "additive resolution" in linking_set_problem(ls("(a & a), ~a, ~a", [(1, 3)], [(1, 3), (2, 4)]))


def test_both_withs_ready_on_double_with():
    assert set(ready_roots_ls(double_with())) == {Root(0, "with"), Root(1, "with")}


def test_tensor_needs_a_full_product():
    # only the "diagonal" half of the four combinations
    diag = ls("((~a & ~a) * (~b & ~b)), a, b", [(1, 5), (3, 6)], [(2, 5), (4, 6)])
    assert ready_roots_ls(diag) == []
    assert not is_slice_net(diag)
    full = ls(
        "((~a & ~a) * (~b & ~b)), a, b",
        [(1, 5), (3, 6)], [(2, 5), (4, 6)], [(1, 5), (4, 6)], [(2, 5), (3, 6)],
    )
    assert ready_roots_ls(full) == [Root(0, "tensor")]
    assert is_slice_net(full)


def test_tensor_single_linking():
    x = ls("(a * b), ~a, ~b", [(1, 3), (2, 4)])
    assert ready_roots_ls(x) == [Root(0, "tensor")]
    left, right = erase_root_ls(x, Root(0, "tensor"))
    assert render(left.sequent) == "a, ~a" and render(right.sequent) == "b, ~b"


def test_with_partitions_by_side():
    l0, l1 = erase_root_ls(double_with(), Root(1, "with"))
    for part in (l0, l1):
        assert render(part.sequent) == "(p & p), ~p"
        assert part.linkings == {frozenset({(1, 3)}), frozenset({(2, 3)})}


def test_plus_keeps_the_touched_side():
    x = ls("a, (b + ~a)", [(1, 3)])
    assert ready_roots_ls(x) == [Root(1, "plus")]
    (y,) = erase_root_ls(x, Root(1, "plus"))
    assert render(y.sequent) == "a, ~a"


def test_axiom_case():
    x = ls("a, ~a", [(1, 2)])
    form, trace = normalize_ls(frozenset({x}))
    assert form == frozenset() and [t.action for t in trace] == ["axiom"]


def test_with_with_an_empty_side_errors():
    x = ls("(a & a), ~a", [(1, 3)])
    form, trace = normalize_ls(frozenset({x}))
    assert form is ERROR


def test_dropping_a_linking_breaks_double_with():
    members = list(double_with().linkings)
    for drop in members:
        rest = LinkingSet(double_with().sequent, frozenset(m for m in members if m != drop))
        assert not is_slice_net(rest)


def test_erase_requires_readiness():
    with pytest.raises(NotReady):
        erase_root_ls(ls("(a * b), (~a * ~b)", [(1, 3), (2, 4)]), Root(0, "tensor"))


def test_verdicts_and_sequentialization():
    assert net_verdict(double_with()) == (True, "slice net: OK (4 linkings)")
    p = sequentialize_slice_net(double_with())
    assert check_proof(p) == double_with().sequent
    assert to_slice_net(p) == double_with()
    assert sequentialize_slice_net(ls("a, ~a", [(1, 2)])) == Ax(Literal("a"))
    with pytest.raises(NotANet):
        sequentialize_slice_net(ls("(a * b), (~a * ~b)", [(1, 3), (2, 4)]))


def test_file_round_trip():
    text = format_slice_net(double_with())
    assert text.splitlines()[:4] == ["net slices", "sequent: (p & p), (~p & ~p)", "linking", "  link 1 3"]
    assert parse_slice_net(text) == double_with()


@pytest.mark.parametrize(
    "text",
    [
        "net slices\nlinking\n  link 1 2\n",
        "net slices\nsequent: a, ~a\n  link 1 2\n",
        "net slices\nsequent: a, ~a\nlinking\n  link 1\n",
        "net slices\nsequent: a, ~a\nlinking\n  link 1 9\n",
        "net slices\nsequent: a, ~a\nconflict L1 L2\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_slice_net(text)


def test_blowup_slice_net_is_correct():
    s = to_slice_net(blowup(4))
    assert len(s) == 16
    assert is_slice_net(s)


@given(st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_translated_slice_nets(seed):
    p = random_proof(seed, 10)
    s = to_slice_net(p)
    assert validate_linking_set(s)
    form, trace = normalize_ls(frozenset({s}))
    assert form == frozenset()
    assert len(trace) <= step_bound(s)
    assert to_slice_net(sequentialize_slice_net(s)) == s


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_unique_normal_form(seed):
    s = to_slice_net(random_proof(seed, 7))
    assert normal_forms_ls(frozenset({s})) == {frozenset()}
