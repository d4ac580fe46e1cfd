from hypothesis import given, settings, strategies as st

from mallnet.circuits import validate_circuit
from mallnet.linking import equivalent, is_slicing, slices
from mallnet.proofs import Ax, axiom_count, check_proof, random_proof, transpose_adjacent_withs
from mallnet.slice_nets import validate_linking_set
from mallnet.syntax import Literal, render
from mallnet.translate import slice_net_of, to_circuit, to_conflict_net, to_slice_net

from fixtures import TENSOR_BELOW, TENSOR_ABOVE, blowup, two_slice_linking, double_with_left, double_with_right, proof, permuted_pairs


def pairs_of(l):
    return sorted(l.pair(k) for k in l.links)


def test_axiom_translations():
    a = Ax(Literal("a"))
    l = to_conflict_net(a)
    assert pairs_of(l) == [(1, 2)] and render(l.sequent) == "a, ~a"
    x = to_circuit(a)
    assert [k for _, k in x.nodes] == ["axiom"]
    assert [str(x.wire[e].formula) for e in x.exits] == ["a", "~a"]
    s = to_slice_net(a)
    assert s.linkings == {frozenset({(1, 2)})}


def test_plus_over_with_net():
    for p in permuted_pairs()["plus"]:
        l = to_conflict_net(p)
        assert pairs_of(l) == [(2, 3), (2, 4)]
        assert l.conflict_count() == 1


def test_double_with_net():
    l = to_conflict_net(double_with_left())
    assert pairs_of(l) == [(1, 3), (1, 4), (2, 3), (2, 4)]
    assert l.conflict_count() == 6


def test_link_ids_follow_axiom_order():
    l = to_conflict_net(double_with_left())
    assert l.links == ["L1", "L2", "L3", "L4"]


def test_rows_are_invariant():
    for name, (left, right) in permuted_pairs().items():
        assert equivalent(to_conflict_net(left), to_conflict_net(right)), name


def test_transposition_keeps_the_net():
    p = double_with_left()
    assert equivalent(to_conflict_net(p), to_conflict_net(transpose_adjacent_withs(p)))


def test_raising_tensor_changes_the_net():
    left, right = to_conflict_net(proof(TENSOR_BELOW)), to_conflict_net(proof(TENSOR_ABOVE))
    assert (len(left), len(right)) == (3, 4)
    assert equivalent(left, two_slice_linking())


def test_double_with_circuits_have_the_expected_node_census():
    for p in (double_with_left(), double_with_right()):
        x = to_circuit(p)
        kinds = sorted(k for _, k in x.nodes)
        assert kinds.count("axiom") == 4 and kinds.count("with") == 3 and kinds.count("contraction") == 3
        assert render(validate_circuit(x)) == "(p & p), (~p & ~p)"


def test_double_with_slice_net():
    s = to_slice_net(double_with_left())
    assert len(s) == 4
    assert all(len(m) == 1 for m in s.linkings)
    assert s == to_slice_net(double_with_right())


def test_blowup_counts():
    for n in range(1, 7):
        p = blowup(n)
        assert len(to_conflict_net(p)) == 2 * n
        assert len(to_slice_net(p)) == 2 ** n


@given(st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_translations_of_random_proofs(seed):
    p = random_proof(seed, 12)
    gamma = check_proof(p)
    l = to_conflict_net(p)
    assert l.sequent == gamma
    assert len(l) == axiom_count(p)
    assert is_slicing(l)
    assert validate_circuit(to_circuit(p)) == gamma
    ls = slice_net_of(l)
    assert validate_linking_set(ls)
    assert len(ls) == len(slices(l))
