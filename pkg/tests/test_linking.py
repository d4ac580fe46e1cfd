import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from mallnet.coherence import is_contractible
from mallnet.errors import InvalidLinking, ParseError
from mallnet.linking import (
    Linking,
    addable_pairs,
    canonical_form,
    check_linking,
    detect_kind,
    equivalent,
    format_conflict_net,
    is_additive_resolution,
    is_map,
    is_maximal_map,
    is_slicing,
    parse_conflict_net,
    sequent_space,
    slices,
    validate_linking,
)
from mallnet.proofs import random_proof
from mallnet.syntax import parse_sequent
from mallnet.translate import to_conflict_net

import oracles
from fixtures import two_slice_linking, double_with_left, SMALL_SEQUENTS

PLUS_SEQUENT = parse_sequent("(b + ~a), (a & a)")


def test_sequent_space_of_two_slice_linking_sequent():
    c = sequent_space(parse_sequent("p, ((~p * ~q) | (q & q))"))
    assert c.tokens == frozenset(range(1, 6))
    assert c.conflicts() == frozenset({frozenset({4, 5})})
    assert sequent_space(parse_sequent("a, ~a")).adjacent(1, 2)


def test_empty_sequent_has_no_space():
    from mallnet.syntax import Sequent

    with pytest.raises(ValueError):
        sequent_space(Sequent(()))


def test_plus_over_with_linking_is_valid():
    l = Linking.build(PLUS_SEQUENT, {"L1": (2, 3), "L2": (2, 4)}, [("L1", "L2")])
    assert validate_linking(l)


def test_overlap_without_conflict_is_invalid():
    l = Linking.build(PLUS_SEQUENT, {"L1": (2, 3), "L2": (2, 4)}, close_overlap=False)
    assert not validate_linking(l)
    with pytest.raises(InvalidLinking, match="overlap"):
        check_linking(l)


def test_non_dual_link_is_invalid():
    l = Linking.build(PLUS_SEQUENT, {"L1": (3, 4)})
    with pytest.raises(InvalidLinking, match="dual pair"):
        check_linking(l)


def test_two_slice_linking_is_a_slicing_with_two_slices():
    l = two_slice_linking()
    assert is_map(l) and is_maximal_map(l) and is_slicing(l)
    got = {frozenset(s.space.tokens) for s in slices(l)}
    assert got == {frozenset({"l", "m"}), frozenset({"l", "n"})}
    for s in slices(l):
        assert is_additive_resolution(l.sequent, s.image)


def test_two_slice_linking_without_one_attachment_is_not_maximal():
    l = two_slice_linking()
    cut = Linking(l.sequent, l.space, l.attachment - {("n", 5)})
    assert is_map(cut)
    assert ("n", 5) in addable_pairs(cut)
    assert not is_maximal_map(cut)


def test_two_slice_linking_without_the_whole_link_stays_maximal():
    l = two_slice_linking().restrict({"l", "m"})
    assert is_map(l) and is_maximal_map(l)


def test_adjacent_links_on_conflicting_leaves_are_not_a_map():
    s = parse_sequent("~q, ~q, (q & q)")
    l = Linking.build(s, {"m": (1, 3), "n": (2, 4)})
    assert not is_map(l)


def test_single_link():
    l = Linking.build(parse_sequent("a, ~a"), {"L1": (1, 2)})
    assert is_map(l) and is_maximal_map(l) and is_slicing(l)
    assert slices(l) == {l}


def test_p4_link_space_is_not_a_slicing():
    s = parse_sequent("a, ~a, a, ~a, a, ~a, a, ~a")
    links = {f"L{i}": (2 * i - 1, 2 * i) for i in range(1, 5)}
    conflicts = [("L1", "L3"), ("L1", "L4"), ("L2", "L4")]
    l = Linking.build(s, links, conflicts)
    assert not is_contractible(l.space)
    assert not is_slicing(l)


def test_double_with_net_has_four_single_link_slices():
    l = to_conflict_net(double_with_left())
    assert len(l) == 4 and l.conflict_count() == 6
    assert sorted(len(s) for s in slices(l)) == [1, 1, 1, 1]


def test_full_leaf_set_is_not_a_resolution():
    s = parse_sequent("p, ((~p * ~q) | (q & q))")
    assert not is_additive_resolution(s, {1, 2, 3, 4, 5})
    assert is_additive_resolution(s, {1, 2, 3, 4})


def test_additive_resolutions_match_side_choices():
    for text in SMALL_SEQUENTS:
        s = parse_sequent(text)
        expected = oracles.additive_resolutions(s)
        leaves = list(s.leaf_ids())
        for r in range(len(leaves) + 1):
            for sub in itertools.combinations(leaves, r):
                assert is_additive_resolution(s, sub) == (frozenset(sub) in expected)


def random_linking(rng, s):
    pairs = [(x, y) for x, y in itertools.combinations(s.leaf_ids(), 2) if s.literal(x).dual() == s.literal(y)]
    k = rng.randint(1, min(3, len(pairs)))
    chosen = rng.sample(pairs, k)
    names = [f"L{i}" for i in range(1, k + 1)]
    conf = [e for e in itertools.combinations(names, 2) if rng.random() < 0.5]
    return Linking.build(s, dict(zip(names, chosen)), conf)


def test_map_and_maximality_against_oracle():
    rng = random.Random(7)
    usable = [parse_sequent(t) for t in SMALL_SEQUENTS if t != "a, ~a, (b & ~b)"]
    for _ in range(400):
        s = rng.choice(usable)
        l = random_linking(rng, s)
        conf = l.space.conflicts()
        args = (s, l.space.tokens, conf, set(l.attachment))
        assert is_map(l) == oracles.is_map(*args)
        assert (is_map(l) and is_maximal_map(l)) == oracles.is_maximal_map(*args)


def test_format_round_trip_and_implicit_overlaps():
    l = Linking.build(PLUS_SEQUENT, {"L1": (2, 3), "L2": (2, 4)})
    text = format_conflict_net(l)
    assert "conflict" not in text.split("\n", 2)[2]
    assert parse_conflict_net(text) == l
    explicit = text + "conflict L1 L2\n"
    assert parse_conflict_net(explicit) == l


def test_parse_accepts_comments_and_free_order():
    text = """net conflict   # header
    link L2 2 4
    sequent: (b + ~a), (a & a)
    link L1 2 3
    """
    l = parse_conflict_net(text)
    assert equivalent(l, Linking.build(PLUS_SEQUENT, {"A": (2, 3), "B": (2, 4)}))


@pytest.mark.parametrize(
    "text",
    [
        "",
        "net circuit\n",
        "net conflict\nlink L1 1 2\n",
        "net conflict\nsequent: a, ~a\nlink L1 1 x\n",
        "net conflict\nsequent: a, ~a\nconflict L1 L2\n",
        "net conflict\nsequent: a, ~a\nlink L1 1 2\nlink L1 1 2\n",
        "net conflict\nsequent: (a * \n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_conflict_net(text)


def test_detect_kind():
    assert detect_kind("# c\nnet slices\n") == "slices"
    with pytest.raises(ParseError):
        detect_kind("sequent: a\n")


def test_equivalence_ignores_link_names():
    l = two_slice_linking()
    renamed = l.rename({"l": "x", "m": "y", "n": "z"}.__getitem__)
    assert equivalent(l, renamed)
    assert canonical_form(l) == canonical_form(renamed)
    other = Linking.build(l.sequent, {"l": (1, 2), "m": (3, 4), "n": (3, 5)}, [("l", "m")])
    assert not equivalent(l, other)


@given(st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_translated_nets_are_slicings_whose_slices_are_resolutions(seed):
    l = to_conflict_net(random_proof(seed, 10))
    assert is_slicing(l)
    for s in slices(l):
        assert is_additive_resolution(l.sequent, s.image)


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_sequent_spaces_are_contractible(seed):
    s = to_conflict_net(random_proof(seed, 10)).sequent
    assert is_contractible(sequent_space(s))
