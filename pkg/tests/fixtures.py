"""Worked examples shared by the test modules."""
from pathlib import Path

from mallnet.linking import Linking
from mallnet.proofs import Ax, Tensor, With, parse_proof, with_at
from mallnet.syntax import Literal, parse_sequent

DATA = Path(__file__).parent / "data"

p = Literal("p")


def double_with_left():
    """& on the second formula, each premise built by & on the first."""
    return With(with_at(Ax(p), Ax(p), 0), with_at(Ax(p), Ax(p), 0))


def double_with_right():
    return with_at(With(Ax(p), Ax(p)), With(Ax(p), Ax(p)), 0)


# ⊕ raised over &
PLUS_LEFT = "(perm (2 1) (plus2 b (perm (2 1) (with (ax ~a) (ax ~a)))))"
PLUS_RIGHT = """
(with (perm (2 1) (plus2 b (perm (2 1) (ax ~a))))
      (perm (2 1) (plus2 b (perm (2 1) (ax ~a)))))
"""

# ⅋ raised over &; each branch proves a, c, (~c * ~a)
_BRANCH = "(perm (3 1 2) (tensor (ax c) (ax ~a)))"
PAR_LEFT = f"(perm (2 1) (parr (perm (3 1 2) (with {_BRANCH} {_BRANCH}))))"
_PAR_BRANCH = f"(perm (2 1) (parr (perm (3 1 2) {_BRANCH})))"
PAR_RIGHT = f"(with {_PAR_BRANCH} {_PAR_BRANCH})"

# ⊗ below & against ⊗ above &: the nets differ
TENSOR_BELOW = "(tensor (ax p) (with (ax ~q) (ax ~q)))"
TENSOR_ABOVE = "(with (tensor (ax p) (ax ~q)) (tensor (ax p) (ax ~q)))"


def proof(text):
    return parse_proof(text)


def permuted_pairs():
    return {
        "plus": (proof(PLUS_LEFT), proof(PLUS_RIGHT)),
        "with": (double_with_left(), double_with_right()),
        "par": (proof(PAR_LEFT), proof(PAR_RIGHT)),
    }


def two_slice_linking():
    """P, ~P ⊗ ~Q, Q & Q with links l: P–~P, m: ~Q–Q, n: ~Q–Q' and m # n."""
    s = parse_sequent("p, (~p * ~q), (q & q)")
    return Linking.build(s, {"l": (1, 2), "m": (3, 4), "n": (3, 5)}, [("m", "n")])


def tensor_cycle():
    s = parse_sequent("(a * b), (~a * ~b)")
    return Linking.build(s, {"L1": (1, 3), "L2": (2, 4)})


def blowup(n):
    """Left-nested ⊗ of ``n`` proofs of (a ⅋ ~a) & (a ⅋ ~a)."""
    block = proof("(with (parr (ax a)) (parr (ax a)))")
    out = block
    for _ in range(n - 1):
        out = Tensor(out, block)
    return out


SMALL_SEQUENTS = [
    "a, ~a",
    "(a & a), ~a",
    "(a | ~a)",
    "(p & p), (~p & ~p)",
    "a, (~a + ~a)",
    "(a * b), ~a, ~b",
    "(a | b), (~a * ~b)",
    "(a & b), (~a + ~b)",
    "(a * ~a), (~a | a)",
    "((a | ~a) & (a | ~a))",
    "(a * (b & b)), ~a, (~b + ~b)",
    "(a & a), (~a * b), ~b",
    "a, ~a, (b & ~b)",
    "(a + a), (~a & ~a)",
    "(a & (a & a)), ~a",
    "(a * b), (~a * ~b)",
]
