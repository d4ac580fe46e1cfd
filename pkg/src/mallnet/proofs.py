"""MALL sequent-calculus proofs.

The rules act at fixed positions: ⅋ on the last two formulas, ⊕ and & on the
last formula, ⊗ on the last formula of its left premise and the first of its
right premise.  Everything else is reached through explicit ``Perm`` nodes.
A ``Perm`` with image list ``sigma`` concludes ``premise[sigma[0]],
premise[sigma[1]], ...`` (0-based here, 1-based in the text format).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import NotTransposable, ParseError, RuleMismatch, WithContextMismatch
from .syntax import Compound, Formula, Literal, Op, Scanner, Sequent, parse_formula_from


class Proof:
    """Base class of proof nodes."""

    children: tuple = ()

    @property
    def conclusion(self) -> Sequent:
        return check_proof(self)


@dataclass(frozen=True)
class Ax(Proof):
    literal: Literal

    @property
    def children(self):
        return ()


@dataclass(frozen=True)
class Perm(Proof):
    sigma: tuple
    premise: Proof

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(self.sigma))

    @property
    def children(self):
        return (self.premise,)


@dataclass(frozen=True)
class Par(Proof):
    premise: Proof

    @property
    def children(self):
        return (self.premise,)


@dataclass(frozen=True)
class Plus(Proof):
    """``side`` 1 keeps the premise formula on the left of the new ⊕."""

    side: int
    other: Formula
    premise: Proof

    @property
    def children(self):
        return (self.premise,)


@dataclass(frozen=True)
class Tensor(Proof):
    left: Proof
    right: Proof

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class With(Proof):
    left: Proof
    right: Proof

    @property
    def children(self):
        return (self.left, self.right)


_CACHE = "_conclusion"


def check_proof(p: Proof) -> Sequent:
    """Return the conclusion of ``p`` or raise RuleMismatch."""
    return _check(p, ())


def _check(p, path):
    cached = p.__dict__.get(_CACHE)
    if cached is not None:
        return cached
    prem = [_check(ch, path + (i,)) for i, ch in enumerate(p.children)]
    out = Sequent(_conclude(p, prem, path))
    object.__setattr__(p, _CACHE, out)
    return out


def _conclude(p, prem, path):
    if isinstance(p, Ax):
        if not isinstance(p.literal, Literal):
            raise RuleMismatch(path, "axiom needs a literal")
        return (p.literal, p.literal.dual())
    if isinstance(p, Perm):
        g = prem[0].formulas
        if sorted(p.sigma) != list(range(len(g))):
            raise RuleMismatch(path, f"{_sigma_text(p.sigma)} is not a permutation of {len(g)} formulas")
        return tuple(g[j] for j in p.sigma)
    if isinstance(p, Par):
        g = prem[0].formulas
        if len(g) < 2:
            raise RuleMismatch(path, "par needs two formulas")
        return g[:-2] + (Compound(Op.PAR, g[-2], g[-1]),)
    if isinstance(p, Plus):
        g = prem[0].formulas
        if p.side not in (1, 2):
            raise RuleMismatch(path, f"plus side must be 1 or 2, not {p.side}")
        if not g:
            raise RuleMismatch(path, "plus needs a formula")
        a = g[-1]
        new = Compound(Op.PLUS, a, p.other) if p.side == 1 else Compound(Op.PLUS, p.other, a)
        return g[:-1] + (new,)
    if isinstance(p, Tensor):
        g, d = prem[0].formulas, prem[1].formulas
        if not g or not d:
            raise RuleMismatch(path, "tensor premises must be non-empty")
        return g[:-1] + (Compound(Op.TENSOR, g[-1], d[0]),) + d[1:]
    if isinstance(p, With):
        g, d = prem[0].formulas, prem[1].formulas
        if not g or not d:
            raise RuleMismatch(path, "with premises must be non-empty")
        if g[:-1] != d[:-1]:
            raise WithContextMismatch(
                path,
                f"with premises have different contexts: "
                f"{', '.join(map(str, g[:-1]))} vs {', '.join(map(str, d[:-1]))}",
            )
        return g[:-1] + (Compound(Op.WITH, g[-1], d[-1]),)
    raise RuleMismatch(path, f"unknown proof node {type(p).__name__}")


def rule_count(p: Proof) -> int:
    """Number of non-permutation rules."""
    own = 0 if isinstance(p, Perm) else 1
    return own + sum(rule_count(ch) for ch in p.children)


def axiom_count(p: Proof) -> int:
    if isinstance(p, Ax):
        return 1
    return sum(axiom_count(ch) for ch in p.children)


def subproof(p: Proof, path) -> Proof:
    for i in path:
        p = p.children[i]
    return p


def replace_at(p: Proof, path, new: Proof) -> Proof:
    if not path:
        return new
    i, rest = path[0], tuple(path[1:])
    kids = list(p.children)
    kids[i] = replace_at(kids[i], rest, new)
    return _with_children(p, kids)


def _with_children(p, kids):
    if isinstance(p, Perm):
        return Perm(p.sigma, kids[0])
    if isinstance(p, Par):
        return Par(kids[0])
    if isinstance(p, Plus):
        return Plus(p.side, p.other, kids[0])
    if isinstance(p, Tensor):
        return Tensor(*kids)
    if isinstance(p, With):
        return With(*kids)
    return p


# -- builders ----------------------------------------------------------------
#
# These place a rule at an arbitrary formula position by wrapping it in the
# permutations the fixed-position schemas need.


def reorder(p: Proof, order) -> Proof:
    """Conclude ``p.conclusion[order[0]], p.conclusion[order[1]], ...``."""
    order = tuple(order)
    if order == tuple(range(len(order))):
        return p
    if isinstance(p, Perm):
        return reorder(p.premise, tuple(p.sigma[i] for i in order))
    return Perm(order, p)


def _to_end(n, *positions):
    rest = [i for i in range(n) if i not in positions]
    return rest + list(positions)


def _from_end(n, k):
    """Inverse placement: formula at the end goes to position ``k``."""
    # conclusion of the rule: rest (n - 1 formulas) followed by the new one
    order = []
    for i in range(n):
        if i < k:
            order.append(i)
        elif i == k:
            order.append(n - 1)
        else:
            order.append(i - 1)
    return order


def par_at(p: Proof, k: int) -> Proof:
    """Fuse positions ``k`` and ``k+1`` of ``p``'s conclusion into one ⅋."""
    n = len(p.conclusion)
    core = Par(reorder(p, _to_end(n, k, k + 1)))
    return reorder(core, _from_end(n - 1, k))


def plus_at(p: Proof, k: int, side: int, other: Formula) -> Proof:
    n = len(p.conclusion)
    core = Plus(side, other, reorder(p, _to_end(n, k)))
    return reorder(core, _from_end(n, k))


def with_at(left: Proof, right: Proof, k: int) -> Proof:
    n = len(left.conclusion)
    core = With(reorder(left, _to_end(n, k)), reorder(right, _to_end(n, k)))
    return reorder(core, _from_end(n, k))


def tensor_join(left: Proof, kl: int, right: Proof, kr: int, layout) -> Proof:
    """⊗ of ``left[kl]`` and ``right[kr]``.

    ``layout`` describes the conclusion: a sequence whose items are
    ``("l", i)``, ``("r", j)`` or ``"t"`` for the new ⊗ formula.
    """
    nl, nr = len(left.conclusion), len(right.conclusion)
    lrest = [i for i in range(nl) if i != kl]
    rrest = [j for j in range(nr) if j != kr]
    core = Tensor(reorder(left, lrest + [kl]), reorder(right, [kr] + rrest))
    # positions in the core conclusion
    where = {("l", i): n for n, i in enumerate(lrest)}
    where["t"] = len(lrest)
    where.update({("r", j): len(lrest) + 1 + n for n, j in enumerate(rrest)})
    return reorder(core, [where[item if item == "t" else tuple(item)] for item in layout])


def normalize_perms(p: Proof) -> Proof:
    """Merge stacked permutations and drop identity ones, everywhere."""
    kids = [normalize_perms(ch) for ch in p.children]
    if isinstance(p, Perm):
        return reorder(kids[0], p.sigma)
    return _with_children(p, kids)


def _core(p):
    """Look through permutations: return ``(core, sigma)`` with
    ``p.conclusion[i] == core.conclusion[sigma[i]]``."""
    n = len(p.conclusion)
    sigma = tuple(range(n))
    while isinstance(p, Perm):
        sigma = tuple(p.sigma[i] for i in sigma)
        p = p.premise
    return p, sigma


def transpose_adjacent_withs(p: Proof, path=()) -> Proof:
    """Swap a &-rule with the two &-rules directly above it.

    The node at ``path`` (possibly behind permutations) must be a & whose two
    premises are, up to permutation, &-rules on the same other formula.
    """
    node = subproof(p, path)
    outer, s = _core(node)
    if not isinstance(outer, With):
        raise NotTransposable("the node is not a &-rule")
    q0, q1 = outer.left, outer.right
    c0, t0 = _core(q0)
    c1, t1 = _core(q1)
    if not (isinstance(c0, With) and isinstance(c1, With)):
        raise NotTransposable("the premises are not both &-rules")
    n = len(q0.conclusion)
    j0 = t0.index(n - 1)
    j1 = t1.index(n - 1)
    if j0 != j1 or j0 == n - 1:
        raise NotTransposable("the upper &-rules act on different or outer formulas")
    j = j0
    # premise r_ab: side a of the upper rule, side b of the lower one
    r00, r01 = reorder(c0.left, t0), reorder(c0.right, t0)
    r10, r11 = reorder(c1.left, t1), reorder(c1.right, t1)
    a = With(r00, r10)
    b = With(r01, r11)
    try:
        a.conclusion, b.conclusion
    except RuleMismatch as e:
        raise NotTransposable(f"premises do not recombine: {e}") from e
    new = reorder(with_at(a, b, j), s)
    return normalize_perms(replace_at(p, path, new))


# -- proof search --------------------------------------------------------------


def enumerate_proofs(s: Sequent):
    """Yield every cut-free proof of ``s``.

    Search treats the sequent as a multiset of positions; each proof is
    emitted once per choice of rules, with permutations inserted so that
    ``check_proof`` returns exactly ``s``.
    """
    yield from _search(tuple(s.formulas))


@lru_cache(maxsize=4096)
def _search(gamma):
    return tuple(_search_gen(gamma))


def _search_gen(gamma):
    n = len(gamma)
    if n == 2 and all(isinstance(f, Literal) for f in gamma) and gamma[0].dual() == gamma[1]:
        yield Ax(gamma[0])
        return
    if all(isinstance(f, Literal) for f in gamma):
        return
    for i, f in enumerate(gamma):
        if isinstance(f, Literal):
            continue
        rest = gamma[:i] + gamma[i + 1:]
        back = _from_end(n, i)
        if f.op is Op.PAR:
            for sub in _search(rest + (f.left, f.right)):
                yield reorder(Par(sub), back)
        elif f.op is Op.PLUS:
            for sub in _search(rest + (f.left,)):
                yield reorder(Plus(1, f.right, sub), back)
            for sub in _search(rest + (f.right,)):
                yield reorder(Plus(2, f.left, sub), back)
        elif f.op is Op.WITH:
            lefts = _search(rest + (f.left,))
            if not lefts:
                continue
            rights = _search(rest + (f.right,))
            for a, b in itertools.product(lefts, rights):
                yield reorder(With(a, b), back)
        else:
            m = len(rest)
            for mask in range(1 << m):
                s0 = [k for k in range(m) if mask >> k & 1]
                s1 = [k for k in range(m) if not mask >> k & 1]
                lefts = _search(tuple(rest[k] for k in s0) + (f.left,))
                if not lefts:
                    continue
                rights = _search((f.right,) + tuple(rest[k] for k in s1))
                if not rights:
                    continue
                # core conclusion: rest[s0], f, rest[s1]; map back onto gamma
                core_pos = {}
                for pos, k in enumerate(s0):
                    core_pos[k] = pos
                for pos, k in enumerate(s1):
                    core_pos[k] = len(s0) + 1 + pos
                order = []
                for g in range(n):
                    if g == i:
                        order.append(len(s0))
                    else:
                        order.append(core_pos[g if g < i else g - 1])
                for a, b in itertools.product(lefts, rights):
                    yield reorder(Tensor(a, b), order)


# -- random proofs -------------------------------------------------------------

NAMES = ("a", "b", "c", "d")
MAX_DEPTH = 10


def random_proof(seed: int, max_rules: int) -> Proof:
    """A valid proof with at most ``max_rules`` non-permutation rules."""
    if max_rules < 1:
        raise ValueError("max_rules must be at least 1")
    rng = random.Random(seed)
    return normalize_perms(_gen(rng, max_rules, 0))


def _literal(rng):
    return Literal(rng.choice(NAMES), rng.random() < 0.5)


def _small_formula(rng):
    if rng.random() < 0.6:
        return _literal(rng)
    op = rng.choice(list(Op))
    return Compound(op, _literal(rng), _literal(rng))


def _shuffle(rng, p):
    if rng.random() < 0.3:
        order = list(range(len(p.conclusion)))
        rng.shuffle(order)
        return reorder(p, order)
    return p


def _gen(rng, budget, depth):
    if budget <= 1 or depth >= MAX_DEPTH or rng.random() < 0.4:
        return _shuffle(rng, Ax(_literal(rng)))
    r = rng.random()
    if r < 1 / 3:
        kind = "par"
    elif r < 2 / 3:
        kind = "tensor"
    else:
        kind = "with" if rng.random() < 0.5 else "plus"
    if kind in ("tensor", "with") and budget < 3:
        kind = "par"
    if kind == "tensor":
        b0 = rng.randint(1, budget - 2)
        p0 = _gen(rng, b0, depth + 1)
        p1 = _gen(rng, budget - 1 - b0, depth + 1)
        n0, n1 = len(p0.conclusion), len(p1.conclusion)
        i, j = rng.randrange(n0), rng.randrange(n1)
        layout = [("l", k) for k in range(n0) if k != i] + ["t"] + [("r", k) for k in range(n1) if k != j]
        return _shuffle(rng, tensor_join(p0, i, p1, j, layout))
    if kind == "with":
        return _shuffle(rng, _gen_with(rng, budget, depth))
    sub = _gen(rng, budget - 1, depth + 1)
    n = len(sub.conclusion)
    if kind == "par" and n >= 2:
        i, j = rng.sample(range(n), 2)
        return _shuffle(rng, Par(reorder(sub, _to_end(n, i, j))))
    i = rng.randrange(n)
    return _shuffle(rng, plus_at(sub, i, rng.choice((1, 2)), _small_formula(rng)))


def _gen_with(rng, budget, depth):
    # Both premises need the same context, so derive the second premise from
    # the first: a copy, or the copy under an extra ⊕ on the active formula.
    variants = ["copy"]
    if budget >= 4:
        variants.append("one-plus")
    if budget >= 5:
        variants.append("two-plus")
    v = rng.choice(variants)
    cost = {"copy": 1, "one-plus": 2, "two-plus": 3}[v]
    sub = _gen(rng, max(1, (budget - cost) // 2), depth + 1)
    n = len(sub.conclusion)
    i = rng.randrange(n)
    base = reorder(sub, _to_end(n, i))
    if v == "copy":
        a, b = base, base
    elif v == "one-plus":
        a, b = base, Plus(rng.choice((1, 2)), _small_formula(rng), base)
        if rng.random() < 0.5:
            a, b = b, a
    else:
        a = Plus(rng.choice((1, 2)), _small_formula(rng), base)
        b = Plus(rng.choice((1, 2)), _small_formula(rng), base)
    return With(a, b)


# -- text format ---------------------------------------------------------------


def _sigma_text(sigma):
    return "(" + " ".join(str(i + 1) for i in sigma) + ")"


def render_proof(p: Proof, width: int = 72) -> str:
    flat = _flat(p)
    if len(flat) <= width:
        return flat
    return "\n".join(_lines(p, 0, width))


def _head(p):
    if isinstance(p, Perm):
        return "perm " + _sigma_text(p.sigma)
    if isinstance(p, Par):
        return "parr"
    if isinstance(p, Plus):
        return f"plus{p.side} {p.other}"
    if isinstance(p, Tensor):
        return "tensor"
    if isinstance(p, With):
        return "with"
    raise TypeError(p)


def _flat(p):
    if isinstance(p, Ax):
        return f"(ax {p.literal})"
    return "(" + _head(p) + "".join(" " + _flat(ch) for ch in p.children) + ")"


def _lines(p, indent, width):
    pad = "  " * indent
    flat = _flat(p)
    if isinstance(p, Ax) or len(pad) + len(flat) <= width:
        return [pad + flat]
    out = [pad + "(" + _head(p)]
    for ch in p.children:
        out.extend(_lines(ch, indent + 1, width))
    out[-1] += ")"
    return out


def parse_proof(text: str) -> Proof:
    sc = Scanner(text)
    if sc.at_end():
        raise sc.error("empty proof")
    p = _parse(sc)
    if not sc.at_end():
        raise sc.error("trailing input after proof", sc.token_start())
    return p


def _parse(sc):
    sc.expect("(")
    kind, word, start = sc.next()
    if kind != "ident":
        raise sc.error(f"expected a rule name, found {word!r}", start)
    if word == "ax":
        f = parse_formula_from(sc)
        if not isinstance(f, Literal):
            raise sc.error("axiom takes a literal", start)
        p = Ax(f)
    elif word == "perm":
        sc.expect("(")
        images = []
        while sc.peek() is not None and sc.peek()[0] == "int":
            _, v, at = sc.next()
            if int(v) < 1:
                raise sc.error("permutation images are 1-based", at)
            images.append(int(v) - 1)
        sc.expect(")")
        p = Perm(tuple(images), _parse(sc))
    elif word == "parr":
        p = Par(_parse(sc))
    elif word in ("plus1", "plus2"):
        other = parse_formula_from(sc)
        p = Plus(int(word[-1]), other, _parse(sc))
    elif word in ("tensor", "with"):
        left = _parse(sc)
        right = _parse(sc)
        p = Tensor(left, right) if word == "tensor" else With(left, right)
    else:
        raise sc.error(f"unknown rule {word!r}", start)
    sc.expect(")")
    return p


__all__ = [
    "Ax", "Par", "Perm", "Plus", "Proof", "Tensor", "With", "ParseError",
    "axiom_count", "check_proof", "enumerate_proofs", "normalize_perms",
    "par_at", "parse_proof", "plus_at", "random_proof", "render_proof",
    "reorder", "rule_count", "tensor_join", "transpose_adjacent_withs", "with_at",
]
