"""Translations from proofs to the three kinds of net."""
from __future__ import annotations

import itertools

from . import coherence
from .circuits import CircuitBuilder
from .coherence import CoherenceSpace
from .linking import Linking, slices
from .proofs import Ax, Par, Perm, Plus, Tensor, With, check_proof
from .slice_nets import LinkingSet
from .syntax import count_leaves


def to_conflict_net(p) -> Linking:
    """Axioms become links; ⊗ takes the product of link spaces and & their sum.

    Links are named ``L1, L2, ...`` after their axioms, left to right.
    """
    conclusion = check_proof(p)
    counter = itertools.count(1)
    space, att = _conflict(p, counter)
    return Linking(conclusion, space, frozenset(att))


def _shift(att, f):
    return {(k, f(x)) for k, x in att}


def _conflict(p, counter):
    if isinstance(p, Ax):
        k = f"L{next(counter)}"
        return CoherenceSpace(frozenset({k})), {(k, 1), (k, 2)}
    if isinstance(p, Perm):
        space, att = _conflict(p.premise, counter)
        prem = p.premise.conclusion
        # new position of every premise leaf
        where = {}
        nxt = 1
        for j in p.sigma:
            for x in prem.block(j):
                where[x] = nxt
                nxt += 1
        return space, _shift(att, where.__getitem__)
    if isinstance(p, Par):
        return _conflict(p.premise, counter)
    if isinstance(p, Plus):
        space, att = _conflict(p.premise, counter)
        if p.side == 1:
            return space, att
        prem = p.premise.conclusion
        moved = prem.block(len(prem) - 1).start
        gap = count_leaves(p.other)
        return space, _shift(att, lambda x: x + gap if x >= moved else x)
    if isinstance(p, Tensor):
        ls, la = _conflict(p.left, counter)
        rs, ra = _conflict(p.right, counter)
        gap = p.left.conclusion.n_leaves
        return coherence.product(ls, rs), la | _shift(ra, lambda x: x + gap)
    if isinstance(p, With):
        ls, la = _conflict(p.left, counter)
        rs, ra = _conflict(p.right, counter)
        left = p.left.conclusion
        moved = left.block(len(left) - 1).start
        gap = count_leaves(left.formulas[-1])
        return coherence.sum(ls, rs), la | _shift(ra, lambda x: x + gap if x >= moved else x)
    raise TypeError(f"not a proof node: {p!r}")


def to_slice_net(p) -> LinkingSet:
    return slice_net_of(to_conflict_net(p))


def slice_net_of(l: Linking) -> LinkingSet:
    """The linking-set of slices of a slicing."""
    members = frozenset(frozenset(s.pair(k) for k in s.space.tokens) for s in slices(l))
    return LinkingSet(l.sequent, members)


def to_circuit(p):
    """Nodes for rules, wires for formula occurrences; & adds one contraction
    per context formula."""
    check_proof(p)
    b = CircuitBuilder()
    exits = _circuit(p, b)
    return b.finish(exits)


def _circuit(p, b):
    if isinstance(p, Ax):
        n = b.node("axiom")
        return [b.wire(p.literal, n), b.wire(p.literal.dual(), n)]
    if isinstance(p, Perm):
        ws = _circuit(p.premise, b)
        return [ws[j] for j in p.sigma]
    concl = p.conclusion
    if isinstance(p, Par):
        ws = _circuit(p.premise, b)
        n = b.node("par")
        b.attach(ws[-2], n, "left")
        b.attach(ws[-1], n, "right")
        return ws[:-2] + [b.wire(concl.formulas[-1], n)]
    if isinstance(p, Plus):
        ws = _circuit(p.premise, b)
        n = b.node("plus")
        b.attach(ws[-1], n, "left" if p.side == 1 else "right")
        return ws[:-1] + [b.wire(concl.formulas[-1], n)]
    if isinstance(p, Tensor):
        left = _circuit(p.left, b)
        right = _circuit(p.right, b)
        n = b.node("tensor")
        b.attach(left[-1], n, "left")
        b.attach(right[0], n, "right")
        k = len(left) - 1
        return left[:-1] + [b.wire(concl.formulas[k], n)] + right[1:]
    if isinstance(p, With):
        left = _circuit(p.left, b)
        right = _circuit(p.right, b)
        ctx = []
        for j, (u, v) in enumerate(zip(left[:-1], right[:-1])):
            c = b.node("contraction")
            b.attach(u, c, None)
            b.attach(v, c, None)
            ctx.append(b.wire(concl.formulas[j], c))
        n = b.node("with")
        b.attach(left[-1], n, "left")
        b.attach(right[-1], n, "right")
        return ctx + [b.wire(concl.formulas[-1], n)]
    raise TypeError(f"not a proof node: {p!r}")
