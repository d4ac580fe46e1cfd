"""Erasure of slicings, the correctness criterion for conflict nets.

A root of the sequent is erased when ready; erasure splits or shrinks the
slicing until only axiom-shaped slicings remain, which are then removed.
A slicing is a conflict net iff this reaches the empty cluster.
"""
from __future__ import annotations

from .coherence import adjacency_components, token_key
from .errors import NotANet, NotReady
from .graphs import components
from .linking import Linking, is_slicing, slicing_problem
from .proofs import Ax, check_proof, par_at, plus_at, tensor_join, with_at
from .rewrite import ERROR, ErasureSystem, Root
from .syntax import Compound, Literal, Op, extract, formula_vertices

_KIND = {Op.TENSOR: "tensor", Op.PAR: "par", Op.WITH: "with", Op.PLUS: "plus"}


def conflict_graph(l: Linking) -> dict:
    """Adjacency of λ^#: parse forest, conflicts between links, attachments.

    Vertices are ``("v", formula_index, path)`` and ``("l", link)``.
    """
    adj = {}

    def edge(a, b):
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)

    for fi, f in enumerate(l.sequent.formulas):
        for path, _ in formula_vertices(f):
            v = ("v", fi, path)
            adj.setdefault(v, set())
            if path:
                edge(v, ("v", fi, path[:-1]))
    for k in l.space.tokens:
        adj.setdefault(("l", k), set())
        for m in l.space.conflict_neighbours[k]:
            edge(("l", k), ("l", m))
    for k, x in l.attachment:
        fi, path = l.sequent.locate(x)
        edge(("l", k), ("v", fi, path))
    return adj


def is_connected(l: Linking) -> bool:
    if not l.space.tokens:
        return False
    adj = conflict_graph(l)
    return len(components(adj, adj)) == 1


def pieces(l: Linking) -> frozenset:
    return frozenset(l.restrict(c) for c in adjacency_components(l.space))


def touches_chooses(l: Linking, fi: int) -> tuple:
    """Which sides of the additive root of formula ``fi`` the image meets."""
    f = l.sequent.formulas[fi]
    if not (isinstance(f, Compound) and f.op.additive):
        raise ValueError(f"formula {fi + 1} does not have an additive root")
    img = l.image
    return tuple(any(x in img for x in l.sequent.leaves_under(fi, (side,))) for side in (0, 1))


def is_unary(l: Linking, fi: int) -> bool:
    left, right = touches_chooses(l, fi)
    return left != right


def ready_roots(l: Linking) -> list:
    adj = None
    out = []
    for fi, f in enumerate(l.sequent.formulas):
        if not isinstance(f, Compound):
            continue
        if f.op is Op.PAR:
            ok = True
        elif f.op is Op.PLUS:
            ok = is_unary(l, fi)
        elif f.op is Op.WITH:
            ok = all(is_unary(p, fi) for p in pieces(l))
        else:
            if adj is None:
                adj = conflict_graph(l)
            ok = len(_without_root(adj, fi)) == 2
        if ok:
            out.append(Root(fi, _KIND[f.op]))
    return out


def _without_root(adj, fi):
    r = ("v", fi, ())
    rest = [v for v in adj if v != r]
    return components(rest, adj)


def erase_root(l: Linking, root) -> list:
    return _erase(l, root)[0]


def _restrict_to(l: Linking, parts, links) -> Linking:
    seq, leafmap = extract(l.sequent, parts)
    links = frozenset(links)
    att = frozenset((k, leafmap[x]) for k, x in l.attachment if k in links)
    return Linking(seq, l.space.restrict(links), att)


def _erase(l, root):
    """Erase ``root`` and also say how the result lines up with ``l``.

    The second value is the chosen side for ⊕, and for ⊗ the formula
    indices that went to the left and to the right component.
    """
    if root not in ready_roots(l):
        raise NotReady(f"{root.kind} root at formula {root.formula + 1} is not ready")
    fi = root.formula
    n = len(l.sequent)
    before = [(i, ()) for i in range(fi)]
    after = [(i, ()) for i in range(fi + 1, n)]
    if root.kind == "par":
        return [_restrict_to(l, before + [(fi, (0,)), (fi, (1,))] + after, l.space.tokens)], None
    if root.kind == "plus":
        side = 0 if touches_chooses(l, fi)[0] else 1
        return [_restrict_to(l, before + [(fi, (side,))] + after, l.space.tokens)], side
    if root.kind == "with":
        sides = ([], [])
        for p in pieces(l):
            sides[0 if touches_chooses(p, fi)[0] else 1].extend(p.space.tokens)
        out = [_restrict_to(l, before + [(fi, (s,))] + after, sides[s]) for s in (0, 1)]
        return out, None
    adj = conflict_graph(l)
    comps = _without_root(adj, fi)
    result, split = [], []
    for side in (0, 1):
        comp = next(c for c in comps if ("v", fi, (side,)) in c)
        comp = set(comp)
        formulas = [i for i in range(n) if i != fi and ("v", i, ()) in comp]
        parts = [(i, ()) if i != fi else (fi, (side,)) for i in sorted(formulas + [fi])]
        links = [v[1] for v in comp if v[0] == "l"]
        result.append(_restrict_to(l, parts, links))
        split.append(formulas)
    return result, tuple(split)


def is_axiom_shape(l: Linking) -> bool:
    s = l.sequent
    return (
        len(l.space.tokens) == 1
        and len(s) == 2
        and all(isinstance(f, Literal) for f in s.formulas)
        and s.formulas[0].dual() == s.formulas[1]
        and l.image == frozenset({1, 2})
    )


class SlicingErasure(ErasureSystem):
    def connected(self, item):
        return is_connected(item)

    def is_axiom(self, item):
        return is_axiom_shape(item)

    def ready_roots(self, item):
        return ready_roots(item)

    def erase(self, item, root):
        return erase_root(item, root)

    def sort_key(self, item):
        return sorted(token_key(k) for k in item.space.tokens), str(item.sequent)

    def axiom_label(self, item):
        return str(next(iter(item.space.tokens)))

    def budget(self, items):
        return sum(step_bound(x) for x in items) + 1

    def profile(self, cluster):
        return profile(cluster)


SYSTEM = SlicingErasure()


def step_bound(l: Linking) -> int:
    """(l + l²)·g for ``l`` links and ``g`` sequent vertices."""
    k = len(l.space.tokens)
    return (k + k * k) * l.sequent.vertex_count


def profile(cluster) -> tuple:
    if cluster is ERROR:
        return (0, 0)
    p = sum(len(x.space.tokens) + len(x.space.conflicts()) for x in cluster)
    q = sum(x.sequent.connective_count for x in cluster)
    return p, q


def step(cluster) -> set:
    return SYSTEM.successors(cluster)


def normalize(cluster, limit=None, check_profile=False):
    return SYSTEM.normalize(cluster, limit, check_profile)


def normal_forms(cluster, max_states=None) -> set:
    return SYSTEM.normal_forms(cluster, max_states)


def is_conflict_net(l: Linking) -> bool:
    if not is_slicing(l):
        return False
    form, _ = normalize(frozenset({l}))
    return form == frozenset()


def net_verdict(l: Linking):
    """``(ok, message)`` explaining the outcome of the conflict-net check."""
    msg = slicing_problem(l)
    if msg:
        return False, "not a slicing: " + msg
    form, trace = normalize(frozenset({l}))
    if form == frozenset():
        return True, f"conflict net: OK ({len(l.space.tokens)} links, {l.conflict_count()} conflict{'s' if l.conflict_count() != 1 else ''})"
    if form is ERROR:
        return False, "error: a slicing became disconnected"
    return False, "stuck: no ready root"


# -- sequentialization ---------------------------------------------------------------


def sequentialize(l: Linking):
    """A proof whose conflict net is ``l``; raises NotANet otherwise."""
    msg = slicing_problem(l)
    if msg:
        raise NotANet("not a slicing: " + msg)
    p = _sequentialize(l)
    assert check_proof(p) == l.sequent
    return p


def _sequentialize(l):
    if not is_connected(l):
        raise NotANet("a slicing became disconnected")
    if is_axiom_shape(l):
        return Ax(l.sequent.formulas[0])
    root = SYSTEM.best_root(l)
    if root is None:
        raise NotANet("stuck: no ready root")
    parts, info = _erase(l, root)
    k = root.formula
    f = l.sequent.formulas[k]
    if root.kind == "par":
        return par_at(_sequentialize(parts[0]), k)
    if root.kind == "plus":
        side = info
        other = f.right if side == 0 else f.left
        return plus_at(_sequentialize(parts[0]), k, side + 1, other)
    if root.kind == "with":
        return with_at(_sequentialize(parts[0]), _sequentialize(parts[1]), k)
    left_idx, right_idx = info
    p0, p1 = _sequentialize(parts[0]), _sequentialize(parts[1])
    order0 = sorted(left_idx + [k])
    order1 = sorted(right_idx + [k])
    layout = []
    for g in range(len(l.sequent)):
        if g == k:
            layout.append("t")
        elif g in left_idx:
            layout.append(("l", order0.index(g)))
        else:
            layout.append(("r", order1.index(g)))
    return tensor_join(p0, order0.index(k), p1, order1.index(k), layout)
