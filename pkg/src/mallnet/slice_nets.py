"""Slice nets: sets of conflict-free linkings, checked by erasure.

Each member linking is a frozenset of leaf pairs ``(x, y)`` with ``x < y``.
Erasure works on clusters of linking-sets exactly as for slicings, except
that a ⊗ root is ready only when the linkings split as a full product.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import NotANet, NotReady, ParseError
from .graphs import components
from .linking import _strip_header, is_additive_resolution, split_comment
from .proofs import Ax, check_proof, par_at, plus_at, tensor_join, with_at
from .rewrite import ERROR, ErasureSystem, Root
from .syntax import Compound, Literal, Op, dual_pair, extract, formula_vertices, parse_sequent

_KIND = {Op.TENSOR: "tensor", Op.PAR: "par", Op.WITH: "with", Op.PLUS: "plus"}


def _pair(x, y):
    return (x, y) if x < y else (y, x)


@dataclass(frozen=True)
class LinkingSet:
    sequent: object
    linkings: frozenset

    def __post_init__(self):
        members = frozenset(frozenset(_pair(*p) for p in m) for m in self.linkings)
        object.__setattr__(self, "linkings", members)

    def __len__(self):
        return len(self.linkings)

    def sorted_linkings(self) -> list:
        return sorted((sorted(m) for m in self.linkings), key=lambda m: (len(m), m))

    @cached_property
    def links(self) -> frozenset:
        """Every leaf pair used by some member."""
        return frozenset(p for m in self.linkings for p in m)

    def link_count(self) -> int:
        return sum(len(m) for m in self.linkings)

    def __str__(self):
        return format_slice_net(self)


def linking_set_problem(ls: LinkingSet):
    s = ls.sequent
    for m in ls.sorted_linkings():
        if not m:
            return "a linking has no links"
        used = set()
        for x, y in m:
            for z in (x, y):
                if not (1 <= z <= s.n_leaves):
                    return f"leaf {z} out of range 1..{s.n_leaves}"
            if not dual_pair(s, x, y):
                return f"link {x} {y} does not join dual literals ({s.literal(x)}, {s.literal(y)})"
            if x in used or y in used:
                return f"two links of one linking share leaf {x if x in used else y}"
            used.update((x, y))
        if not is_additive_resolution(s, used):
            return f"linking {' '.join(f'{x}-{y}' for x, y in m)} does not cover an additive resolution"
    return None


def validate_linking_set(ls: LinkingSet) -> bool:
    return linking_set_problem(ls) is None


# -- the graph G(Λ, Γ) ------------------------------------------------------------


def ls_graph(ls: LinkingSet) -> dict:
    """Parse forest of the sequent plus one vertex per leaf pair in use."""
    adj = {}

    def edge(a, b):
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)

    s = ls.sequent
    for fi, f in enumerate(s.formulas):
        for path, _ in formula_vertices(f):
            v = ("v", fi, path)
            adj.setdefault(v, set())
            if path:
                edge(v, ("v", fi, path[:-1]))
    for p in ls.links:
        for x in p:
            fi, path = s.locate(x)
            edge(("l", p), ("v", fi, path))
    return adj


def is_connected(ls: LinkingSet) -> bool:
    if not ls.linkings:
        return False
    adj = ls_graph(ls)
    return len(components(adj, adj)) == 1


def _touches(ls, m, fi, side):
    under = ls.sequent.leaves_under(fi, (side,))
    return any(x in under or y in under for x, y in m)


def _sides(ls, m, fi):
    return tuple(_touches(ls, m, fi, side) for side in (0, 1))


def _tensor_split(ls, fi):
    """Components of G minus the root of formula ``fi`` (left first), or None."""
    adj = ls_graph(ls)
    r = ("v", fi, ())
    comps = components([v for v in adj if v != r], adj)
    if len(comps) != 2:
        return None
    comps = [set(c) for c in comps]
    if ("v", fi, (0,)) not in comps[0]:
        comps.reverse()
    return comps


def _restrict_to(ls, parts, members) -> LinkingSet:
    seq, leafmap = extract(ls.sequent, parts)
    out = set()
    for m in members:
        out.add(frozenset(_pair(leafmap[x], leafmap[y]) for x, y in m))
    return LinkingSet(seq, frozenset(out))


def _tensor_parts(ls, fi, comps):
    n = len(ls.sequent)
    result, split = [], []
    for side, comp in enumerate(comps):
        formulas = [i for i in range(n) if i != fi and ("v", i, ()) in comp]
        parts = [(i, ()) if i != fi else (fi, (side,)) for i in sorted(formulas + [fi])]
        members = {frozenset(p for p in m if ("l", p) in comp) for m in ls.linkings}
        result.append(_restrict_to(ls, parts, members))
        split.append(formulas)
    return result, tuple(split)


def ready_roots_ls(ls: LinkingSet) -> list:
    out = []
    for fi, f in enumerate(ls.sequent.formulas):
        if not isinstance(f, Compound):
            continue
        if f.op is Op.PAR:
            ok = True
        elif f.op is Op.PLUS:
            ok = sum(_touches(ls, ls.links, fi, side) for side in (0, 1)) == 1
        elif f.op is Op.WITH:
            # each linking must pick exactly one side for the split to be a partition
            ok = all(sum(_sides(ls, m, fi)) == 1 for m in ls.linkings)
        else:
            comps = _tensor_split(ls, fi)
            ok = False
            if comps is not None:
                (l0, l1), _ = _tensor_parts(ls, fi, comps)
                ok = len(ls.linkings) == len(l0.linkings) * len(l1.linkings)
        if ok:
            out.append(Root(fi, _KIND[f.op]))
    return out


def erase_root_ls(ls: LinkingSet, root) -> list:
    return _erase(ls, root)[0]


def _erase(ls, root):
    if root not in ready_roots_ls(ls):
        raise NotReady(f"{root.kind} root at formula {root.formula + 1} is not ready")
    fi = root.formula
    n = len(ls.sequent)
    before = [(i, ()) for i in range(fi)]
    after = [(i, ()) for i in range(fi + 1, n)]
    if root.kind == "par":
        return [_restrict_to(ls, before + [(fi, (0,)), (fi, (1,))] + after, ls.linkings)], None
    if root.kind == "plus":
        side = 0 if _touches(ls, ls.links, fi, 0) else 1
        return [_restrict_to(ls, before + [(fi, (side,))] + after, ls.linkings)], side
    if root.kind == "with":
        out = []
        for side in (0, 1):
            members = [m for m in ls.linkings if _touches(ls, m, fi, side)]
            out.append(_restrict_to(ls, before + [(fi, (side,))] + after, members))
        return out, None
    return _tensor_parts(ls, fi, _tensor_split(ls, fi))


def is_axiom_shape(ls: LinkingSet) -> bool:
    s = ls.sequent
    return (
        len(s) == 2
        and all(isinstance(f, Literal) for f in s.formulas)
        and s.formulas[0].dual() == s.formulas[1]
        and ls.linkings == frozenset({frozenset({(1, 2)})})
    )


class SliceErasure(ErasureSystem):
    def connected(self, item):
        return is_connected(item)

    def is_axiom(self, item):
        return is_axiom_shape(item)

    def ready_roots(self, item):
        return ready_roots_ls(item)

    def erase(self, item, root):
        return erase_root_ls(item, root)

    def sort_key(self, item):
        return str(item.sequent), item.sorted_linkings()

    def budget(self, items):
        return sum(step_bound(x) for x in items) + 1


SYSTEM = SliceErasure()


def step_bound(ls: LinkingSet) -> int:
    """(l + l²)·g with ``l`` the total number of links over all members."""
    k = ls.link_count()
    return (k + k * k) * ls.sequent.vertex_count


def normalize_ls(cluster, limit=None):
    return SYSTEM.normalize(cluster, limit)


def normal_forms_ls(cluster, max_states=None) -> set:
    return SYSTEM.normal_forms(cluster, max_states)


def is_slice_net(ls: LinkingSet) -> bool:
    if not validate_linking_set(ls):
        return False
    form, _ = normalize_ls(frozenset({ls}))
    return form == frozenset()


def net_verdict(ls: LinkingSet):
    msg = linking_set_problem(ls)
    if msg:
        return False, "not a linking-set: " + msg
    form, _ = normalize_ls(frozenset({ls}))
    if form == frozenset():
        return True, f"slice net: OK ({len(ls)} linking{'s' if len(ls) != 1 else ''})"
    if form is ERROR:
        return False, "error: a linking-set became disconnected"
    return False, "stuck: no ready root"


def sequentialize_slice_net(ls: LinkingSet):
    msg = linking_set_problem(ls)
    if msg:
        raise NotANet("not a linking-set: " + msg)
    p = _sequentialize(ls)
    assert check_proof(p) == ls.sequent
    return p


def _sequentialize(ls):
    if not is_connected(ls):
        raise NotANet("a linking-set became disconnected")
    if is_axiom_shape(ls):
        return Ax(ls.sequent.formulas[0])
    root = SYSTEM.best_root(ls)
    if root is None:
        raise NotANet("stuck: no ready root")
    parts, info = _erase(ls, root)
    k = root.formula
    f = ls.sequent.formulas[k]
    if root.kind == "par":
        return par_at(_sequentialize(parts[0]), k)
    if root.kind == "plus":
        other = f.right if info == 0 else f.left
        return plus_at(_sequentialize(parts[0]), k, info + 1, other)
    if root.kind == "with":
        return with_at(_sequentialize(parts[0]), _sequentialize(parts[1]), k)
    left_idx, right_idx = info
    p0, p1 = _sequentialize(parts[0]), _sequentialize(parts[1])
    order0 = sorted(left_idx + [k])
    order1 = sorted(right_idx + [k])
    layout = []
    for g in range(len(ls.sequent)):
        if g == k:
            layout.append("t")
        elif g in left_idx:
            layout.append(("l", order0.index(g)))
        else:
            layout.append(("r", order1.index(g)))
    return tensor_join(p0, order0.index(k), p1, order1.index(k), layout)


# -- file format --------------------------------------------------------------------


def format_slice_net(ls: LinkingSet) -> str:
    lines = ["net slices", f"sequent: {ls.sequent}"]
    for m in ls.sorted_linkings():
        lines.append("linking")
        lines.extend(f"  link {x} {y}" for x, y in m)
    return "\n".join(lines) + "\n"


def parse_slice_net(text: str) -> LinkingSet:
    lines = text.splitlines()
    body = _strip_header(lines, "slices")
    sequent = None
    members = []
    for no, raw in body:
        line = split_comment(raw).strip()
        if not line:
            continue
        if line.startswith("sequent:"):
            if sequent is not None:
                raise ParseError("duplicate sequent line", 0, no)
            sequent = parse_sequent(line[len("sequent:"):], no)
            continue
        words = line.split()
        if words == ["linking"]:
            members.append([])
        elif words[0] == "link":
            if not members:
                raise ParseError("link outside a linking block", 0, no)
            if len(words) != 3:
                raise ParseError("link takes two leaf numbers", 0, no)
            try:
                x, y = int(words[1]), int(words[2])
            except ValueError:
                raise ParseError("leaf references must be integers", 0, no) from None
            members[-1].append((x, y))
        else:
            raise ParseError(f"unknown directive {words[0]!r}", 0, no)
    if sequent is None:
        raise ParseError("missing sequent line", 0, len(lines))
    for m in members:
        for x, y in m:
            for z in (x, y):
                if not (1 <= z <= sequent.n_leaves):
                    raise ParseError(f"leaf {z} out of range 1..{sequent.n_leaves}", 0, 0)
    return LinkingSet(sequent, frozenset(frozenset(m) for m in members))
