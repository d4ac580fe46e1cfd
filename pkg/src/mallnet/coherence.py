"""Finite coherence spaces, viewed as graphs.

A space is a set of tokens with a symmetric irreflexive relation of strict
coherence (adjacency, written ⌢).  Distinct tokens that are not adjacent are
in conflict (#).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from .errors import NotContractible
from .graphs import components

ADJ = "⌢"
CONF = "#"


def token_key(t):
    """Sort key that orders ints numerically and everything else by text."""
    if isinstance(t, bool):
        return (1, str(t))
    if isinstance(t, int):
        return (0, t, "")
    if isinstance(t, str):
        # L2 before L10
        head = t.rstrip("0123456789")
        tail = t[len(head):]
        if head and tail:
            return (1, head, int(tail), t)
        return (1, t, -1, t)
    if isinstance(t, tuple):
        return (2, tuple(token_key(x) for x in t))
    return (3, repr(t))


@dataclass(frozen=True)
class CoherenceSpace:
    tokens: frozenset
    adjacency: frozenset = frozenset()

    def __post_init__(self):
        tokens = frozenset(self.tokens)
        adjacency = frozenset(frozenset(e) for e in self.adjacency)
        for e in adjacency:
            if len(e) != 2:
                raise ValueError(f"adjacency must be irreflexive: {set(e)}")
            if not e <= tokens:
                raise ValueError(f"adjacency mentions unknown tokens: {set(e)}")
        object.__setattr__(self, "tokens", tokens)
        object.__setattr__(self, "adjacency", adjacency)

    @classmethod
    def from_conflicts(cls, tokens, conflicts):
        """Build a space by listing conflicts instead of adjacencies."""
        tokens = frozenset(tokens)
        conf = {frozenset(e) for e in conflicts}
        adj = [frozenset(p) for p in itertools.combinations(tokens, 2) if frozenset(p) not in conf]
        return cls(tokens, frozenset(adj))

    @classmethod
    def clique(cls, tokens):
        tokens = frozenset(tokens)
        return cls(tokens, frozenset(frozenset(p) for p in itertools.combinations(tokens, 2)))

    @cached_property
    def neighbours(self):
        nb = {t: set() for t in self.tokens}
        for e in self.adjacency:
            a, b = tuple(e)
            nb[a].add(b)
            nb[b].add(a)
        return nb

    @cached_property
    def conflict_neighbours(self):
        return {t: self.tokens - self.neighbours[t] - {t} for t in self.tokens}

    def __len__(self):
        return len(self.tokens)

    def sorted_tokens(self):
        return sorted(self.tokens, key=token_key)

    def adjacent(self, x, y) -> bool:
        return y in self.neighbours[x]

    def conflict(self, x, y) -> bool:
        return x != y and y not in self.neighbours[x]

    def conflicts(self) -> frozenset:
        return frozenset(
            frozenset(p) for p in itertools.combinations(self.tokens, 2) if self.conflict(*p)
        )

    def restrict(self, subset) -> "CoherenceSpace":
        subset = frozenset(subset) & self.tokens
        return CoherenceSpace(subset, frozenset(e for e in self.adjacency if e <= subset))

    def rename(self, f) -> "CoherenceSpace":
        return CoherenceSpace(
            frozenset(f(t) for t in self.tokens),
            frozenset(frozenset(f(t) for t in e) for e in self.adjacency),
        )

    def is_clique(self, subset) -> bool:
        return all(self.adjacent(a, b) for a, b in itertools.combinations(subset, 2))


def _disjoint(l, m):
    if l.tokens.isdisjoint(m.tokens):
        return l, m
    return l.rename(lambda t: ("l", t)), m.rename(lambda t: ("r", t))


def sum(l: CoherenceSpace, m: CoherenceSpace) -> CoherenceSpace:
    """Disjoint union; every pair across the two sides is in conflict."""
    l, m = _disjoint(l, m)
    return CoherenceSpace(l.tokens | m.tokens, l.adjacency | m.adjacency)


def product(l: CoherenceSpace, m: CoherenceSpace) -> CoherenceSpace:
    """Disjoint union with every pair across the two sides adjacent."""
    l, m = _disjoint(l, m)
    cross = frozenset(frozenset((a, b)) for a in l.tokens for b in m.tokens)
    return CoherenceSpace(l.tokens | m.tokens, l.adjacency | m.adjacency | cross)


def adjacency_components(c: CoherenceSpace) -> frozenset:
    return frozenset(frozenset(comp) for comp in components(c.sorted_tokens(), c.neighbours))


def maximal_cliques(c: CoherenceSpace) -> frozenset:
    """All inclusion-maximal cliques of the ⌢-graph.

    The empty space has exactly one maximal clique, the empty one.
    """
    if not c.tokens:
        return frozenset({frozenset()})
    g = nx.Graph()
    g.add_nodes_from(c.tokens)
    g.add_edges_from(tuple(e) for e in c.adjacency)
    return frozenset(frozenset(k) for k in nx.find_cliques(g))


# -- cotrees -------------------------------------------------------------------


@dataclass(frozen=True)
class Cotree:
    """A leaf carries ``token``; an internal vertex carries ``label`` ⌢ or #."""

    label: str = None
    token: object = None
    children: tuple = ()

    @property
    def is_leaf(self) -> bool:
        return self.label is None

    def leaves(self):
        if self.is_leaf:
            yield self.token
        else:
            for ch in self.children:
                yield from ch.leaves()

    def __str__(self):
        if self.is_leaf:
            return str(self.token)
        return f"{self.label}(" + ", ".join(map(str, self.children)) + ")"


def _tree_key(t: Cotree):
    return min(token_key(x) for x in t.leaves())


def cotree(c: CoherenceSpace) -> Cotree:
    """Cotree of a contractible space; raises NotContractible with a P4."""
    if not c.tokens:
        raise ValueError("the empty space has no cotree")
    return _decompose(c, c.sorted_tokens())


def _decompose(c, toks):
    if len(toks) == 1:
        return Cotree(token=toks[0])
    parts = components(toks, c.neighbours)
    label = CONF
    if len(parts) == 1:
        parts = components(toks, c.conflict_neighbours)
        label = ADJ
        if len(parts) == 1:
            raise NotContractible(_p4_in(c, toks))
    children = sorted((_decompose(c, p) for p in parts), key=_tree_key)
    return Cotree(label=label, children=tuple(children))


def _p4_in(c, toks):
    # A subset whose graph and complement are both connected contains an
    # induced path a-b-c-d; look for it around each edge b-c.
    ts = set(toks)
    for b in toks:
        for x in c.neighbours[b] & ts:
            only_b = (c.neighbours[b] & ts) - c.neighbours[x] - {x}
            only_x = (c.neighbours[x] & ts) - c.neighbours[b] - {b}
            for a in only_b:
                for d in only_x:
                    if not c.adjacent(a, d):
                        return (a, b, x, d)
    raise AssertionError("no P4 found in a prime subset")


def is_contractible(c: CoherenceSpace) -> bool:
    if len(c.tokens) < 4:
        return True
    try:
        cotree(c)
    except NotContractible:
        return False
    return True


def induced_adjacency(t: Cotree) -> frozenset:
    """The adjacency relation a cotree denotes."""
    out = set()
    if t.is_leaf:
        return frozenset()
    groups = [list(ch.leaves()) for ch in t.children]
    for ch in t.children:
        out |= induced_adjacency(ch)
    if t.label == ADJ:
        for g, h in itertools.combinations(groups, 2):
            out.update(frozenset((a, b)) for a in g for b in h)
    return frozenset(out)
