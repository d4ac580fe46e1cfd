"""Linkings on sequents and the slicing predicate.

A linking has a coherence space of links and an attachment relation from
links to leaves.  In a well-formed linking every link is attached to exactly
one dual pair of leaves and links that share a leaf are in conflict.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from .coherence import CoherenceSpace, is_contractible, maximal_cliques, token_key
from .errors import InvalidLinking, ParseError
from .syntax import Sequent, additive_join, dual_pair, parse_sequent, render


def sequent_space(s: Sequent) -> CoherenceSpace:
    """Leaves of ``s``; two leaves conflict iff their join is additive."""
    if len(s) == 0:
        raise ValueError("empty sequent")
    leaves = list(s.leaf_ids())
    adj = [frozenset(p) for p in itertools.combinations(leaves, 2) if not additive_join(s, *p)]
    return CoherenceSpace(frozenset(leaves), frozenset(adj))


@dataclass(frozen=True)
class Linking:
    sequent: Sequent
    space: CoherenceSpace
    attachment: frozenset  # of (link, leaf) pairs

    def __post_init__(self):
        object.__setattr__(self, "attachment", frozenset(map(tuple, self.attachment)))

    @classmethod
    def build(cls, sequent, links, conflicts=(), close_overlap=True):
        """``links`` maps link ids to leaf collections; ``conflicts`` lists
        pairs of link ids.  Overlap conflicts are added unless told not to."""
        links = {k: tuple(v) for k, v in dict(links).items()}
        conf = {frozenset(c) for c in conflicts}
        if close_overlap:
            for a, b in itertools.combinations(links, 2):
                if set(links[a]) & set(links[b]):
                    conf.add(frozenset((a, b)))
        space = CoherenceSpace.from_conflicts(links, conf)
        att = frozenset((k, x) for k, xs in links.items() for x in xs)
        return cls(sequent, space, att)

    @cached_property
    def images(self) -> dict:
        out = {k: set() for k in self.space.tokens}
        for k, x in self.attachment:
            out.setdefault(k, set()).add(x)
        return {k: frozenset(v) for k, v in out.items()}

    @cached_property
    def image(self) -> frozenset:
        return frozenset(x for _, x in self.attachment)

    @cached_property
    def leaf_space(self) -> CoherenceSpace:
        return sequent_space(self.sequent)

    @property
    def links(self):
        return self.space.sorted_tokens()

    def pair(self, link) -> tuple:
        return tuple(sorted(self.images[link]))

    def __len__(self):
        return len(self.space.tokens)

    def conflict_count(self) -> int:
        return len(self.space.conflicts())

    def restrict(self, links) -> "Linking":
        links = frozenset(links)
        return Linking(
            self.sequent,
            self.space.restrict(links),
            frozenset((k, x) for k, x in self.attachment if k in links),
        )

    def rename(self, f) -> "Linking":
        return Linking(self.sequent, self.space.rename(f), frozenset((f(k), x) for k, x in self.attachment))

    def __str__(self):
        return format_conflict_net(self)


# -- well-formedness -------------------------------------------------------------


def linking_problem(l: Linking):
    """First violated linking condition as a message, or None."""
    n = l.sequent.n_leaves
    for k, x in sorted(l.attachment, key=lambda a: (token_key(a[0]), a[1])):
        if k not in l.space.tokens:
            return f"attachment of unknown link {k}"
        if not (isinstance(x, int) and 1 <= x <= n):
            return f"link {k} attached to leaf {x}, outside 1..{n}"
    for k in l.links:
        img = sorted(l.images[k])
        if len(img) != 2:
            return f"dual pair: link {k} is attached to {len(img)} leaves {img}"
        if not dual_pair(l.sequent, *img):
            x, y = img
            return (
                f"dual pair: link {k} joins leaves {x} ({l.sequent.literal(x)}) and "
                f"{y} ({l.sequent.literal(y)}), which are not dual"
            )
    for a, b in itertools.combinations(l.links, 2):
        shared = l.images[a] & l.images[b]
        if shared and l.space.adjacent(a, b):
            return f"overlap: links {a} and {b} share leaf {min(shared)} but are not in conflict"
    return None


def validate_linking(l: Linking) -> bool:
    return linking_problem(l) is None


def check_linking(l: Linking) -> None:
    msg = linking_problem(l)
    if msg:
        raise InvalidLinking(msg)


# -- maps -------------------------------------------------------------------------


def _pair_ok(l, c, k, x, m, y):
    """Map conditions for two attachment pairs ⟨k,x⟩ and ⟨m,y⟩."""
    if k == m:
        # a link never reaches two conflicting leaves
        return not c.conflict(x, y)
    if l.space.adjacent(k, m):
        # adjacent links reach strictly coherent leaves
        return x != y and c.adjacent(x, y)
    return True


def map_problem(l: Linking):
    c = l.leaf_space
    pairs = sorted(l.attachment, key=lambda a: (token_key(a[0]), a[1]))
    for (k, x), (m, y) in itertools.combinations(pairs, 2):
        if not _pair_ok(l, c, k, x, m, y):
            if k == m:
                return f"link {k} reaches conflicting leaves {x} and {y}"
            return f"adjacent links {k} and {m} reach leaves {x} and {y}, which are not strictly coherent"
    return None


def is_map(l: Linking) -> bool:
    return map_problem(l) is None


def addable_pairs(l: Linking):
    """Pairs ⟨link, leaf⟩ outside the relation whose addition keeps a map."""
    c = l.leaf_space
    out = []
    for k in l.links:
        for x in l.sequent.leaf_ids():
            if (k, x) in l.attachment:
                continue
            if all(_pair_ok(l, c, k, x, m, y) for m, y in l.attachment):
                out.append((k, x))
    return out


def is_maximal_map(l: Linking) -> bool:
    return not addable_pairs(l)


def slicing_problem(l: Linking):
    msg = linking_problem(l)
    if msg:
        return msg
    if not is_contractible(l.space):
        return "link space contains an induced P4"
    msg = map_problem(l)
    if msg:
        return "not a map: " + msg
    extra = addable_pairs(l)
    if extra:
        k, x = extra[0]
        return f"not maximal: link {k} can also be attached to leaf {x}"
    return None


def is_slicing(l: Linking) -> bool:
    return slicing_problem(l) is None


def slices(l: Linking) -> frozenset:
    return frozenset(l.restrict(k) for k in maximal_cliques(l.space))


def is_additive_resolution(s: Sequent, leaves) -> bool:
    leaves = frozenset(leaves)
    c = sequent_space(s)
    if not leaves <= c.tokens or not c.is_clique(leaves):
        return False
    return all(not c.is_clique(leaves | {x}) for x in c.tokens - leaves)


# -- equality up to renaming of links ---------------------------------------------


def _shape(l):
    pairs = sorted(l.pair(k) for k in l.links)
    degrees = sorted((l.pair(k), len(l.space.conflict_neighbours[k])) for k in l.links)
    return (l.sequent, tuple(pairs), tuple(degrees))


def equivalent(a: Linking, b: Linking) -> bool:
    """Equal up to a bijection of link ids preserving attachments and conflicts."""
    if _shape(a) != _shape(b):
        return False
    ga, gb = _conflict_graph(a), _conflict_graph(b)
    return nx.is_isomorphic(ga, gb, node_match=lambda u, v: u["pair"] == v["pair"])


def _conflict_graph(l):
    g = nx.Graph()
    for k in l.links:
        g.add_node(k, pair=tuple(sorted(l.images[k])))
    g.add_edges_from(tuple(e) for e in l.space.conflicts())
    return g


def canonical_form(l: Linking) -> tuple:
    """A hashable key, equal for equivalent linkings.

    Links are renamed in order of their leaf pair; parallel links (same pair)
    are ordered by trying their permutations, which stays cheap while
    parallel groups are small.
    """
    groups = {}
    for k in l.links:
        groups.setdefault(tuple(sorted(l.images[k])), []).append(k)
    keys = sorted(groups)
    best = None
    for choice in itertools.product(*(itertools.permutations(groups[p]) for p in keys)):
        order = [k for grp in choice for k in grp]
        index = {k: i for i, k in enumerate(order)}
        conf = tuple(sorted(tuple(sorted(index[t] for t in e)) for e in l.space.conflicts()))
        if best is None or conf < best:
            best = conf
    pairs = tuple(p for p in keys for _ in groups[p])
    return (l.sequent, pairs, best or ())


# -- file format ----------------------------------------------------------------


def relabel(l: Linking, prefix="L") -> Linking:
    """Rename links to ``L1, L2, ...`` in order of their current ids."""
    names = {k: f"{prefix}{i}" for i, k in enumerate(l.links, 1)}
    return l.rename(names.__getitem__)


def format_conflict_net(l: Linking, implicit_overlaps=True) -> str:
    lines = ["net conflict", "sequent: " + render(l.sequent)]
    for k in l.links:
        xs = sorted(l.images[k])
        lines.append(f"link {k} " + " ".join(map(str, xs)))
    for e in sorted(l.space.conflicts(), key=lambda e: sorted(map(token_key, e))):
        a, b = sorted(e, key=token_key)
        if implicit_overlaps and l.images[a] & l.images[b]:
            continue
        lines.append(f"conflict {a} {b}")
    return "\n".join(lines) + "\n"


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def split_comment(line):
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_conflict_net(text: str) -> Linking:
    """Parse the line-based conflict-net format; overlap conflicts are implied."""
    lines = text.splitlines()
    body = _strip_header(lines, "conflict")
    sequent = None
    links = {}
    conflicts = []
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
        if words[0] == "link":
            if len(words) < 2 or not _IDENT.match(words[1]):
                raise ParseError("link needs an identifier", 0, no)
            if words[1] in links:
                raise ParseError(f"duplicate link {words[1]}", 0, no)
            try:
                links[words[1]] = tuple(int(w) for w in words[2:])
            except ValueError:
                raise ParseError("leaf references must be integers", 0, no) from None
        elif words[0] == "conflict":
            if len(words) != 3:
                raise ParseError("conflict takes two link ids", 0, no)
            conflicts.append((no, words[1], words[2]))
        else:
            raise ParseError(f"unknown directive {words[0]!r}", 0, no)
    if sequent is None:
        raise ParseError("missing sequent line", 0, len(lines))
    for no, a, b in conflicts:
        for k in (a, b):
            if k not in links:
                raise ParseError(f"conflict names unknown link {k}", 0, no)
        if a == b:
            raise ParseError("a link cannot conflict with itself", 0, no)
    return Linking.build(sequent, links, [(a, b) for _, a, b in conflicts])


def _strip_header(lines, kind):
    numbered = [(i + 1, l) for i, l in enumerate(lines)]
    for idx, (no, raw) in enumerate(numbered):
        line = split_comment(raw).strip()
        if not line:
            continue
        if line.split() != ["net", kind]:
            raise ParseError(f"expected header 'net {kind}'", 0, no)
        return numbered[idx + 1:]
    raise ParseError("empty input", 0, 1)


def detect_kind(text: str) -> str:
    for no, raw in enumerate(text.splitlines(), 1):
        line = split_comment(raw).strip()
        if not line:
            continue
        words = line.split()
        if len(words) == 2 and words[0] == "net" and words[1] in ("conflict", "circuit", "slices"):
            return words[1]
        raise ParseError("first line must be 'net conflict|circuit|slices'", 0, no)
    raise ParseError("empty input", 0, 1)
