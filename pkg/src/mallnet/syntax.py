"""MALL formulas and sequents as parse forests.

Formulas are immutable trees.  A vertex of a formula is addressed by a path,
a tuple of 0/1 child indices from the root.  Leaves of a sequent are numbered
1..n from left to right across all its formulas.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Union

from .errors import ParseError


class Op(enum.Enum):
    TENSOR = "*"
    PAR = "|"
    WITH = "&"
    PLUS = "+"

    @property
    def dual(self) -> "Op":
        return _DUAL_OP[self]

    @property
    def additive(self) -> bool:
        return self in (Op.WITH, Op.PLUS)

    @property
    def word(self) -> str:
        return self.name.lower()


_DUAL_OP = {Op.TENSOR: Op.PAR, Op.PAR: Op.TENSOR, Op.WITH: Op.PLUS, Op.PLUS: Op.WITH}


@dataclass(frozen=True)
class Literal:
    name: str
    positive: bool = True

    def dual(self) -> "Literal":
        return Literal(self.name, not self.positive)

    def __str__(self):
        return self.name if self.positive else "~" + self.name


@dataclass(frozen=True)
class Compound:
    op: Op
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} {self.op.value} {self.right})"


Formula = Union[Literal, Compound]
Path = tuple


def negate(f: Formula) -> Formula:
    if isinstance(f, Literal):
        return f.dual()
    return Compound(f.op.dual, negate(f.left), negate(f.right))


def subformula(f: Formula, path: Path) -> Formula:
    for step in path:
        if not isinstance(f, Compound):
            raise ValueError(f"path {path} leaves the formula")
        f = f.right if step else f.left
    return f


def formula_leaves(f: Formula, prefix: Path = ()) -> Iterator[tuple]:
    """Yield ``(path, literal)`` for the leaves of ``f`` in order."""
    if isinstance(f, Literal):
        yield prefix, f
    else:
        yield from formula_leaves(f.left, prefix + (0,))
        yield from formula_leaves(f.right, prefix + (1,))


def formula_vertices(f: Formula, prefix: Path = ()) -> Iterator[tuple]:
    """Yield ``(path, subformula)`` for every vertex of ``f``, preorder."""
    yield prefix, f
    if isinstance(f, Compound):
        yield from formula_vertices(f.left, prefix + (0,))
        yield from formula_vertices(f.right, prefix + (1,))


def count_leaves(f: Formula) -> int:
    if isinstance(f, Literal):
        return 1
    return count_leaves(f.left) + count_leaves(f.right)


def count_connectives(f: Formula) -> int:
    if isinstance(f, Literal):
        return 0
    return 1 + count_connectives(f.left) + count_connectives(f.right)


@dataclass(frozen=True)
class Sequent:
    """An ordered list of formulas.

    ``origins`` optionally records, per formula, the vertex of some earlier
    sequent it was cut out of, as ``(formula_index, path)``.  It is carried
    along by erasure for trace output and does not take part in equality.
    """

    formulas: tuple
    origins: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "formulas", tuple(self.formulas))
        if self.origins is not None:
            object.__setattr__(self, "origins", tuple(self.origins))

    @classmethod
    def of(cls, *formulas):
        return cls(tuple(formulas))

    def __len__(self):
        return len(self.formulas)

    def __iter__(self):
        return iter(self.formulas)

    def __getitem__(self, i):
        return self.formulas[i]

    def __str__(self):
        return render(self)

    @cached_property
    def _leaf_table(self):
        table = [None]
        blocks = []
        for fi, f in enumerate(self.formulas):
            start = len(table)
            for path, lit in formula_leaves(f):
                table.append((fi, path, lit))
            blocks.append(range(start, len(table)))
        index = {(e[0], e[1]): x for x, e in enumerate(table) if x}
        return table, blocks, index

    @property
    def n_leaves(self) -> int:
        return len(self._leaf_table[0]) - 1

    def leaf_ids(self) -> range:
        return range(1, self.n_leaves + 1)

    def _check(self, x):
        if not (isinstance(x, int) and 1 <= x <= self.n_leaves):
            raise IndexError(f"leaf {x} out of range 1..{self.n_leaves}")

    def literal(self, x: int) -> Literal:
        self._check(x)
        return self._leaf_table[0][x][2]

    def locate(self, x: int) -> tuple:
        """Return ``(formula_index, path)`` of leaf ``x``."""
        self._check(x)
        fi, path, _ = self._leaf_table[0][x]
        return fi, path

    def leaf_at(self, fi: int, path: Path) -> int:
        return self._leaf_table[2][(fi, tuple(path))]

    def block(self, fi: int) -> range:
        """Leaf ids of formula ``fi``."""
        return self._leaf_table[1][fi]

    def leaves_under(self, fi: int, path: Path) -> range:
        """Leaf ids below vertex ``path`` of formula ``fi``; they are contiguous."""
        f = self.formulas[fi]
        sub = subformula(f, path)
        offset = 0
        g = f
        for step in path:
            if step:
                offset += count_leaves(g.left)
                g = g.right
            else:
                g = g.left
        start = self.block(fi).start + offset
        return range(start, start + count_leaves(sub))

    def vertices(self) -> Iterator[tuple]:
        """Yield ``(formula_index, path)`` for every vertex of the forest."""
        for fi, f in enumerate(self.formulas):
            for path, _ in formula_vertices(f):
                yield fi, path

    @cached_property
    def vertex_count(self) -> int:
        return sum(2 * count_leaves(f) - 1 for f in self.formulas)

    @cached_property
    def connective_count(self) -> int:
        return sum(count_connectives(f) for f in self.formulas)

    def origin(self, fi: int) -> tuple:
        if self.origins is None:
            return fi, ()
        return self.origins[fi]


def extract(s: Sequent, parts) -> tuple:
    """Cut subformula occurrences out of ``s``.

    ``parts`` lists ``(formula_index, path)`` vertices; each becomes a formula
    of the new sequent, in order.  Returns the new sequent and a map from old
    leaf ids to new ones, for the leaves that survive.
    """
    formulas, origins, leafmap = [], [], {}
    nxt = 1
    for fi, path in parts:
        path = tuple(path)
        formulas.append(subformula(s.formulas[fi], path))
        ofi, opath = s.origin(fi)
        origins.append((ofi, tuple(opath) + path))
        for x in s.leaves_under(fi, path):
            leafmap[x] = nxt
            nxt += 1
    return Sequent(tuple(formulas), tuple(origins)), leafmap


def vertex_name(origin) -> str:
    """Text name of a vertex: 1-based formula number, then child steps."""
    fi, path = origin
    return ".".join([str(fi + 1)] + [str(b) for b in path])


def dual_pair(s: Sequent, x: int, y: int) -> bool:
    lx, ly = s.literal(x), s.literal(y)
    return x != y and lx.dual() == ly


def additive_join(s: Sequent, x: int, y: int) -> bool:
    """True iff ``x`` and ``y`` lie in one formula below an additive vertex
    that is their least common ancestor."""
    fx, px = s.locate(x)
    fy, py = s.locate(y)
    if fx != fy or x == y:
        return False
    common = []
    for a, b in zip(px, py):
        if a != b:
            break
        common.append(a)
    join = subformula(s.formulas[fx], tuple(common))
    return join.op.additive


def render_formula(f: Formula) -> str:
    return str(f)


def render(s: Sequent) -> str:
    return ", ".join(str(f) for f in s.formulas)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<ident>[a-z][a-z0-9_]*)|(?P<int>[0-9]+)|(?P<sym>[()~,*|&+]))")


class Scanner:
    """Tokenizer shared by the formula, sequent and proof parsers."""

    def __init__(self, text: str, line=None):
        self.text = text
        self.pos = 0
        self.line = line
        self._peeked = None

    def offset(self, pos=None) -> int:
        pos = self.pos if pos is None else pos
        return len(self.text[:pos].encode("utf-8"))

    def error(self, message, pos=None):
        return ParseError(message, self.offset(pos), self.line)

    def _scan(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None
        m = _TOKEN.match(self.text, self.pos)
        if m is None:
            raise self.error(f"unexpected character {self.text[self.pos]!r}")
        kind = m.lastgroup
        return kind, m.group(kind), m.start(kind), m.end()

    def peek(self):
        """Return ``(kind, value)`` of the next token, or ``None`` at end."""
        if self._peeked is None:
            self._peeked = self._scan() or ("eof", None, len(self.text), len(self.text))
        kind, value, _, _ = self._peeked
        return None if kind == "eof" else (kind, value)

    def next(self):
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        start = self._peeked[2]
        self.pos = self._peeked[3]
        self._peeked = None
        return tok[0], tok[1], start

    def expect(self, value):
        kind, got, start = self.next()
        if got != value:
            raise self.error(f"expected {value!r}, found {got!r}", start)
        return start

    def at_end(self) -> bool:
        return self.peek() is None

    def token_start(self) -> int:
        self.peek()
        return self._peeked[2]


_OPS = {op.value: op for op in Op}


def parse_formula_from(sc: Scanner) -> Formula:
    kind, value, start = sc.next()
    if kind == "ident":
        return Literal(value)
    if value == "~":
        kind, value, start = sc.next()
        if kind != "ident":
            raise sc.error("'~' applies only to a literal", start)
        return Literal(value, False)
    if value == "(":
        left = parse_formula_from(sc)
        kind, op, start = sc.next()
        if op not in _OPS:
            raise sc.error(f"expected a connective, found {op!r}", start)
        right = parse_formula_from(sc)
        sc.expect(")")
        return Compound(_OPS[op], left, right)
    raise sc.error(f"expected a formula, found {value!r}", start)


def parse_formula(text: str) -> Formula:
    sc = Scanner(text)
    if sc.at_end():
        raise sc.error("empty formula")
    f = parse_formula_from(sc)
    if not sc.at_end():
        raise sc.error("trailing input", sc.token_start())
    return f


def parse_sequent(text: str, line=None) -> Sequent:
    sc = Scanner(text, line)
    if sc.at_end():
        raise sc.error("empty sequent")
    formulas = [parse_formula_from(sc)]
    while not sc.at_end():
        sc.expect(",")
        formulas.append(parse_formula_from(sc))
    return Sequent(tuple(formulas))
