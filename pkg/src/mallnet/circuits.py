"""Boxless nets: circuits of nodes and wires, checked by erasure.

A wire carries a formula from its source node to a target node, or to the
outside when it is an exit.  Node kinds are ``axiom``, ``contraction``,
``tensor``, ``par``, ``with`` and ``plus``; the incoming wires of binary and
plus nodes are marked ``left`` or ``right``.  A node is final when it is the
source of an exit.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

import networkx as nx

from .coherence import token_key
from .errors import InvalidCircuit, NotANet, NotReady, ParseError, StepLimitExceeded
from .graphs import components
from .linking import split_comment
from .proofs import Ax, check_proof, par_at, plus_at, tensor_join, with_at
from .rewrite import PRIORITY, TraceStep, step_limit_override
from .syntax import Compound, Literal, Op, Scanner, Sequent, parse_formula_from

KINDS = ("axiom", "contraction", "tensor", "par", "with", "plus")
BINARY = {"tensor": Op.TENSOR, "par": Op.PAR, "with": Op.WITH}


@dataclass(frozen=True)
class Wire:
    id: str
    formula: object
    source: str
    target: str = None
    side: str = None


@dataclass(frozen=True)
class Circuit:
    nodes: tuple  # (id, kind) pairs
    wires: tuple  # Wire values
    exits: tuple  # wire ids, in order

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda n: token_key(n[0]))))
        object.__setattr__(self, "wires", tuple(sorted(self.wires, key=lambda w: token_key(w.id))))
        object.__setattr__(self, "exits", tuple(self.exits))

    @cached_property
    def kind(self) -> dict:
        return dict(self.nodes)

    @cached_property
    def wire(self) -> dict:
        return {w.id: w for w in self.wires}

    @cached_property
    def incoming(self) -> dict:
        out = {n: [] for n, _ in self.nodes}
        for w in self.wires:
            if w.target is not None:
                out.setdefault(w.target, []).append(w)
        order = {"left": 0, "right": 1, None: 2}
        for ws in out.values():
            ws.sort(key=lambda w: (order.get(w.side, 3), token_key(w.id)))
        return out

    @cached_property
    def outgoing(self) -> dict:
        out = {n: [] for n, _ in self.nodes}
        for w in self.wires:
            out.setdefault(w.source, []).append(w)
        return out

    @cached_property
    def node_adjacency(self) -> dict:
        adj = {n: set() for n, _ in self.nodes}
        for w in self.wires:
            if w.target is not None and w.source in adj and w.target in adj:
                adj[w.source].add(w.target)
                adj[w.target].add(w.source)
        return adj

    def final_nodes(self) -> list:
        seen = []
        for e in self.exits:
            s = self.wire[e].source
            if s not in seen:
                seen.append(s)
        return seen

    def exit_of(self, node):
        """Position in the exit order of the node's exit wire."""
        for i, e in enumerate(self.exits):
            if self.wire[e].source == node:
                return i
        raise KeyError(node)

    @property
    def conclusion(self) -> Sequent:
        return Sequent(tuple(self.wire[e].formula for e in self.exits))

    def non_contraction_count(self) -> int:
        return sum(1 for _, k in self.nodes if k != "contraction")

    def __str__(self):
        return format_circuit(self)


class CircuitBuilder:
    def __init__(self):
        self._nodes = []
        self._wires = {}

    def node(self, kind):
        nid = f"N{len(self._nodes) + 1}"
        self._nodes.append((nid, kind))
        return nid

    def wire(self, formula, source):
        wid = f"W{len(self._wires) + 1}"
        self._wires[wid] = Wire(wid, formula, source)
        return wid

    def attach(self, wid, target, side):
        self._wires[wid] = replace(self._wires[wid], target=target, side=side)

    def finish(self, exits) -> Circuit:
        return Circuit(tuple(self._nodes), tuple(self._wires.values()), tuple(exits))


# -- validity ------------------------------------------------------------------


def circuit_problem(x: Circuit):
    """First structural defect of ``x`` as a message, or None."""
    if not x.nodes:
        return "a circuit needs at least one node"
    if len(x.kind) != len(x.nodes):
        return "duplicate node id"
    if len(x.wire) != len(x.wires):
        return "duplicate wire id"
    for n, k in x.nodes:
        if k not in KINDS:
            return f"node {n} has unknown kind {k!r}"
    for w in x.wires:
        if w.source not in x.kind:
            return f"wire {w.id} starts at unknown node {w.source}"
        if w.target is not None and w.target not in x.kind:
            return f"wire {w.id} ends at unknown node {w.target}"
        if w.source == w.target:
            return f"wire {w.id} is a loop on node {w.source}"
    dangling = {w.id for w in x.wires if w.target is None}
    if len(set(x.exits)) != len(x.exits):
        return "an exit is listed twice"
    for e in x.exits:
        if e not in x.wire:
            return f"exit {e} is not a wire"
    if dangling != set(x.exits):
        missing = sorted(dangling - set(x.exits), key=token_key)
        extra = sorted(set(x.exits) - dangling, key=token_key)
        if missing:
            return f"wire {missing[0]} has no target but is not listed as an exit"
        return f"exit {extra[0]} has a target"
    for n, k in x.nodes:
        msg = _node_problem(x, n, k)
        if msg:
            return msg
    if len(components(x.node_adjacency, x.node_adjacency)) != 1:
        return "circuit is disconnected"
    return None


def _node_problem(x, n, k):
    ins, outs = x.incoming[n], x.outgoing[n]
    if k == "axiom":
        if ins or len(outs) != 2:
            return f"axiom {n} must have no inputs and two outputs"
        a, b = outs[0].formula, outs[1].formula
        if not (isinstance(a, Literal) and isinstance(b, Literal) and a.dual() == b):
            return f"axiom {n} outputs {a} and {b}, which are not dual literals"
        return None
    if len(outs) != 1:
        return f"{k} node {n} must have exactly one output, has {len(outs)}"
    out = outs[0].formula
    if k == "contraction":
        if len(ins) != 2:
            return f"contraction {n} must have two inputs, has {len(ins)}"
        if any(w.side is not None for w in ins):
            return f"contraction {n} inputs take no left/right mark"
        if not (ins[0].formula == ins[1].formula == out):
            return f"contraction {n} joins {ins[0].formula} and {ins[1].formula} into {out}"
        return None
    if k == "plus":
        if len(ins) != 1 or ins[0].side not in ("left", "right"):
            return f"plus node {n} needs one input marked left or right"
        a = ins[0].formula
        ok = isinstance(out, Compound) and out.op is Op.PLUS and (out.left if ins[0].side == "left" else out.right) == a
        return None if ok else f"plus node {n} turns {a} into {out}"
    sides = sorted(w.side or "" for w in ins)
    if sides != ["left", "right"]:
        return f"{k} node {n} needs one left and one right input"
    left, right = ins
    want = Compound(BINARY[k], left.formula, right.formula)
    if out != want:
        return f"{k} node {n} has inputs {left.formula}, {right.formula} but output {out}"
    return None


def validate_circuit(x: Circuit) -> Sequent:
    msg = circuit_problem(x)
    if msg:
        raise InvalidCircuit(msg)
    return x.conclusion


# -- erasure ---------------------------------------------------------------------


def _components_without(x, deleted):
    rest = [n for n, _ in x.nodes if n not in deleted]
    return [set(c) for c in components(rest, x.node_adjacency)]


def ready_nodes(x: Circuit) -> list:
    if len(x.nodes) == 1:
        n, k = x.nodes[0]
        return [n] if k == "axiom" else []
    finals = x.final_nodes()
    out = []
    for n in finals:
        k = x.kind[n]
        if k == "plus":
            out.append(n)
        elif k == "par":
            if len(_components_without(x, {n})) == 1:
                out.append(n)
        elif k == "tensor":
            if len(_components_without(x, {n})) == 2:
                out.append(n)
        elif k == "with":
            if _with_split(x, n) is not None:
                out.append(n)
    return out


def _with_split(x, n):
    """For a & node ``n``: the components (left side first) left after
    deleting every final node, or None when ``n`` is not ready."""
    finals = x.final_nodes()
    if any(x.kind[m] != "contraction" for m in finals if m != n):
        return None
    comps = _components_without(x, set(finals))
    if len(comps) != 2:
        return None
    for m in finals:
        where = sorted(0 if w.source in comps[0] else 1 for w in x.incoming[m])
        if where != [0, 1]:
            return None
    left_src = x.incoming[n][0].source
    return comps if left_src in comps[0] else comps[::-1]


def _part(x, comp, deleted):
    """Sub-circuit on node set ``comp``; wires into deleted nodes become exits."""
    wires = []
    for w in x.wires:
        if w.source in comp:
            if w.target in deleted:
                w = replace(w, target=None, side=None)
            wires.append(w)
    exits = []
    for e in x.exits:
        src = x.wire[e].source
        if src in comp:
            exits.append(e)
        elif src in deleted:
            exits.extend(w.id for w in x.incoming[src] if w.source in comp)
    nodes = tuple((n, k) for n, k in x.nodes if n in comp)
    return Circuit(nodes, tuple(wires), tuple(exits))


def erase_node(x: Circuit, n) -> list:
    """Circuits left by erasing the ready node ``n``: none for an axiom, one
    for ⅋ and ⊕, two for ⊗ and & (left side first)."""
    if n not in ready_nodes(x):
        raise NotReady(f"node {n} is not ready")
    k = x.kind[n]
    if k == "axiom":
        return []
    if k == "with":
        comps = _with_split(x, n)
        deleted = set(x.final_nodes())
        return [_part(x, c, deleted) for c in comps]
    comps = _components_without(x, {n})
    if k == "tensor":
        left_src = x.incoming[n][0].source
        comps.sort(key=lambda c: left_src not in c)
    return [_part(x, c, {n}) for c in comps]


def _best_node(x):
    ready = ready_nodes(x)
    if not ready:
        return None
    rank = dict(PRIORITY, axiom=4)
    return min(ready, key=lambda n: (rank[x.kind[n]], x.exit_of(n)))


def circuit_successors(s) -> set:
    """All one-step reducts of a set of circuits."""
    out = set()
    for x in s:
        for n in ready_nodes(x):
            out.add((s - {x}) | frozenset(erase_node(x, n)))
    return out


def normalize_circuits(s, limit=None):
    """Deterministic erasure of a set of circuits; returns ``(form, trace)``."""
    items = sorted(s, key=_circuit_key)
    if limit is None:
        limit = step_limit_override()
    if limit is None:
        limit = sum(len(x.nodes) for x in items)
    trace = []
    stuck = set()
    while True:
        chosen = None
        for i, x in enumerate(items):
            if x in stuck:
                continue
            n = _best_node(x)
            if n is None:
                stuck.add(x)
                continue
            chosen = (i, n)
            break
        if chosen is None:
            return frozenset(items), trace
        if len(trace) >= limit:
            raise StepLimitExceeded(f"circuit erasure needed more than {limit} steps")
        i, n = chosen
        x = items[i]
        kind = x.kind[n]
        if kind == "axiom":
            trace.append(TraceStep(len(trace) + 1, "axiom", link=n))
        else:
            trace.append(TraceStep(len(trace) + 1, "erase", kind, x.exit_of(n) + 1, n))
        new = [y for y in erase_node(x, n) if y not in items]
        items = items[:i] + new + items[i + 1:]


def _circuit_key(x):
    return min(token_key(n) for n, _ in x.nodes)


def circuit_trace_line(t: TraceStep) -> str:
    if t.action == "axiom":
        return f"step {t.step}: axiom {t.link}"
    return f"step {t.step}: erase {t.kind} node {t.vertex} at exit {t.formula}"


def is_boxless_net(x: Circuit) -> bool:
    validate_circuit(x)
    form, _ = normalize_circuits(frozenset({x}))
    return form == frozenset()


def sequentialize_circuit(x: Circuit):
    validate_circuit(x)
    p = _sequentialize(x)
    assert check_proof(p) == x.conclusion
    return p


def _sequentialize(x):
    n = _best_node(x)
    if n is None:
        raise NotANet("stuck: no ready node")
    kind = x.kind[n]
    if kind == "axiom":
        return Ax(x.wire[x.exits[0]].formula)
    k = x.exit_of(n)
    parts = erase_node(x, n)
    if kind == "par":
        return par_at(_sequentialize(parts[0]), k)
    if kind == "plus":
        w = x.incoming[n][0]
        f = x.wire[x.exits[k]].formula
        if w.side == "left":
            return plus_at(_sequentialize(parts[0]), k, 1, f.right)
        return plus_at(_sequentialize(parts[0]), k, 2, f.left)
    if kind == "with":
        return with_at(_sequentialize(parts[0]), _sequentialize(parts[1]), k)
    # ⊗: sort the other exits by the side they ended up on
    p0, p1 = _sequentialize(parts[0]), _sequentialize(parts[1])
    left_nodes = {m for m, _ in parts[0].nodes}
    sides = []
    for i, e in enumerate(x.exits):
        if i != k:
            sides.append((i, 0 if x.wire[e].source in left_nodes else 1))
    order0 = sorted([i for i, s in sides if s == 0] + [k])
    order1 = sorted([i for i, s in sides if s == 1] + [k])
    layout = []
    for i in range(len(x.exits)):
        if i == k:
            layout.append("t")
        elif i in order0:
            layout.append(("l", order0.index(i)))
        else:
            layout.append(("r", order1.index(i)))
    return tensor_join(p0, order0.index(k), p1, order1.index(k), layout)


# -- isomorphism -----------------------------------------------------------------


def _digraph(x):
    g = nx.DiGraph()
    pos = {e: i for i, e in enumerate(x.exits)}
    for n, k in x.nodes:
        g.add_node(("n", n), label=("node", k))
    for w in x.wires:
        g.add_node(("w", w.id), label=("wire", w.formula, w.side, pos.get(w.id)))
        g.add_edge(("n", w.source), ("w", w.id))
        if w.target is not None:
            g.add_edge(("w", w.id), ("n", w.target))
    return g


def isomorphic(a: Circuit, b: Circuit) -> bool:
    """Equal up to renaming nodes and wires, keeping kinds, formulas,
    left/right marks and the exit order."""
    if len(a.nodes) != len(b.nodes) or len(a.wires) != len(b.wires) or a.conclusion != b.conclusion:
        return False
    if sorted(k for _, k in a.nodes) != sorted(k for _, k in b.nodes):
        return False
    return nx.is_isomorphic(_digraph(a), _digraph(b), node_match=lambda u, v: u["label"] == v["label"])


# -- file format ------------------------------------------------------------------


def format_circuit(x: Circuit) -> str:
    lines = ["net circuit"]
    for n, k in x.nodes:
        if k == "axiom":
            lines.append(f"node {n} axiom {x.outgoing[n][0].formula}")
        elif k == "plus":
            side = x.incoming[n][0].side if x.incoming[n] else "left"
            lines.append(f"node {n} plus-{side}")
        else:
            lines.append(f"node {n} {k}")
    for w in x.wires:
        target = w.target if w.target is not None else "exit"
        side = f" {w.side}" if w.side else ""
        lines.append(f"wire {w.id} {w.source} -> {target}{side} : {w.formula}")
    lines.append("exits " + " ".join(x.exits))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    from .linking import _strip_header

    body = _strip_header(text.splitlines(), "circuit")
    nodes, wires, exits = [], [], None
    plus_side = {}
    axiom_literal = {}
    for no, raw in body:
        line = split_comment(raw).strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "node":
            if len(words) < 3:
                raise ParseError("node needs an id and a kind", 0, no)
            nid, kind = words[1], words[2]
            if kind in ("plus-left", "plus-right"):
                plus_side[nid] = kind[5:]
                kind = "plus"
            if kind not in KINDS:
                raise ParseError(f"unknown node kind {words[2]!r}", 0, no)
            if kind == "axiom" and len(words) > 3:
                axiom_literal[nid] = (" ".join(words[3:]), no)
            elif len(words) > 3:
                raise ParseError("unexpected text after node kind", 0, no)
            nodes.append((nid, kind))
        elif words[0] == "wire":
            head, sep, formula_text = line.partition(":")
            if not sep:
                raise ParseError("wire needs ': formula'", 0, no)
            hw = head.split()
            if len(hw) not in (5, 6) or hw[3] != "->":
                raise ParseError("expected 'wire ID SRC -> DST [left|right] : formula'", 0, no)
            side = hw[5] if len(hw) == 6 else None
            if side not in (None, "left", "right"):
                raise ParseError(f"bad side {side!r}", 0, no)
            sc = Scanner(formula_text, no)
            formula = parse_formula_from(sc)
            if not sc.at_end():
                raise sc.error("trailing input after wire formula", sc.token_start())
            target = None if hw[4] == "exit" else hw[4]
            wires.append(Wire(hw[1], formula, hw[2], target, side))
        elif words[0] == "exits":
            if exits is not None:
                raise ParseError("duplicate exits line", 0, no)
            exits = tuple(words[1:])
        else:
            raise ParseError(f"unknown directive {words[0]!r}", 0, no)
    if exits is None:
        raise ParseError("missing exits line", 0, len(text.splitlines()))
    fixed = []
    for w in wires:
        if w.target in plus_side:
            want = plus_side[w.target]
            if w.side is None:
                w = replace(w, side=want)
            elif w.side != want:
                raise ParseError(f"wire {w.id} is marked {w.side} but node {w.target} is plus-{want}", 0, 0)
        fixed.append(w)
    x = Circuit(tuple(nodes), tuple(fixed), exits)
    for nid, (lit, no) in axiom_literal.items():
        outs = {str(w.formula) for w in x.outgoing.get(nid, [])}
        if lit not in outs:
            raise ParseError(f"axiom {nid} names {lit} but its wires carry {sorted(outs)}", 0, no)
    return x
