"""Cluster rewriting shared by conflict-net and slice-net erasure.

A cluster is a frozenset of items (slicings or linking-sets) or ERROR.  The
rules are the same for both kinds of item:

* a cluster holding a disconnected item steps to ERROR;
* otherwise any item may have a ready root erased, being replaced by the
  resulting items;
* otherwise an item shaped like an axiom may be removed.

The empty cluster accepts.  Subclasses supply the item-level operations.
"""
from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import asdict, dataclass

from .errors import StepLimitExceeded
from .syntax import vertex_name


class _Error:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ERROR"

    def __reduce__(self):
        return (_Error, ())


ERROR = _Error()

# erasure order among ready roots of one item
PRIORITY = {"par": 0, "plus": 1, "with": 2, "tensor": 3}

STEP_LIMIT_VAR = "MALLNET_STEP_LIMIT"


@dataclass(frozen=True)
class Root:
    formula: int  # 0-based index in the item's sequent
    kind: str


@dataclass
class TraceStep:
    step: int
    action: str  # erase | axiom | error
    kind: str = None
    formula: int = None  # 1-based, in the sequent of the erased item
    vertex: str = None
    link: str = None

    def text(self) -> str:
        if self.action == "erase":
            return f"step {self.step}: erase {self.kind} root at formula {self.formula}, vertex {self.vertex}"
        if self.action == "axiom":
            return f"step {self.step}: axiom {self.link}" if self.link else f"step {self.step}: axiom"
        return f"step {self.step}: ERROR disconnected"

    def json(self) -> str:
        return json.dumps({k: v for k, v in asdict(self).items() if v is not None})


def step_limit_override():
    raw = os.environ.get(STEP_LIMIT_VAR)
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{STEP_LIMIT_VAR} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"{STEP_LIMIT_VAR} must be non-negative")
    return value


class ErasureSystem:
    """Item-level hooks; ``connected``, ``is_axiom``, ``ready_roots`` and
    ``erase`` must be overridden."""

    def connected(self, item) -> bool:
        raise NotImplementedError

    def is_axiom(self, item) -> bool:
        raise NotImplementedError

    def ready_roots(self, item) -> list:
        raise NotImplementedError

    def erase(self, item, root) -> list:
        raise NotImplementedError

    def sort_key(self, item):
        return repr(item)

    def axiom_label(self, item):
        return None

    def budget(self, items) -> int:
        raise NotImplementedError

    def profile(self, cluster) -> tuple:
        raise NotImplementedError

    # -- derived ---------------------------------------------------------------

    def best_root(self, item):
        roots = self.ready_roots(item)
        if not roots:
            return None
        return min(roots, key=lambda r: (PRIORITY[r.kind], r.formula))

    def successors(self, cluster) -> set:
        """All one-step reducts of ``cluster`` (which must not be ERROR)."""
        if cluster is ERROR:
            raise ValueError("ERROR has no successors")
        items = list(cluster)
        if any(not self.connected(x) for x in items):
            return {ERROR}
        out = set()
        for x in items:
            rest = cluster - {x}
            if self.is_axiom(x):
                out.add(rest)
            for r in self.ready_roots(x):
                out.add(rest | frozenset(self.erase(x, r)))
        return out

    def normal_forms(self, cluster, max_states=None) -> set:
        """Normal forms reachable from ``cluster`` along every order."""
        seen = {cluster}
        todo = deque([cluster])
        forms = set()
        while todo:
            c = todo.popleft()
            nxt = set() if c is ERROR else self.successors(c)
            if not nxt:
                forms.add(c)
            for d in nxt:
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
                    if max_states is not None and len(seen) > max_states:
                        raise RuntimeError(f"more than {max_states} clusters reachable")
        return forms

    def normalize(self, cluster, limit=None, check_profile=False):
        """Deterministic reduction to normal form; returns ``(form, trace)``."""
        if cluster is ERROR:
            return ERROR, []
        items = sorted(cluster, key=self.sort_key)
        if limit is None:
            limit = step_limit_override()
        if limit is None:
            limit = self.budget(items)
        trace = []
        ready = {}
        stuck = set()
        conn = {}

        def connected(x):
            if x not in conn:
                conn[x] = self.connected(x)
            return conn[x]

        while True:
            if any(not connected(x) for x in items):
                trace.append(TraceStep(len(trace) + 1, "error"))
                return ERROR, trace
            chosen = None
            for i, x in enumerate(items):
                if x in stuck:
                    continue
                if self.is_axiom(x):
                    chosen = (i, None)
                    break
                if x not in ready:
                    ready[x] = self.best_root(x)
                if ready[x] is None:
                    stuck.add(x)
                    continue
                chosen = (i, ready[x])
                break
            if chosen is None:
                return frozenset(items), trace
            if len(trace) >= limit:
                raise StepLimitExceeded(f"erasure needed more than {limit} steps")
            before = self.profile(frozenset(items)) if check_profile else None
            i, root = chosen
            x = items[i]
            if root is None:
                trace.append(TraceStep(len(trace) + 1, "axiom", link=self.axiom_label(x)))
                new = []
            else:
                seq = x.sequent
                trace.append(
                    TraceStep(len(trace) + 1, "erase", root.kind, root.formula + 1, vertex_name(seq.origin(root.formula)))
                )
                new = self.erase(x, root)
            present = set(items[:i] + items[i + 1:])
            fresh = []
            for y in new:
                if y not in present:
                    present.add(y)
                    fresh.append(y)
            items = items[:i] + fresh + items[i + 1:]
            if check_profile:
                self._check_profile(before, frozenset(items))

    def _check_profile(self, before, after_cluster):
        after = self.profile(after_cluster)
        p0, q0 = before
        p1, q1 = after
        if p1 < p0 or (p1 == p0 and q1 < q0):
            return
        # A & step that sends no piece to one side leaves p unchanged and may
        # copy the context; the empty item it creates forces ERROR next step.
        if any(not self.connected(x) for x in after_cluster):
            return
        raise AssertionError(f"profile did not decrease: {before} -> {after}")
