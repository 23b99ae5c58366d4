"""Commutation-aware dependency graphs and the blocking-gate frontier.

Three rule sets are supported:

``FULL``
    Edges from the windowed symbol test: two gates sharing qubit ``b`` are
    ordered unless every symbol on ``b`` from the first gate through the
    second (inclusive) is Z-like (Rz, CX control) or every one is X-like
    (Rx, CX target).
``STANDARD_DAG``
    Consecutive gates on each qubit's timeline are ordered.
``FIXED_LAYER``
    Standard-DAG edges plus a total order between consecutive ASAP layers of
    CNOTs.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .circuit import CX, Circuit, H, Layout, Rx, Rz
from .coupling import CouplingGraph


class Rules(str, enum.Enum):
    FULL = "full"
    STANDARD_DAG = "std-dag"
    FIXED_LAYER = "fixed-layer"


class Symbol(enum.Enum):
    RZ = "Rz"
    CONTROL = "control"
    RX = "Rx"
    TARGET = "target"
    H = "H"


Z_LIKE = frozenset({Symbol.RZ, Symbol.CONTROL})
X_LIKE = frozenset({Symbol.RX, Symbol.TARGET})


def symbols(kind) -> list[tuple[int, Symbol]]:
    """(qubit, symbol) pairs a gate kind places on its wires."""
    if isinstance(kind, CX):
        return [(kind.control, Symbol.CONTROL), (kind.target, Symbol.TARGET)]
    if isinstance(kind, Rz):
        return [(kind.qubit, Symbol.RZ)]
    if isinstance(kind, Rx):
        return [(kind.qubit, Symbol.RX)]
    if isinstance(kind, H):
        return [(kind.qubit, Symbol.H)]
    raise TypeError(f"no symbol for {kind!r}")


@dataclass(frozen=True, eq=False)
class DependencyGraph:
    circuit: Circuit
    edges: frozenset[tuple[int, int]]
    rules: Optional[Rules] = None
    succ: tuple[tuple[int, ...], ...] = field(init=False)
    pred: tuple[tuple[int, ...], ...] = field(init=False)
    order: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        n = len(self.circuit)
        succ: list[list[int]] = [[] for _ in range(n)]
        pred: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            succ[u].append(v)
            pred[v].append(u)
        object.__setattr__(self, "succ", tuple(tuple(sorted(s)) for s in succ))
        object.__setattr__(self, "pred", tuple(tuple(sorted(p)) for p in pred))
        object.__setattr__(self, "order", _min_id_topological_order(self.succ, self.pred))

    @property
    def n(self) -> int:
        return len(self.circuit)

    @property
    def in_degree(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.pred)

    @cached_property
    def rank(self) -> np.ndarray:
        rank = np.empty(self.n, dtype=np.int64)
        rank[np.array(self.order, dtype=np.int64)] = np.arange(self.n)
        return rank

    @cached_property
    def arrays(self) -> dict[str, np.ndarray]:
        """Flat arrays consumed by the frontier kernel."""
        q0 = np.empty(self.n, dtype=np.int64)
        q1 = np.full(self.n, -1, dtype=np.int64)
        for g in self.circuit.gates:
            qs = g.qubits
            q0[g.id] = qs[0]
            if len(qs) == 2:
                q1[g.id] = qs[1]
        return {
            "q0": q0,
            "q1": q1,
            "succ_ptr": _ptr(self.succ),
            "succ_idx": _flat(self.succ),
            "pred_ptr": _ptr(self.pred),
            "pred_idx": _flat(self.pred),
            "order": np.array(self.order, dtype=np.int64),
            "rank": self.rank,
        }

    def ancestors_closure(self) -> list[int]:
        """Per-node bitmask of strict descendants (bit ``j`` set iff a path i -> j exists)."""
        reach = [0] * self.n
        for u in reversed(self.order):
            acc = 0
            for v in self.succ[u]:
                acc |= reach[v] | (1 << v)
            reach[u] = acc
        return reach

    def is_cx(self, g: int) -> bool:
        return self.circuit.gates[g].is_cx


def _ptr(lists) -> np.ndarray:
    ptr = np.zeros(len(lists) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(x) for x in lists])
    return ptr


def _flat(lists) -> np.ndarray:
    return np.array([v for x in lists for v in x], dtype=np.int64)


def _min_id_topological_order(succ, pred) -> tuple[int, ...]:
    indeg = [len(p) for p in pred]
    heap = [g for g, d in enumerate(indeg) if d == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        g = heapq.heappop(heap)
        order.append(g)
        for s in succ[g]:
            indeg[s] -= 1
            if indeg[s] == 0:
                heapq.heappush(heap, s)
    if len(order) != len(succ):
        raise ValueError("dependency edges contain a cycle")
    return tuple(order)


def _timelines(circuit: Circuit) -> list[list[tuple[int, Symbol]]]:
    lines: list[list[tuple[int, Symbol]]] = [[] for _ in range(circuit.num_qubits)]
    for g in circuit.gates:
        for b, s in symbols(g.kind):
            lines[b].append((g.id, s))
    return lines


def _full_edges(circuit: Circuit) -> set[tuple[int, int]]:
    edges = set()
    for line in _timelines(circuit):
        # prefix counts of symbols outside each commuting class
        not_z = [0]
        not_x = [0]
        for _, s in line:
            not_z.append(not_z[-1] + (s not in Z_LIKE))
            not_x.append(not_x[-1] + (s not in X_LIKE))
        for a in range(len(line)):
            for b in range(a + 1, len(line)):
                if not_z[b + 1] - not_z[a] and not_x[b + 1] - not_x[a]:
                    edges.add((line[a][0], line[b][0]))
    return edges


def _standard_edges(circuit: Circuit) -> set[tuple[int, int]]:
    edges = set()
    for line in _timelines(circuit):
        for (u, _), (v, _) in zip(line, line[1:]):
            edges.add((u, v))
    return edges


def cnot_layers(circuit: Circuit, edges: Iterable[tuple[int, int]]) -> dict[int, int]:
    """ASAP layer index (from 1) of every CNOT under the given precedence edges."""
    n = len(circuit)
    pred: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        pred[v].append(u)
    reach_layer = [0] * n  # deepest CNOT layer among ancestors-or-self
    layers = {}
    for g in circuit.gates:
        deepest = max((reach_layer[p] for p in pred[g.id]), default=0)
        if g.is_cx:
            layers[g.id] = deepest + 1
            deepest += 1
        reach_layer[g.id] = deepest
    return layers


def _fixed_layer_edges(circuit: Circuit) -> set[tuple[int, int]]:
    edges = _standard_edges(circuit)
    by_layer: dict[int, list[int]] = {}
    for g, k in cnot_layers(circuit, edges).items():
        by_layer.setdefault(k, []).append(g)
    for k in sorted(by_layer):
        for u in by_layer[k]:
            for v in by_layer.get(k + 1, ()):
                edges.add((u, v))
    return edges


def build(circuit: Circuit, rules: Rules | str = Rules.FULL) -> DependencyGraph:
    rules = Rules(rules)
    if rules is Rules.FULL:
        edges = _full_edges(circuit)
    elif rules is Rules.STANDARD_DAG:
        edges = _standard_edges(circuit)
    else:
        edges = _fixed_layer_edges(circuit)
    return DependencyGraph(circuit, frozenset(edges), rules)


def reduce_transitive(d: DependencyGraph) -> DependencyGraph:
    reach = [0] * d.n
    kept = set()
    for u in reversed(d.order):
        covered = 0
        # successors in topological order: a later one can only be reached
        # through an earlier one
        for v in sorted(d.succ[u], key=lambda s: d.rank[s]):
            if not covered >> v & 1:
                kept.add((u, v))
            covered |= reach[v] | (1 << v)
        reach[u] = covered
    return DependencyGraph(d.circuit, frozenset(kept), d.rules)


# --------------------------------------------------------------------------
# frontier
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Frontier:
    """Leading unresolved gates plus the resolved mask.

    ``executed`` lists the gates run by the advance that produced this value.
    Before an advance, ``blocking`` may hold gates that are merely candidates.
    """

    blocking: tuple[int, ...]
    resolved: np.ndarray
    executed: tuple[int, ...] = ()

    @property
    def resolved_count(self) -> int:
        return int(self.resolved.sum())

    @property
    def done(self) -> bool:
        return not self.blocking

    def key(self) -> tuple[int, ...]:
        return self.blocking


def initial_frontier(d: DependencyGraph) -> Frontier:
    blocking = tuple(g for g in range(d.n) if not d.pred[g])
    return Frontier(blocking, np.zeros(d.n, dtype=np.uint8))


def advance_arrays(d: DependencyGraph, resolved: np.ndarray, pending: np.ndarray,
                   fwd: np.ndarray, coupling: CouplingGraph) -> tuple[np.ndarray, np.ndarray]:
    """Kernel entry point; ``resolved`` is updated in place."""
    a = d.arrays
    return kernels.advance_sweep(resolved, pending, fwd, a["q0"], a["q1"], coupling.adj_matrix,
                                 a["succ_ptr"], a["succ_idx"], a["pred_ptr"], a["pred_idx"],
                                 a["order"], a["rank"])


def advance(d: DependencyGraph, f: Frontier, layout: Layout, coupling: CouplingGraph) -> Frontier:
    resolved = f.resolved.copy()
    pending = np.array(f.blocking, dtype=np.int64)
    fwd = np.array(layout.forward, dtype=np.int64)
    executed, blocked = advance_arrays(d, resolved, pending, fwd, coupling)
    return Frontier(tuple(sorted(int(g) for g in blocked)), resolved, tuple(int(g) for g in executed))


def resolve_gate(d: DependencyGraph, f: Frontier, g: int) -> Frontier:
    """Mark frontier gate ``g`` as resolved elsewhere (e.g. by a Bridge).

    The returned frontier's ``blocking`` holds candidates; pass it through
    :func:`advance` to obtain the real blocking set.
    """
    if g not in f.blocking:
        raise ValueError(f"gate {g} is not in the frontier")
    resolved = f.resolved.copy()
    resolved[g] = 1
    unlocked = [s for s in d.succ[g] if all(resolved[p] for p in d.pred[s])]
    return Frontier(tuple(sorted(set(f.blocking) - {g} | set(unlocked))), resolved)


def lookahead_depths(d: DependencyGraph, blocking: Iterable[int], max_depth: int,
                     resolved: Optional[np.ndarray] = None) -> dict[int, int]:
    """Longest-path depth from the blocking set to each unresolved CNOT within ``max_depth``.

    Without ``resolved``, every gate that is neither in ``blocking`` nor one of
    its descendants is taken as resolved.
    """
    blocking = sorted(set(blocking))
    rank = d.rank
    if resolved is None:
        unresolved = np.zeros(d.n, dtype=bool)
        reach = d.ancestors_closure()
        for k in blocking:
            unresolved[k] = True
            mask = reach[k]
            while mask:
                low = mask & -mask
                unresolved[low.bit_length() - 1] = True
                mask ^= low
    else:
        unresolved = resolved == 0

    depth: dict[int, int] = {k: 0 for k in blocking}
    heap = []
    seen = set(blocking)
    for k in blocking:
        for s in d.succ[k]:
            if s not in seen:
                seen.add(s)
                heapq.heappush(heap, (int(rank[s]), s))
    while heap:
        _, g = heapq.heappop(heap)
        best = -1
        too_deep = False
        for p in d.pred[g]:
            if p in depth:
                best = max(best, depth[p])
            elif unresolved[p]:
                # an unresolved predecessor that never got a depth lies deeper
                # than max_depth, and so does g
                too_deep = True
                break
        if too_deep or best + 1 > max_depth:
            continue
        depth[g] = best + 1
        for s in d.succ[g]:
            if s not in seen:
                seen.add(s)
                heapq.heappush(heap, (int(rank[s]), s))
    return {g: k for g, k in sorted(depth.items()) if d.is_cx(g)}


def to_dot(d: DependencyGraph) -> str:
    lines = ["digraph dependencies {"]
    for g in d.circuit.gates:
        kind = type(g.kind).__name__
        qs = ",".join(f"b{q}" for q in g.qubits)
        lines.append(f'  g{g.id} [label="{g.id}: {kind}({qs})"];')
    for u, v in sorted(d.edges):
        lines.append(f"  g{u} -> g{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
