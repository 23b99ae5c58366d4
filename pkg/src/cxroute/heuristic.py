"""Look-ahead SWAP/Bridge heuristic with leading-SWAP post-processing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import (Bridge, Layout, MappingResult, Original, RoutedCircuit, RoutingError, Swap,
                      layout_swap, relabel, stats)
from .coupling import CouplingGraph, middles
from .depgraph import DependencyGraph, Frontier, advance, initial_frontier, lookahead_depths, resolve_gate

# scores are sums of alpha powers; keep "< 1" robust to rounding
_SCORE_EPS = 1e-12


@dataclass(frozen=True)
class HeuristicParams:
    alpha: float = 0.5
    lookahead_depth: int = 10

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.lookahead_depth < 0:
            raise ValueError(f"lookahead_depth must be >= 0, got {self.lookahead_depth}")


def score_edges(layout: Layout, blocking, depths: dict[int, int], c: CouplingGraph, alpha: float,
                d: DependencyGraph) -> np.ndarray:
    """Weighted shortest-path decrease for swapping each edge of ``c.edges``.

    Gates in ``blocking`` weigh 1; any other gate ``g`` in ``depths`` weighs
    ``alpha ** depths[g]``.
    """
    blocking = set(blocking)
    gates = sorted(set(depths) | blocking)
    q0 = d.arrays["q0"]
    q1 = d.arrays["q1"]
    ua = np.array([q0[g] for g in gates], dtype=np.int64)
    ub = np.array([q1[g] for g in gates], dtype=np.int64)
    w = np.array([1.0 if g in blocking else alpha ** depths[g] for g in gates], dtype=np.float64)
    fwd = np.array(layout.forward, dtype=np.int64)
    return kernels.edge_scores(c.edge_array, fwd, ua, ub, w, c.dist)


def _sp(d: DependencyGraph, g: int, fwd, c: CouplingGraph) -> int:
    a, b = d.circuit.gates[g].qubits
    return int(c.dist[fwd[a], fwd[b]])


def _emit(d: DependencyGraph, f: Frontier, layout: Layout, ops: list) -> None:
    for g in f.executed:
        gate = d.circuit.gates[g]
        ops.append(Original(gate, relabel(gate.kind, layout.forward)))


def route_heuristic(d: DependencyGraph, c: CouplingGraph, l0: Layout | None = None,
                    params: HeuristicParams = HeuristicParams(), allow_bridge: bool = True,
                    postprocess: bool = True) -> MappingResult:
    c.require_connected()
    if d.circuit.num_qubits > c.n:
        raise RoutingError(f"circuit uses {d.circuit.num_qubits} qubits but the device has {c.n}")
    layout = l0 if l0 is not None else Layout.trivial(c.n)
    if len(layout) != c.n:
        raise ValueError(f"layout of size {len(layout)} for a {c.n}-qubit device")
    edges = c.edges
    ops: list = []
    f = initial_frontier(d)
    cap = (d.n + 1) * (d.n + c.n * max(c.diameter, 1)) + 10
    loops = 0
    last_progress = None
    while True:
        loops += 1
        if loops > cap:
            raise RoutingError(f"heuristic exceeded {cap} iterations")
        f = advance(d, f, layout, c)
        _emit(d, f, layout, ops)
        if f.done:
            break
        fwd = layout.forward
        k_sum = sum(_sp(d, g, fwd, c) for g in f.blocking)
        progress = (f.resolved_count, -k_sum)
        assert last_progress is None or progress > last_progress
        last_progress = progress

        depths = lookahead_depths(d, f.blocking, params.lookahead_depth, f.resolved)
        scores = score_edges(layout, f.blocking, depths, c, params.alpha, d)
        best = int(np.argmax(scores))  # first maximum = lowest edge
        bridgeable = [g for g in f.blocking if _sp(d, g, fwd, c) == 2]
        if allow_bridge and bridgeable and scores[best] < 1 - _SCORE_EPS:
            g = bridgeable[0]
            a, b = d.circuit.gates[g].qubits
            ca, tb = fwd[a], fwd[b]
            ops.append(Bridge(g, ca, middles(c, ca, tb)[0], tb))
            f = resolve_gate(d, f, g)
            continue

        p, q = edges[best]
        swapped = layout_swap(layout, p, q)
        if sum(_sp(d, g, swapped.forward, c) for g in f.blocking) < k_sum:
            ops.append(Swap(p, q))
            layout = swapped
            continue

        g = f.blocking[0]
        a, b = d.circuit.gates[g].qubits
        while c.dist[layout[a], layout[b]] > 1:
            here = c.dist[layout[a], layout[b]]
            ends = (layout[a], layout[b])
            for p, q in edges:
                if p not in ends and q not in ends:
                    continue
                trial = layout_swap(layout, p, q)
                if c.dist[trial[a], trial[b]] < here:
                    ops.append(Swap(p, q))
                    layout = trial
                    break
            else:  # pragma: no cover - a shortest path always offers a move
                raise RoutingError(f"no improving swap for gate {g}")

    routed = RoutedCircuit.build(l0 if l0 is not None else Layout.trivial(c.n), ops)
    if postprocess:
        routed = postprocess_leading_swaps(routed)
    st = stats(routed)
    return MappingResult(routed, st, st.num_swaps + st.num_bridges)


def _wires(op) -> tuple[int, ...]:
    if isinstance(op, Swap):
        return (op.p, op.q)
    if isinstance(op, Bridge):
        return (op.c, op.m, op.t)
    return op.physical.qubits


def postprocess_leading_swaps(r: RoutedCircuit) -> RoutedCircuit:
    """Fold SWAPs that precede every other operation on their wires into the initial layout."""
    initial = r.initial_layout
    touched: set[int] = set()
    kept = []
    for op in r.ops:
        if isinstance(op, Swap) and op.p not in touched and op.q not in touched:
            initial = layout_swap(initial, op.p, op.q)
            continue
        kept.append(op)
        touched.update(_wires(op))
    out = RoutedCircuit.build(initial, kept)
    assert out.final_layout == r.final_layout
    return out
