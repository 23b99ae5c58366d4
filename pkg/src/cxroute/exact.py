"""Breadth-first dynamic program over (layout, blocking gates) states.

Each SWAP on a coupling edge or Bridge on a distance-2 blocking CNOT costs
one unit, so the first wave that empties the frontier gives the minimum number
of additional SWAP + Bridge gates.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .circuit import (Bridge, Layout, MappingResult, Original, RoutedCircuit, RoutingError, Swap,
                      relabel, stats)
from .coupling import CouplingGraph, middles
from .depgraph import DependencyGraph, advance_arrays, initial_frontier

DEFAULT_GUARD = 8

Key = tuple[tuple[int, ...], tuple[int, ...]]


class GuardError(RoutingError):
    pass


@dataclass(frozen=True)
class SwapEdge:
    p: int
    q: int


@dataclass(frozen=True)
class BridgeGate:
    gate_id: int
    c: int
    m: int
    t: int


Action = Union[SwapEdge, BridgeGate]


@dataclass
class SearchRecord:
    cost: int
    parent: Optional[Key]
    action: Optional[Action]
    executed: tuple[int, ...]
    resolved: bytes


def _check_inputs(d: DependencyGraph, c: CouplingGraph) -> None:
    c.require_connected()
    if d.circuit.num_qubits > c.n:
        raise RoutingError(f"circuit uses {d.circuit.num_qubits} qubits but the device has {c.n}")


def _seed_layouts(n: int, initial_layouts, guard: int) -> list[tuple[int, ...]]:
    if isinstance(initial_layouts, str):
        if initial_layouts == "trivial":
            return [tuple(range(n))]
        if initial_layouts != "all":
            raise ValueError(f"unknown initial layout choice {initial_layouts!r}")
        if n > guard:
            raise GuardError(f"exhaustive initial layouts over {n} qubits exceed the guard of {guard}")
        return list(itertools.permutations(range(n)))
    if isinstance(initial_layouts, Layout):
        initial_layouts = [initial_layouts]
    seeds = []
    for lay in initial_layouts:
        lay = lay if isinstance(lay, Layout) else Layout(tuple(lay))
        if len(lay) != n:
            raise ValueError(f"layout of size {len(lay)} for a {n}-qubit device")
        seeds.append(lay.forward)
    return seeds


def _search(d: DependencyGraph, c: CouplingGraph, seeds: Sequence[tuple[int, ...]], allow_bridge: bool,
            max_states: Optional[int]) -> tuple[dict[Key, SearchRecord], Key]:
    visited: dict[Key, SearchRecord] = {}
    start = initial_frontier(d)
    pending0 = np.array(start.blocking, dtype=np.int64)
    cx_pairs = {g.id: g.qubits for g in d.circuit.gates if g.is_cx}
    edges = c.edges
    dist = c.dist

    active: list[Key] = []
    for fwd in seeds:
        resolved = start.resolved.copy()
        executed, blocked = advance_arrays(d, resolved, pending0, np.array(fwd, dtype=np.int64), c)
        key = (fwd, tuple(sorted(blocked.tolist())))
        if key in visited:
            continue
        visited[key] = SearchRecord(0, None, None, tuple(executed.tolist()), resolved.tobytes())
        if not key[1]:
            return visited, key
        active.append(key)

    wave = 0
    while active:
        wave += 1
        nxt: list[Key] = []
        for key in active:
            fwd, blocking = key
            rec = visited[key]
            assert rec.cost == wave - 1
            base = np.frombuffer(rec.resolved, dtype=np.uint8)
            fwd_arr = np.array(fwd, dtype=np.int64)
            inv = np.empty_like(fwd_arr)
            inv[fwd_arr] = np.arange(len(fwd))

            transitions = []
            if allow_bridge:
                for g in blocking:
                    a, b = cx_pairs[g]
                    if dist[fwd[a], fwd[b]] == 2:
                        resolved = base.copy()
                        resolved[g] = 1
                        pend = [k for k in blocking if k != g]
                        pend.extend(s for s in d.succ[g] if all(resolved[p] for p in d.pred[s]))
                        ca, tb = fwd[a], fwd[b]
                        action = BridgeGate(g, ca, middles(c, ca, tb)[0], tb)
                        transitions.append((action, fwd_arr, resolved, pend))
            pend_k = list(blocking)
            for p, q in edges:
                new = fwd_arr.copy()
                new[inv[p]] = q
                new[inv[q]] = p
                transitions.append((SwapEdge(p, q), new, base.copy(), pend_k))

            for action, lay, resolved, pend in transitions:
                executed, blocked = advance_arrays(d, resolved, np.array(pend, dtype=np.int64), lay, c)
                new_key = (tuple(lay.tolist()), tuple(sorted(blocked.tolist())))
                if new_key in visited:
                    continue
                visited[new_key] = SearchRecord(wave, key, action, tuple(executed.tolist()),
                                                resolved.tobytes())
                if not new_key[1]:
                    return visited, new_key
                nxt.append(new_key)
                if max_states is not None and len(visited) > max_states:
                    raise RoutingError(f"exact search exceeded {max_states} states")
        active = nxt
    raise RoutingError("state space exhausted without emptying the frontier")


def reconstruct(d: DependencyGraph, records: dict[Key, SearchRecord], terminal: Key) -> RoutedCircuit:
    if terminal[1]:
        raise ValueError("terminal state still has blocking gates")
    chain = []
    key: Optional[Key] = terminal
    while key is not None:
        chain.append((key, records[key]))
        key = records[key].parent
    chain.reverse()

    gates = d.circuit.gates
    seed_fwd = chain[0][0][0]
    layout = Layout(seed_fwd)
    ops = []
    for key, rec in chain:
        if isinstance(rec.action, SwapEdge):
            ops.append(Swap(rec.action.p, rec.action.q))
            layout = layout.swap(rec.action.p, rec.action.q)
        elif isinstance(rec.action, BridgeGate):
            a = rec.action
            ops.append(Bridge(a.gate_id, a.c, a.m, a.t))
        assert layout.forward == key[0]
        for g in rec.executed:
            ops.append(Original(gates[g], relabel(gates[g].kind, layout.forward)))
    return RoutedCircuit.build(Layout(seed_fwd), ops)


def _solve_partition(args) -> tuple[int, RoutedCircuit]:
    d, c, seeds, allow_bridge, max_states = args
    records, terminal = _search(d, c, seeds, allow_bridge, max_states)
    return records[terminal].cost, reconstruct(d, records, terminal)


def solve_exact(d: DependencyGraph, c: CouplingGraph, allow_bridge: bool = True,
                initial_layouts: Union[str, Layout, Iterable] = "all", max_qubits_guard: int = DEFAULT_GUARD,
                max_states: Optional[int] = None, partitions: int = 1, workers: int = 1) -> MappingResult:
    """Minimum SWAP + Bridge mapping of ``d`` onto ``c``.

    ``initial_layouts`` is ``"all"`` (every permutation, guarded by
    ``max_qubits_guard``), ``"trivial"``, a :class:`Layout` or an iterable of
    layouts. With ``partitions > 1`` the seeds are split into independent
    searches (run in ``workers`` processes) and the cheapest result wins, ties
    going to the lowest partition.
    """
    _check_inputs(d, c)
    seeds = _seed_layouts(c.n, initial_layouts, max_qubits_guard)
    if partitions <= 1 or len(seeds) == 1:
        cost, routed = _solve_partition((d, c, seeds, allow_bridge, max_states))
    else:
        chunks = [seeds[i::partitions] for i in range(partitions)]
        jobs = [(d, c, ch, allow_bridge, max_states) for ch in chunks if ch]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_solve_partition, jobs))
        else:
            results = [_solve_partition(job) for job in jobs]
        cost, routed = min(results, key=lambda r: r[0])
    st = stats(routed)
    assert st.num_swaps + st.num_bridges == cost
    return MappingResult(routed, st, cost)
