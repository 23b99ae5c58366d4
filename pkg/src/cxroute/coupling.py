"""Undirected coupling graphs with precomputed hop distances."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from . import kernels


class CouplingError(ValueError):
    pass


class DisconnectedError(CouplingError):
    pass


@dataclass(frozen=True, eq=False)
class CouplingGraph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]
    dist: np.ndarray

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Sorted edge list with ``p < q``."""
        return [(p, q) for p in range(self.n) for q in self.adjacency[p] if p < q]

    @cached_property
    def edge_array(self) -> np.ndarray:
        return np.array(self.edges, dtype=np.int64).reshape(-1, 2)

    @cached_property
    def adj_matrix(self) -> np.ndarray:
        return self.dist == 1

    @property
    def connected(self) -> bool:
        return bool((self.dist >= 0).all())

    def require_connected(self) -> None:
        if not self.connected:
            p, q = map(int, np.argwhere(self.dist < 0)[0])
            raise DisconnectedError(f"coupling graph is disconnected (no path {p} -> {q})")

    @property
    def diameter(self) -> int:
        return int(self.dist.max())

    def distance(self, p: int, q: int) -> int:
        return int(self.dist[p, q])

    def neighbors(self, p: int) -> tuple[int, ...]:
        return self.adjacency[p]

    def is_edge(self, p: int, q: int) -> bool:
        return p != q and bool(self.dist[p, q] == 1)


def from_edges(n: int, edges: Iterable[tuple[int, int]], require_connected: bool = True) -> CouplingGraph:
    """Build the graph and its BFS distance matrix (``-1`` marks unreachable pairs)."""
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise CouplingError(f"edge ({u}, {v}) outside 0..{n - 1}")
        if u == v:
            raise CouplingError(f"self-loop on qubit {u}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    adjacency = tuple(tuple(sorted(s)) for s in nbrs)
    ptr = np.zeros(n + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(a) for a in adjacency])
    idx = np.array([v for a in adjacency for v in a], dtype=np.int64)
    dist = kernels.bfs_distances(n, ptr, idx)
    if require_connected and (dist < 0).any():
        p, q = map(int, np.argwhere(dist < 0)[0])
        raise DisconnectedError(f"coupling graph is disconnected (no path {p} -> {q})")
    dist.setflags(write=False)
    return CouplingGraph(n, adjacency, dist)


def lnn(n: int) -> CouplingGraph:
    if n < 2:
        raise CouplingError(f"lnn needs at least 2 qubits, got {n}")
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def grid(rows: int, cols: int) -> CouplingGraph:
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise CouplingError(f"degenerate grid {rows}x{cols}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((i, i + 1))
            if r + 1 < rows:
                edges.append((i, i + cols))
    return from_edges(rows * cols, edges)


def t4() -> CouplingGraph:
    """Four qubits, qubit 1 in the middle of a T: 0-1, 1-2, 1-3."""
    return from_edges(4, [(0, 1), (1, 2), (1, 3)])


def middles(g: CouplingGraph, p: int, q: int) -> list[int]:
    return sorted(set(g.adjacency[p]) & set(g.adjacency[q]))


def resolve(name: str) -> CouplingGraph:
    """Look up ``lnn:<n>``, ``grid:<r>x<c>``, ``t4`` or load an edge-list file."""
    from .qasm import parse_coupling

    if name == "t4":
        return t4()
    if name.startswith("lnn:"):
        return lnn(int(name[4:]))
    if name.startswith("grid:"):
        rows, _, cols = name[5:].partition("x")
        return grid(int(rows), int(cols))
    path = Path(name)
    if not path.exists():
        raise CouplingError(f"unknown coupling {name!r} (not a built-in name or a file)")
    graph, _ = parse_coupling(path.read_text(encoding="utf-8"))
    return graph
