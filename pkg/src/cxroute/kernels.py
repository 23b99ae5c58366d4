"""Numeric inner loops shared by the routers and the simulator.

Every kernel exists in two forms:

* a loop form written for ``numba.njit`` (``_*_loop``), and
* a NumPy form (``np_*``) used when numba is unavailable or disabled.

Set ``CXROUTE_DISABLE_JIT=1`` before import to force the NumPy forms. The
public names (``advance_sweep``, ``edge_scores``, ...) are bound once at import
time; ``BACKEND`` reports which binding is active.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

JIT_DISABLED = os.environ.get("CXROUTE_DISABLE_JIT", "").strip().lower() in {"1", "true", "yes", "on"}
USE_JIT = _HAVE_NUMBA and not JIT_DISABLED
BACKEND = "numba" if USE_JIT else "numpy"


# --------------------------------------------------------------------------
# frontier advance
# --------------------------------------------------------------------------

def _advance_loop(resolved, pending_ids, fwd, q0, q1, adj, succ_ptr, succ_idx, pred_ptr, pred_idx,
                  order, rank):
    # Every edge goes from lower to higher topological rank, so a gate
    # unlocked by executing ``order[i]`` sits at a position > i and a single
    # forward sweep executes gates lowest-rank first.
    n = resolved.shape[0]
    pending = np.zeros(n, dtype=np.uint8)
    executed = np.empty(n, dtype=np.int64)
    blocked = np.empty(n, dtype=np.int64)
    n_exec = 0
    n_block = 0
    n_pending = 0
    start = n
    for j in range(pending_ids.shape[0]):
        g = pending_ids[j]
        if pending[g] == 0:
            pending[g] = 1
            n_pending += 1
            if rank[g] < start:
                start = rank[g]
    i = start
    while n_pending > 0:
        g = order[i]
        if pending[g] == 1:
            pending[g] = 0
            n_pending -= 1
            b = q1[g]
            if b < 0 or adj[fwd[q0[g]], fwd[b]]:
                resolved[g] = 1
                executed[n_exec] = g
                n_exec += 1
                for k in range(succ_ptr[g], succ_ptr[g + 1]):
                    s = succ_idx[k]
                    ready = True
                    for m in range(pred_ptr[s], pred_ptr[s + 1]):
                        if resolved[pred_idx[m]] == 0:
                            ready = False
                            break
                    if ready and pending[s] == 0:
                        pending[s] = 1
                        n_pending += 1
            else:
                blocked[n_block] = g
                n_block += 1
        i += 1
    return executed[:n_exec].copy(), blocked[:n_block].copy()


# The sweep has no vectorised equivalent; the fallback runs the same loop in
# the interpreter.
np_advance_sweep = _advance_loop


# --------------------------------------------------------------------------
# all-pairs hop distances
# --------------------------------------------------------------------------

def _bfs_loop(n, adj_ptr, adj_idx):
    dist = np.full((n, n), -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for src in range(n):
        dist[src, src] = 0
        queue[0] = src
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(adj_ptr[u], adj_ptr[u + 1]):
                v = adj_idx[k]
                if dist[src, v] < 0:
                    dist[src, v] = dist[src, u] + 1
                    queue[tail] = v
                    tail += 1
    return dist


def np_bfs_distances(n, adj_ptr, adj_idx):
    """Level-synchronous BFS from all sources at once via boolean matrix products."""
    adj = np.zeros((n, n), dtype=bool)
    rows = np.repeat(np.arange(n), np.diff(adj_ptr))
    adj[rows, adj_idx] = True
    dist = np.full((n, n), -1, dtype=np.int64)
    visited = np.eye(n, dtype=bool)
    level = visited.copy()
    d = 0
    while level.any():
        dist[level] = d
        level = (level.astype(np.int64) @ adj.astype(np.int64) > 0) & ~visited
        visited |= level
        d += 1
    return dist


# --------------------------------------------------------------------------
# look-ahead swap scores
# --------------------------------------------------------------------------

def _scores_loop(edges, fwd, ua, ub, weights, dist):
    n_edges = edges.shape[0]
    out = np.empty(n_edges, dtype=np.float64)
    base = 0.0
    for g in range(ua.shape[0]):
        base += weights[g] * dist[fwd[ua[g]], fwd[ub[g]]]
    for e in range(n_edges):
        p = edges[e, 0]
        q = edges[e, 1]
        after = 0.0
        for g in range(ua.shape[0]):
            x = fwd[ua[g]]
            y = fwd[ub[g]]
            if x == p:
                x = q
            elif x == q:
                x = p
            if y == p:
                y = q
            elif y == q:
                y = p
            after += weights[g] * dist[x, y]
        out[e] = base - after
    return out


def np_edge_scores(edges, fwd, ua, ub, weights, dist):
    if ua.shape[0] == 0:
        return np.zeros(edges.shape[0], dtype=np.float64)
    x = fwd[ua][None, :]
    y = fwd[ub][None, :]
    p = edges[:, 0:1]
    q = edges[:, 1:2]
    x2 = np.where(x == p, q, np.where(x == q, p, x))
    y2 = np.where(y == p, q, np.where(y == q, p, y))
    base = float(weights @ dist[fwd[ua], fwd[ub]])
    return base - dist[x2, y2] @ weights


# --------------------------------------------------------------------------
# statevector updates; states are (2**n, batch) arrays, qubit 0 = LSB
# --------------------------------------------------------------------------

def _apply_1q_loop(state, qubit, mat):
    dim, batch = state.shape
    stride = 1 << qubit
    m00 = mat[0, 0]
    m01 = mat[0, 1]
    m10 = mat[1, 0]
    m11 = mat[1, 1]
    for i in range(dim):
        if i & stride:
            continue
        j = i | stride
        for k in range(batch):
            a = state[i, k]
            b = state[j, k]
            state[i, k] = m00 * a + m01 * b
            state[j, k] = m10 * a + m11 * b
    return state


def _apply_cx_loop(state, control, target):
    dim, batch = state.shape
    cbit = 1 << control
    tbit = 1 << target
    for i in range(dim):
        if (i & cbit) and not (i & tbit):
            j = i | tbit
            for k in range(batch):
                tmp = state[i, k]
                state[i, k] = state[j, k]
                state[j, k] = tmp
    return state


def np_apply_1q(state, qubit, mat):
    dim, batch = state.shape
    view = state.reshape(dim >> (qubit + 1), 2, 1 << qubit, batch)
    a = view[:, 0].copy()
    b = view[:, 1]
    view[:, 0] = mat[0, 0] * a + mat[0, 1] * b
    view[:, 1] = mat[1, 0] * a + mat[1, 1] * b
    return state


def np_apply_cx(state, control, target):
    idx = np.arange(state.shape[0])
    lo = idx[((idx >> control) & 1 == 1) & ((idx >> target) & 1 == 0)]
    hi = lo | (1 << target)
    state[lo], state[hi] = state[hi], state[lo].copy()
    return state


if USE_JIT:
    advance_sweep = numba.njit(cache=True)(_advance_loop)
    bfs_distances = numba.njit(cache=True)(_bfs_loop)
    edge_scores = numba.njit(cache=True)(_scores_loop)
    apply_1q = numba.njit(cache=True)(_apply_1q_loop)
    apply_cx = numba.njit(cache=True)(_apply_cx_loop)
else:
    advance_sweep = np_advance_sweep
    bfs_distances = np_bfs_distances
    edge_scores = np_edge_scores
    apply_1q = np_apply_1q
    apply_cx = np_apply_cx
