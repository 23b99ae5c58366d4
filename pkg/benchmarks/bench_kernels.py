"""Compare the numba kernels against their NumPy forms.

Two views:

* per kernel, in-process: the loop forms compiled with ``numba.njit`` versus
  the ``np_*`` functions, on the same inputs;
* end to end: ``solve_exact`` and ``route_heuristic`` on a fixed batch of random
  circuits, run in a subprocess with and without ``CXROUTE_DISABLE_JIT=1``.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--skip-e2e]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numba
import numpy as np

from cxroute import grid, kernels, lnn
from cxroute.bench import gen_random
from cxroute.depgraph import build, initial_frontier

E2E_SNIPPET = r"""
import json, time
from cxroute import kernels, lnn
from cxroute.bench import gen_random, route
c = lnn(5)
circs = [gen_random(5, 60, s) for s in range(6)]
route(circs[0], c, "proposed", "heuristic", initial_layout="trivial")  # warm-up / compile
out = {"backend": kernels.BACKEND}
for algo, lay in (("exact", "all"), ("heuristic", "trivial")):
    t0 = time.perf_counter()
    costs = [route(x, c, "proposed", algo, initial_layout=lay).cost for x in circs]
    out[algo] = [time.perf_counter() - t0, costs]
print(json.dumps(out))
"""


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases():
    d = build(gen_random(8, 400, 1))
    arr = d.arrays
    c = grid(2, 4)
    f0 = initial_frontier(d)
    pending = np.array(f0.blocking, dtype=np.int64)
    fwd = np.arange(8, dtype=np.int64)

    def advance(fn):
        def run():
            for _ in range(200):
                fn(f0.resolved.copy(), pending, fwd, arr["q0"], arr["q1"], c.adj_matrix, arr["succ_ptr"],
                   arr["succ_idx"], arr["pred_ptr"], arr["pred_idx"], arr["order"], arr["rank"])
        return run

    big = lnn(64)
    ptr = np.zeros(65, dtype=np.int64)
    ptr[1:] = np.cumsum([len(a) for a in big.adjacency])
    idx = np.array([v for a in big.adjacency for v in a], dtype=np.int64)

    def bfs(fn):
        return lambda: [fn(64, ptr, idx) for _ in range(20)]

    rng = np.random.default_rng(0)
    edges = big.edge_array
    ua = rng.integers(0, 64, 40)
    ub = (ua + rng.integers(1, 63, 40)) % 64
    w = rng.random(40)
    fwd64 = rng.permutation(64).astype(np.int64)

    def scores(fn):
        return lambda: [fn(edges, fwd64, ua, ub, w, big.dist) for _ in range(500)]

    state = (rng.normal(size=(1 << 14, 4)) + 0j)
    h = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)

    def one_q(fn):
        return lambda: [fn(state, k % 14, h) for k in range(50)]

    def cx(fn):
        return lambda: [fn(state, k % 14, (k + 3) % 14) for k in range(50)]

    return [
        ("advance_sweep (400 gates x200)", advance, kernels._advance_loop, kernels.np_advance_sweep),
        ("bfs_distances (lnn:64 x20)", bfs, kernels._bfs_loop, kernels.np_bfs_distances),
        ("edge_scores (63 edges x500)", scores, kernels._scores_loop, kernels.np_edge_scores),
        ("apply_1q (14 qubits x50)", one_q, kernels._apply_1q_loop, kernels.np_apply_1q),
        ("apply_cx (14 qubits x50)", cx, kernels._apply_cx_loop, kernels.np_apply_cx),
    ]


def run_kernels(repeat):
    print(f"{'kernel':34s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for name, wrap, loop, np_fn in kernel_cases():
        jit = numba.njit(loop)
        wrap(jit)()  # compile
        t_jit = best_of(wrap(jit), repeat)
        t_np = best_of(wrap(np_fn), repeat)
        print(f"{name:34s} {t_jit:10.4f} {t_np:10.4f} {t_np / t_jit:8.1f}x")


def run_e2e():
    results = {}
    for disable in ("0", "1"):
        env = dict(os.environ, CXROUTE_DISABLE_JIT=disable)
        proc = subprocess.run([sys.executable, "-c", E2E_SNIPPET], env=env, capture_output=True, text=True,
                              check=True)
        res = json.loads(proc.stdout.strip().splitlines()[-1])
        results[res["backend"]] = res
    print(f"\n{'end to end (6 circuits, 5q/60g)':34s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for algo in ("exact", "heuristic"):
        a, b = results["numba"][algo], results["numpy"][algo]
        same = "same costs" if a[1] == b[1] else "COSTS DIFFER"
        print(f"{algo:34s} {a[0]:10.4f} {b[0]:10.4f} {b[0] / a[0]:8.1f}x  {same}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args()
    run_kernels(args.repeat)
    if not args.skip_e2e:
        run_e2e()


if __name__ == "__main__":
    main()
