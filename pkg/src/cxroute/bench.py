"""Random circuits and formulation-comparison tables."""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .circuit import CX, Circuit, H, Layout, MappingResult, Rz
from .coupling import CouplingGraph
from .depgraph import Rules, build
from .exact import solve_exact
from .heuristic import HeuristicParams, route_heuristic
from .verify import MAX_SIM_QUBITS, check_compliance, check_equivalence

# formulation name -> (dependency rules, bridges allowed)
FORMULATIONS: dict[str, tuple[Rules, bool]] = {
    "proposed": (Rules.FULL, True),
    "no-bridge": (Rules.FULL, False),
    "std-dag": (Rules.STANDARD_DAG, True),
    "fixed-layer": (Rules.FIXED_LAYER, True),
}

CSV_COLUMNS = ["name", "qubits", "gates", "formulation", "algo", "swaps", "bridges", "added_cnots",
               "time_s", "verified"]


def gen_random(num_qubits: int, num_gates: int, seed: int) -> Circuit:
    """Rz / H / CX with probabilities 1/4, 1/4, 1/2 on uniformly drawn qubits."""
    if num_qubits < 2:
        raise ValueError(f"need at least 2 qubits, got {num_qubits}")
    rng = np.random.default_rng(seed)
    kinds = []
    for _ in range(num_gates):
        r = rng.random()
        if r < 0.25:
            kinds.append(Rz(int(rng.integers(num_qubits)), float(rng.uniform(0.0, 2 * math.pi))))
        elif r < 0.5:
            kinds.append(H(int(rng.integers(num_qubits))))
        else:
            a, b = rng.choice(num_qubits, size=2, replace=False)
            kinds.append(CX(int(a), int(b)))
    return Circuit.from_kinds(num_qubits, kinds)


def route(circuit: Circuit, coupling: CouplingGraph, formulation: str, algo: str,
          initial_layout="all", params: HeuristicParams = HeuristicParams(), guard: int = 8,
          postprocess: bool = True, max_states: Optional[int] = None,
          no_bridge: bool = False) -> MappingResult:
    """Route with a named formulation; ``no_bridge`` additionally forbids Bridge gates."""
    rules, bridges = FORMULATIONS[formulation]
    bridges = bridges and not no_bridge
    d = build(circuit, rules)
    if algo == "exact":
        return solve_exact(d, coupling, allow_bridge=bridges, initial_layouts=initial_layout,
                           max_qubits_guard=guard, max_states=max_states)
    if algo == "heuristic":
        l0 = None if isinstance(initial_layout, str) else initial_layout
        if isinstance(initial_layout, str) and initial_layout not in ("trivial",):
            raise ValueError(f"the heuristic needs one initial layout, got {initial_layout!r}")
        return route_heuristic(d, coupling, l0, params, allow_bridge=bridges, postprocess=postprocess)
    raise ValueError(f"unknown algorithm {algo!r}")


@dataclass
class BenchCell:
    formulation: str
    swaps: int = 0
    bridges: int = 0
    time_s: float = 0.0
    verified: bool = False
    error: str = ""

    @property
    def added_cnots(self) -> int:
        return 3 * (self.swaps + self.bridges)


@dataclass
class BenchRow:
    name: str
    qubits: int
    gates: int
    algo: str
    cells: list[BenchCell] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(not c.verified for c in self.cells)


def run_cell(name: str, circuit: Circuit, coupling: CouplingGraph, formulation: str, algo: str,
             sabotage: bool = False, **kw) -> BenchCell:
    cell = BenchCell(formulation)
    try:
        t0 = time.perf_counter()
        res = route(circuit, coupling, formulation, algo, **kw)
        cell.time_s = time.perf_counter() - t0
    except Exception as exc:  # reported per cell, the row is marked FAILED
        cell.error = f"{type(exc).__name__}: {exc}"
        return cell
    cell.swaps, cell.bridges = res.stats.num_swaps, res.stats.num_bridges
    routed = res.routed
    if sabotage and routed.ops:
        routed = type(routed)(routed.num_physical, routed.initial_layout, routed.ops[:-1], routed.final_layout)
    ok = check_compliance(routed, coupling).passed
    if ok and coupling.n <= MAX_SIM_QUBITS:
        ok = check_equivalence(circuit, routed).passed and not routed_dropped(circuit, routed)
    cell.verified = ok
    if not ok:
        cell.error = "verification failed"
    return cell


def routed_dropped(circuit: Circuit, routed) -> bool:
    """True when some source gate is missing from the routed ops."""
    from .circuit import Bridge, Original

    ids = [op.gate.id for op in routed.ops if isinstance(op, Original)]
    ids += [op.gate_id for op in routed.ops if isinstance(op, Bridge)]
    return sorted(ids) != list(range(len(circuit)))


def run_bench(circuits: Sequence[tuple[str, Circuit]], coupling: CouplingGraph, formulations: Sequence[str],
              algo: str, sabotage: bool = False, progress: Optional[Callable[[str], None]] = None,
              **kw) -> list[BenchRow]:
    rows = []
    for name, circ in circuits:
        row = BenchRow(name, circ.num_qubits, len(circ), algo)
        for form in formulations:
            row.cells.append(run_cell(name, circ, coupling, form, algo, sabotage=sabotage, **kw))
        if progress:
            progress(name)
        rows.append(row)
    return rows


def to_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        for c in row.cells:
            if c.verified:
                w.writerow([row.name, row.qubits, row.gates, c.formulation, row.algo, c.swaps, c.bridges,
                            c.added_cnots, f"{c.time_s:.4f}", "yes"])
            else:
                w.writerow([row.name, row.qubits, row.gates, c.formulation, row.algo, "FAILED", "FAILED",
                            "FAILED", "", "no"])
    return buf.getvalue()


def to_markdown(rows: Sequence[BenchRow], formulations: Sequence[str]) -> str:
    """Per-row table plus an averages line; cells read ``swaps+bridges (bridges)``."""
    head = "| circuit | qubits | gates | " + " | ".join(formulations) + " |"
    sep = "|---|---:|---:|" + "---:|" * len(formulations)
    lines = ["<!-- time_s measures routing only (parse and verification excluded) -->", head, sep]
    for row in rows:
        cells = []
        for c in row.cells:
            cells.append(f"{c.swaps + c.bridges} ({c.bridges})" if c.verified else "FAILED")
        lines.append(f"| {row.name} | {row.qubits} | {row.gates} | " + " | ".join(cells) + " |")
    good = [r for r in rows if not r.failed]
    if good:
        avg = []
        for k in range(len(formulations)):
            tot = np.mean([r.cells[k].swaps + r.cells[k].bridges for r in good])
            br = np.mean([r.cells[k].bridges for r in good])
            avg.append(f"{tot:.1f} ({br:.1f})")
        lines.append(f"| average ({len(good)} rows) | | | " + " | ".join(avg) + " |")
    return "\n".join(lines) + "\n"
