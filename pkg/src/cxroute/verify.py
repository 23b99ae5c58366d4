"""Statevector simulation, coupling compliance and equivalence checks for routed circuits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import kernels
from .circuit import CX, Bridge, Circuit, GateKind, H, Layout, Original, RoutedCircuit, Rx, Rz, Swap
from .circuit import expand_bridge, expand_swap
from .coupling import CouplingGraph

MAX_SIM_QUBITS = 20
DEFAULT_TOL = 1e-9
DEFAULT_TRIALS = 8
RNG_NAME = "numpy.random.PCG64"

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)


class SimulationError(ValueError):
    pass


def gate_matrix(kind: GateKind) -> np.ndarray:
    if isinstance(kind, H):
        return _H
    half = kind.angle / 2
    if isinstance(kind, Rz):
        return np.array([[np.exp(-1j * half), 0], [0, np.exp(1j * half)]], dtype=np.complex128)
    if isinstance(kind, Rx):
        c, s = math.cos(half), math.sin(half)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    raise TypeError(f"no single-qubit matrix for {kind!r}")


def simulate(gates: Union[Circuit, Sequence[GateKind]], state: np.ndarray, num_qubits: int | None = None,
             check_norm: bool = False) -> np.ndarray:
    """Apply ``gates`` to ``state`` (shape ``(2**n,)`` or ``(2**n, batch)``); returns a new array."""
    if isinstance(gates, Circuit):
        num_qubits = gates.num_qubits if num_qubits is None else num_qubits
        gates = gates.kinds()
    state = np.asarray(state, dtype=np.complex128)
    squeeze = state.ndim == 1
    work = np.ascontiguousarray(state.reshape(state.shape[0], -1)).copy()
    if num_qubits is None:
        num_qubits = int(work.shape[0]).bit_length() - 1
    if work.shape[0] != 1 << num_qubits:
        raise SimulationError(f"state of dimension {work.shape[0]} for {num_qubits} qubits")
    if num_qubits > MAX_SIM_QUBITS:
        raise SimulationError(f"{num_qubits} qubits exceed the simulation cap of {MAX_SIM_QUBITS}")
    norms = np.linalg.norm(work, axis=0) if check_norm else None
    for kind in gates:
        if isinstance(kind, CX):
            kernels.apply_cx(work, kind.control, kind.target)
        else:
            kernels.apply_1q(work, kind.qubit, gate_matrix(kind))
        if check_norm and not np.allclose(np.linalg.norm(work, axis=0), norms, atol=1e-9, rtol=0):
            raise SimulationError(f"norm drift after {kind!r}")
    return work[:, 0] if squeeze else work


def unitary(gates: Sequence[GateKind], num_qubits: int) -> np.ndarray:
    """Full matrix of ``gates``; column ``j`` is the image of basis state ``j``."""
    return simulate(gates, np.eye(1 << num_qubits, dtype=np.complex128), num_qubits)


def permute_wires(state: np.ndarray, layout: Layout) -> np.ndarray:
    """Move logical wire ``b`` to physical wire ``layout[b]`` (basis-index bit permutation)."""
    n = len(layout)
    idx = np.arange(1 << n)
    target = np.zeros_like(idx)
    for b, q in enumerate(layout.forward):
        target |= ((idx >> b) & 1) << q
    out = np.empty_like(state)
    out[target] = state
    return out


def unpermute_wires(state: np.ndarray, layout: Layout) -> np.ndarray:
    n = len(layout)
    idx = np.arange(1 << n)
    source = np.zeros_like(idx)
    for b, q in enumerate(layout.forward):
        source |= ((idx >> b) & 1) << q
    return state[source]


@dataclass
class ComplianceReport:
    passed: bool
    violations: list[tuple[int, str]] = field(default_factory=list)


def check_compliance(r: RoutedCircuit, c: CouplingGraph) -> ComplianceReport:
    """Every expanded CX must sit on a coupling edge; violations carry the op index."""
    violations = []
    for i, op in enumerate(r.ops):
        if isinstance(op, Original):
            kinds = [op.physical]
        elif isinstance(op, Swap):
            kinds = expand_swap(op.p, op.q)
        elif isinstance(op, Bridge):
            kinds = expand_bridge(op.c, op.m, op.t)
        else:
            violations.append((i, f"unknown op {op!r}"))
            continue
        for k in kinds:
            if any(not 0 <= q < c.n for q in k.qubits):
                violations.append((i, f"{k!r} outside the {c.n}-qubit device"))
            elif isinstance(k, CX) and not c.is_edge(k.control, k.target):
                violations.append((i, f"{k!r} not on a coupling edge"))
    return ComplianceReport(not violations, violations)


@dataclass
class EquivalenceReport:
    passed: bool
    min_fidelity: float
    fidelities: list[float]
    seed: int
    rng: str = RNG_NAME
    trials: int = DEFAULT_TRIALS


def random_states(num_qubits: int, trials: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    dim = 1 << num_qubits
    psi = rng.normal(size=(dim, trials)) + 1j * rng.normal(size=(dim, trials))
    return psi / np.linalg.norm(psi, axis=0)


def check_equivalence(logical: Circuit, r: RoutedCircuit, trials: int = DEFAULT_TRIALS,
                      tol: float = DEFAULT_TOL, seed: int = 0) -> EquivalenceReport:
    n = r.num_physical
    if logical.num_qubits > n:
        raise SimulationError(f"logical circuit has {logical.num_qubits} qubits, routed has {n}")
    if logical.num_qubits < n:
        logical = logical.padded(n)
    psi = random_states(n, trials, seed)
    want = simulate(logical, psi)
    start = np.stack([permute_wires(psi[:, k], r.initial_layout) for k in range(trials)], axis=1)
    out = simulate(r.expanded(), start, n)
    got = np.stack([unpermute_wires(out[:, k], r.final_layout) for k in range(trials)], axis=1)
    fids = [float(abs(np.vdot(want[:, k], got[:, k]))) for k in range(trials)]
    worst = min(fids) if fids else 1.0
    return EquivalenceReport(worst >= 1 - tol, worst, fids, seed, trials=trials)


def check_equivalence_full(logical: Circuit, r: RoutedCircuit, tol: float = DEFAULT_TOL) -> bool:
    """Compare the two maps on every basis state, up to one global phase."""
    n = r.num_physical
    logical = logical.padded(n) if logical.num_qubits < n else logical
    basis = np.eye(1 << n, dtype=np.complex128)
    want = simulate(logical, basis)
    start = np.stack([permute_wires(basis[:, k], r.initial_layout) for k in range(1 << n)], axis=1)
    out = simulate(r.expanded(), start, n)
    got = np.stack([unpermute_wires(out[:, k], r.final_layout) for k in range(1 << n)], axis=1)
    overlap = np.trace(want.conj().T @ got) / (1 << n)
    return bool(abs(overlap) >= 1 - tol)
