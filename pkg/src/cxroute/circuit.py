"""Circuit data model: gates, layouts, routed circuits and the SWAP/Bridge identities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union


class CircuitError(ValueError):
    """Invalid gate, circuit or layout construction."""


@dataclass(frozen=True)
class Rz:
    qubit: int
    angle: float

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class Rx:
    qubit: int
    angle: float

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class H:
    qubit: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class CX:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise CircuitError(f"CX control and target coincide ({self.control})")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)


GateKind = Union[Rz, Rx, H, CX]


def _check_kind(kind: GateKind) -> None:
    if isinstance(kind, (Rz, Rx)) and not math.isfinite(kind.angle):
        raise CircuitError(f"non-finite rotation angle {kind.angle!r}")
    if not isinstance(kind, (Rz, Rx, H, CX)):
        raise CircuitError(f"unsupported gate kind {kind!r}")


def relabel(kind: GateKind, mapping: Sequence[int]) -> GateKind:
    """Return ``kind`` with every qubit index ``i`` replaced by ``mapping[i]``."""
    if isinstance(kind, CX):
        return CX(mapping[kind.control], mapping[kind.target])
    if isinstance(kind, H):
        return H(mapping[kind.qubit])
    return type(kind)(mapping[kind.qubit], kind.angle)


@dataclass(frozen=True)
class Gate:
    id: int
    kind: GateKind

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.kind.qubits

    @property
    def is_cx(self) -> bool:
        return isinstance(self.kind, CX)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for pos, g in enumerate(self.gates):
            if g.id != pos:
                raise CircuitError(f"gate ids must be 0..n-1 in order; position {pos} has id {g.id}")
            _check_kind(g.kind)
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise CircuitError(f"gate {g.id} uses qubit {q} outside 0..{self.num_qubits - 1}")

    @classmethod
    def from_kinds(cls, num_qubits: int, kinds: Iterable[GateKind]) -> "Circuit":
        return cls(num_qubits, tuple(Gate(i, k) for i, k in enumerate(kinds)))

    def kinds(self) -> list[GateKind]:
        return [g.kind for g in self.gates]

    def padded(self, num_qubits: int) -> "Circuit":
        """Same gates over ``num_qubits`` wires; extra wires are idle ancillas."""
        if num_qubits < self.num_qubits:
            raise CircuitError(f"cannot shrink a {self.num_qubits}-qubit circuit to {num_qubits}")
        return Circuit(num_qubits, self.gates)

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class Layout:
    """Bijection from logical qubits to physical qubits.

    ``forward[b]`` is the physical home of logical qubit ``b`` and
    ``inverse[q]`` the logical qubit sitting on physical qubit ``q``.
    """

    forward: tuple[int, ...]
    inverse: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        fwd = tuple(int(x) for x in self.forward)
        if sorted(fwd) != list(range(len(fwd))):
            raise CircuitError(f"layout {fwd} is not a permutation")
        inv = [0] * len(fwd)
        for b, q in enumerate(fwd):
            inv[q] = b
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(self, "inverse", tuple(inv))

    @classmethod
    def trivial(cls, n: int) -> "Layout":
        return cls(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.forward)

    def __getitem__(self, b: int) -> int:
        return self.forward[b]

    def swap(self, p: int, q: int) -> "Layout":
        return layout_swap(self, p, q)


def layout_swap(layout: Layout, p: int, q: int) -> Layout:
    """Exchange the logical qubits currently on physical qubits ``p`` and ``q``."""
    n = len(layout)
    if not (0 <= p < n and 0 <= q < n):
        raise CircuitError(f"physical qubit out of range in swap ({p}, {q}) for {n} qubits")
    if p == q:
        raise CircuitError(f"swap needs two distinct qubits, got ({p}, {q})")
    fwd = list(layout.forward)
    bp, bq = layout.inverse[p], layout.inverse[q]
    fwd[bp], fwd[bq] = q, p
    return Layout(tuple(fwd))


@dataclass(frozen=True)
class Original:
    """A source gate executed on physical qubits (already resolved under the layout)."""

    gate: Gate
    physical: GateKind


@dataclass(frozen=True)
class Swap:
    p: int
    q: int

    def __post_init__(self):
        if self.p == self.q:
            raise CircuitError(f"Swap on a single qubit {self.p}")


@dataclass(frozen=True)
class Bridge:
    gate_id: int
    c: int
    m: int
    t: int

    def __post_init__(self):
        if len({self.c, self.m, self.t}) != 3:
            raise CircuitError(f"Bridge qubits must be distinct, got {(self.c, self.m, self.t)}")


RoutedOp = Union[Original, Swap, Bridge]


@dataclass(frozen=True)
class MappingStats:
    num_swaps: int
    num_bridges: int
    added_cnots: int

    def line(self) -> str:
        return f"swaps={self.num_swaps} bridges={self.num_bridges} added_cnots={self.added_cnots}"


@dataclass(frozen=True)
class RoutedCircuit:
    num_physical: int
    initial_layout: Layout
    ops: tuple[RoutedOp, ...]
    final_layout: Layout

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    @classmethod
    def build(cls, initial_layout: Layout, ops: Iterable[RoutedOp]) -> "RoutedCircuit":
        """Construct with the final layout derived from the Swap records."""
        ops = tuple(ops)
        layout = initial_layout
        for op in ops:
            if isinstance(op, Swap):
                layout = layout_swap(layout, op.p, op.q)
        return cls(len(initial_layout), initial_layout, ops, layout)

    def expanded(self) -> list[GateKind]:
        """Physical gate list with Swap/Bridge records replaced by their CX sequences."""
        out: list[GateKind] = []
        for op in self.ops:
            if isinstance(op, Original):
                out.append(op.physical)
            elif isinstance(op, Swap):
                out.extend(expand_swap(op.p, op.q))
            else:
                out.extend(expand_bridge(op.c, op.m, op.t))
        return out


@dataclass(frozen=True)
class MappingResult:
    routed: RoutedCircuit
    stats: MappingStats
    cost: int


def expand_swap(p: int, q: int) -> list[CX]:
    if p == q:
        raise CircuitError(f"expand_swap needs distinct qubits, got ({p}, {q})")
    return [CX(p, q), CX(q, p), CX(p, q)]


def expand_bridge(c: int, m: int, t: int) -> list[CX]:
    """Four CXs on a control-middle-target chain implementing CX(c, t)."""
    if len({c, m, t}) != 3:
        raise CircuitError(f"expand_bridge needs distinct qubits, got {(c, m, t)}")
    return [CX(m, t), CX(c, m), CX(m, t), CX(c, m)]


def stats(routed: RoutedCircuit) -> MappingStats:
    swaps = sum(isinstance(op, Swap) for op in routed.ops)
    bridges = sum(isinstance(op, Bridge) for op in routed.ops)
    return MappingStats(swaps, bridges, 3 * (swaps + bridges))


class RoutingError(RuntimeError):
    """A router could not produce a mapping (guard, limit or internal failure)."""
