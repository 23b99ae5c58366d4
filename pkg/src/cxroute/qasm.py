"""A small OpenQASM 2.0 subset reader/writer and the coupling edge-list format."""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass
from typing import Optional

from .circuit import CX, Circuit, GateKind, H, Layout, Original, RoutedCircuit, Rx, Rz, Swap
from .circuit import CircuitError, expand_bridge, expand_swap
from .coupling import CouplingError, CouplingGraph, from_edges


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    severity: str  # "warning" | "error"
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.severity}: {self.message}"


class QasmError(ValueError):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics if d.severity == "error"))


@dataclass(frozen=True)
class Statement:
    line: int
    text: str


@dataclass
class SourceProgram:
    qregs: dict[str, int]
    cregs: dict[str, int]
    statements: list[Statement]
    layouts: dict[str, dict[int, int]]


_QREG = re.compile(r"^qreg\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")
_CREG = re.compile(r"^creg\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")
_GATE = re.compile(r"^([A-Za-z_]\w*)\s*(?:\((.*)\))?\s+(.+)$")
_ARG = re.compile(r"^([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")
_LAYOUT_SECTION = re.compile(r"^//\s*(initial|final)_layout\s*$")
_LAYOUT_LINE = re.compile(r"^//\s*layout\s+b(\d+)\s*->\s*q(\d+)\s*$")

_ALIASES = {"u1": "rz"}
_SUPPORTED = {"rz", "rx", "h", "cx", "u1", "x"}
_DROPPED = {"measure", "barrier"}


class _AngleError(ValueError):
    pass


def eval_angle(expr: str) -> float:
    """Evaluate a numeric angle expression over literals, ``pi`` and + - * /."""
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise _AngleError(f"bad angle expression {expr!r}") from exc

    def ev(node) -> float:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if b == 0:
                raise _AngleError(f"division by zero in {expr!r}")
            return a / b
        raise _AngleError(f"unsupported angle expression {expr!r}")

    value = ev(tree)
    if not math.isfinite(value):
        raise _AngleError(f"non-finite angle {expr!r}")
    return value


def _split(text: str) -> tuple[list[Statement], dict[str, dict[int, int]], list[ParseDiagnostic]]:
    statements = []
    layouts: dict[str, dict[int, int]] = {}
    diags = []
    section: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("//"):
            m = _LAYOUT_SECTION.match(stripped)
            if m:
                section = m.group(1)
                layouts[section] = {}
                continue
            m = _LAYOUT_LINE.match(stripped)
            if m and section is not None:
                layouts[section][int(m.group(1))] = int(m.group(2))
            continue
        code = raw.split("//", 1)[0]
        parts = code.split(";")
        for k, part in enumerate(parts):
            part = part.strip()
            if not part:
                continue
            if k == len(parts) - 1:
                diags.append(ParseDiagnostic(lineno, "error", f"missing ';' after {part!r}"))
                continue
            statements.append(Statement(lineno, part))
    return statements, layouts, diags


def read_program(text: str) -> tuple[SourceProgram, list[ParseDiagnostic]]:
    statements, layouts, diags = _split(text)
    prog = SourceProgram({}, {}, [], layouts)
    for st in statements:
        s = st.text
        if s.startswith("OPENQASM") or s.startswith("include"):
            continue
        m = _QREG.match(s)
        if m:
            if prog.qregs:
                diags.append(ParseDiagnostic(st.line, "error", "only one quantum register is supported"))
            prog.qregs[m.group(1)] = int(m.group(2))
            continue
        m = _CREG.match(s)
        if m:
            prog.cregs[m.group(1)] = int(m.group(2))
            continue
        prog.statements.append(st)
    return prog, diags


def _gate_from(st: Statement, qreg: str, size: int) -> GateKind:
    m = _GATE.match(st.text)
    if not m:
        raise CircuitError(f"syntax error in {st.text!r}")
    name, params, args = m.group(1), m.group(2), m.group(3)
    if name not in _SUPPORTED:
        raise CircuitError(f"unknown gate {name}")
    qubits = []
    for arg in args.split(","):
        am = _ARG.match(arg.strip())
        if not am:
            raise CircuitError(f"bad qubit argument {arg.strip()!r}")
        if am.group(1) != qreg:
            raise CircuitError(f"unknown register {am.group(1)!r}")
        q = int(am.group(2))
        if q >= size:
            raise CircuitError(f"qubit index {q} out of range for {qreg}[{size}]")
        qubits.append(q)
    name = _ALIASES.get(name, name)
    want_args = 2 if name == "cx" else 1
    if len(qubits) != want_args:
        raise CircuitError(f"{name} takes {want_args} qubit(s), got {len(qubits)}")
    takes_param = name in {"rz", "rx"}
    if takes_param != (params is not None):
        raise CircuitError(f"{name} {'needs' if takes_param else 'takes no'} parameter")
    if name == "cx":
        if qubits[0] == qubits[1]:
            raise CircuitError("cx with equal operands")
        return CX(qubits[0], qubits[1])
    if name == "h":
        return H(qubits[0])
    if name == "x":
        return Rx(qubits[0], math.pi)
    try:
        angle = eval_angle(params)
    except _AngleError as exc:
        raise CircuitError(str(exc)) from exc
    return (Rz if name == "rz" else Rx)(qubits[0], angle)


def parse(text: str) -> tuple[Circuit, list[ParseDiagnostic]]:
    """Parse QASM text; raises :class:`QasmError` carrying every diagnostic on failure."""
    prog, diags = read_program(text)
    kinds = []
    if not prog.qregs:
        diags.append(ParseDiagnostic(1, "error", "no qreg declaration"))
        raise QasmError(diags)
    qreg, size = next(iter(prog.qregs.items()))
    for st in prog.statements:
        word = st.text.split(None, 1)[0].split("(", 1)[0]
        if word in _DROPPED:
            diags.append(ParseDiagnostic(st.line, "warning", f"dropped {word} statement"))
            continue
        try:
            kinds.append(_gate_from(st, qreg, size))
        except CircuitError as exc:
            diags.append(ParseDiagnostic(st.line, "error", str(exc)))
    if any(d.severity == "error" for d in diags):
        raise QasmError(diags)
    return Circuit.from_kinds(size, kinds), diags


def _fmt_angle(x: float) -> str:
    return format(x, ".17g")


def _stmt(kind: GateKind, reg: str = "q") -> str:
    if isinstance(kind, CX):
        return f"cx {reg}[{kind.control}],{reg}[{kind.target}];"
    if isinstance(kind, H):
        return f"h {reg}[{kind.qubit}];"
    name = "rz" if isinstance(kind, Rz) else "rx"
    return f"{name}({_fmt_angle(kind.angle)}) {reg}[{kind.qubit}];"


_HEADER = ['OPENQASM 2.0;', 'include "qelib1.inc";']


def emit_circuit(c: Circuit) -> str:
    lines = _HEADER + [f"qreg q[{c.num_qubits}];"] + [_stmt(g.kind) for g in c.gates]
    return "\n".join(lines) + "\n"


def emit(r: RoutedCircuit, expand: bool = True) -> str:
    lines = list(_HEADER)
    for name, layout in (("initial", r.initial_layout), ("final", r.final_layout)):
        lines.append(f"// {name}_layout")
        lines.extend(f"// layout b{b} -> q{q}" for b, q in enumerate(layout.forward))
    lines.append(f"qreg q[{r.num_physical}];")
    for op in r.ops:
        if isinstance(op, Original):
            lines.append(_stmt(op.physical))
        elif isinstance(op, Swap):
            if expand:
                lines.extend(_stmt(k) for k in expand_swap(op.p, op.q))
            else:
                lines.append(f"swap q[{op.p}],q[{op.q}];")
        else:
            lines.append(f"// bridge gate {op.gate_id}: q[{op.c}],q[{op.m}],q[{op.t}]")
            if expand:
                lines.extend(_stmt(k) for k in expand_bridge(op.c, op.m, op.t))
            else:
                lines.append(_stmt(CX(op.c, op.t)))
    return "\n".join(lines) + "\n"


def _layout_from(entries: dict[int, int], n: int, what: str) -> Layout:
    if sorted(entries) != list(range(n)):
        raise QasmError([ParseDiagnostic(1, "error", f"incomplete {what} layout header")])
    return Layout(tuple(entries[b] for b in range(n)))


def parse_routed(text: str) -> tuple[RoutedCircuit, list[ParseDiagnostic]]:
    """Read an expanded emission back as a routed circuit of physical gates.

    Layouts come from the header comments (trivial when absent).
    """
    circuit, diags = parse(text)
    prog, _ = read_program(text)
    n = circuit.num_qubits
    initial = _layout_from(prog.layouts["initial"], n, "initial") if "initial" in prog.layouts \
        else Layout.trivial(n)
    final = _layout_from(prog.layouts["final"], n, "final") if "final" in prog.layouts else initial
    ops = tuple(Original(g, g.kind) for g in circuit.gates)
    return RoutedCircuit(n, initial, ops, final), diags


def parse_coupling(text: str) -> tuple[CouplingGraph, list[ParseDiagnostic]]:
    diags = []
    edges = []
    seen = set()
    declared = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("//"):
            continue
        tokens = line.split()
        if tokens[0] == "n" and len(tokens) == 2:
            try:
                declared = int(tokens[1])
            except ValueError:
                diags.append(ParseDiagnostic(lineno, "error", f"non-integer node count {tokens[1]!r}"))
            continue
        if len(tokens) != 2:
            diags.append(ParseDiagnostic(lineno, "error", f"expected 'u v', got {line!r}"))
            continue
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            diags.append(ParseDiagnostic(lineno, "error", f"non-integer token in {line!r}"))
            continue
        if u < 0 or v < 0:
            diags.append(ParseDiagnostic(lineno, "error", f"negative qubit index in {line!r}"))
            continue
        if u == v:
            diags.append(ParseDiagnostic(lineno, "error", f"self-loop on qubit {u}"))
            continue
        pair = (min(u, v), max(u, v))
        if pair in seen:
            diags.append(ParseDiagnostic(lineno, "warning", f"duplicate edge {pair}"))
            continue
        seen.add(pair)
        edges.append(pair)
    if any(d.severity == "error" for d in diags):
        raise QasmError(diags)
    n = declared if declared is not None else 1 + max((max(e) for e in edges), default=-1)
    try:
        return from_edges(n, edges, require_connected=False), diags
    except CouplingError as exc:
        raise QasmError(diags + [ParseDiagnostic(1, "error", str(exc))]) from exc
