import math

import pytest
from hypothesis import given, settings, strategies as st

from cxroute import CX, Circuit, H, Layout, Original, RoutedCircuit, Rx, Rz, Swap
from cxroute.bench import gen_random
from cxroute.qasm import QasmError, emit, emit_circuit, eval_angle, parse, parse_coupling, parse_routed
from cxroute.verify import check_equivalence

HEAD = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def test_single_cx():
    c, diags = parse("qreg q[2]; cx q[0],q[1];")
    assert c.num_qubits == 2 and c.kinds() == [CX(0, 1)] and diags == []


def test_angle_literal():
    c, _ = parse("qreg q[1]; rz(pi/2) q[0];")
    assert c.kinds() == [Rz(0, math.pi / 2)]


@pytest.mark.parametrize("expr,want", [
    ("pi", math.pi), ("-pi/4", -math.pi / 4), ("3*pi/8", 3 * math.pi / 8), ("0.125", 0.125), ("2", 2.0),
])
def test_eval_angle(expr, want):
    assert eval_angle(expr) == pytest.approx(want, abs=0)


def test_unknown_gate_names_line():
    with pytest.raises(QasmError) as err:
        parse("qreg q[2];\nccx q[0],q[1],q[1];")
    d = err.value.diagnostics[0]
    assert d.severity == "error" and d.line == 2 and "unknown gate ccx" in d.message


@pytest.mark.parametrize("src", [
    "qreg q[2]; cx q[0],q[0];",
    "qreg q[2]; h q[2];",
    "qreg q[2]; rz(foo) q[0];",
    "qreg q[2]; h q[0]",
    "h q[0];",
])
def test_errors(src):
    with pytest.raises(QasmError) as err:
        parse(src)
    assert all(d.line >= 1 for d in err.value.diagnostics)


def test_aliases_and_dropped_statements():
    src = HEAD + "qreg q[2];\ncreg c[2];\nu1(0.5) q[0];\nx q[1];\nh q[0];\nbarrier q[0],q[1];\nmeasure q[0] -> c[0];\n"
    c, diags = parse(src)
    assert c.kinds() == [Rz(0, 0.5), Rx(1, math.pi), H(0)]
    assert [d.severity for d in diags] == ["warning", "warning"]
    lines = src.count("\n")
    assert all(1 <= d.line <= lines for d in diags)


def test_emit_swap_expansion():
    r = RoutedCircuit.build(Layout.trivial(3), [Swap(1, 2)])
    text = emit(r, expand=True)
    assert "cx q[1],q[2];\ncx q[2],q[1];\ncx q[1],q[2];" in text
    assert "swap q[1],q[2];" in emit(r, expand=False)


def test_emit_empty():
    text = emit(RoutedCircuit.build(Layout.trivial(2), []))
    body = [ln for ln in text.splitlines() if ln and not ln.startswith("//")]
    assert body == ['OPENQASM 2.0;', 'include "qelib1.inc";', "qreg q[2];"]


def test_layout_headers_round_trip():
    r = RoutedCircuit.build(Layout((1, 0, 2)), [Swap(0, 2)])
    back, _ = parse_routed(emit(r))
    assert back.initial_layout == r.initial_layout and back.final_layout == r.final_layout


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 60), st.integers(0, 10_000))
def test_parse_emit_idempotent(n, m, seed):
    c = gen_random(n, m, seed)
    once, _ = parse(emit_circuit(c))
    twice, _ = parse(emit_circuit(once))
    assert once.kinds() == c.kinds() == twice.kinds()


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(0, 30), st.integers(0, 10_000))
def test_zero_addition_routing_round_trip(n, m, seed):
    c = gen_random(n, m, seed)
    r = RoutedCircuit.build(Layout.trivial(n), [Original(g, g.kind) for g in c.gates])
    back, _ = parse_routed(emit(r, expand=True))
    assert [op.physical for op in back.ops] == c.kinds()
    assert check_equivalence(c, back).passed


def test_parse_coupling():
    g, _ = parse_coupling("0 1\n1 2")
    assert g.n == 3 and g.edges == [(0, 1), (1, 2)]
    g, _ = parse_coupling("# device\nn 4\n0 1\n")
    assert g.n == 4 and not g.connected
    with pytest.raises(QasmError, match="self-loop"):
        parse_coupling("1 1")
    with pytest.raises(QasmError):
        parse_coupling("0 a")


def test_parse_coupling_duplicate_warns():
    g, diags = parse_coupling("0 1\n1 0\n")
    assert g.edges == [(0, 1)]
    assert [(d.line, d.severity) for d in diags] == [(2, "warning")]
