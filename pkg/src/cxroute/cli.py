"""Command-line entry point: gen, map, verify, bench, depgraph-dot."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import kernels
from .bench import FORMULATIONS, gen_random, route, run_bench, to_csv, to_markdown
from .circuit import Circuit, CircuitError, Layout, RoutingError
from .coupling import CouplingError, resolve
from .depgraph import build, to_dot
from .heuristic import HeuristicParams
from .qasm import QasmError, emit, emit_circuit, parse, parse_routed
from .verify import MAX_SIM_QUBITS, check_compliance, check_equivalence

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_ROUTE, EXIT_VERIFY = 0, 1, 2, 3, 4


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_circuit(path: str) -> Circuit:
    circuit, diags = parse(Path(path).read_text(encoding="utf-8"))
    for d in diags:
        print(f"{path}: {d}", file=sys.stderr)
    return circuit


def _initial_layout(arg: str, n: int):
    if arg in ("all", "trivial"):
        return arg
    try:
        fwd = tuple(int(x) for x in arg.split(","))
        layout = Layout(fwd)
    except (ValueError, CircuitError) as exc:
        raise _Usage(f"bad --initial-layout {arg!r}: {exc}") from exc
    if len(layout) != n:
        raise _Usage(f"--initial-layout has {len(layout)} entries for a {n}-qubit device")
    return layout


def _add_routing_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--coupling", required=True, help="t4, lnn:<n>, grid:<r>x<c> or an edge-list file")
    p.add_argument("--algo", choices=["exact", "heuristic"], default="heuristic")
    p.add_argument("--formulation", choices=list(FORMULATIONS), default="proposed")
    p.add_argument("--no-bridge", action="store_true", help="forbid Bridge gates in any formulation")
    p.add_argument("--initial-layout", default=None,
                   help="all | trivial | comma-separated permutation (default: all for exact, trivial otherwise)")
    p.add_argument("--guard", type=int, default=8, help="qubit limit for exhaustive initial layouts")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--lookahead-depth", type=int, default=10)
    p.add_argument("--no-postprocess", action="store_true")


def cmd_gen(args) -> int:
    text = emit_circuit(gen_random(args.qubits, args.gates, args.seed))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_map(args) -> int:
    try:
        circuit = _read_circuit(args.input)
        coupling = resolve(args.coupling)
        coupling.require_connected()
    except (OSError, QasmError, CouplingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if circuit.num_qubits > coupling.n:
        print(f"error: circuit needs {circuit.num_qubits} qubits, device has {coupling.n}", file=sys.stderr)
        return EXIT_INPUT
    circuit = circuit.padded(coupling.n)
    layout_arg = args.initial_layout or ("all" if args.algo == "exact" else "trivial")
    layout = _initial_layout(layout_arg, coupling.n)
    if args.algo == "heuristic" and layout == "all":
        raise _Usage("the heuristic needs a single initial layout")
    try:
        params = HeuristicParams(args.alpha, args.lookahead_depth)
    except ValueError as exc:
        raise _Usage(str(exc)) from exc
    try:
        t0 = time.perf_counter()
        res = route(circuit, coupling, args.formulation, args.algo, initial_layout=layout, params=params,
                    guard=args.guard, postprocess=not args.no_postprocess, no_bridge=args.no_bridge)
        elapsed = time.perf_counter() - t0
    except (RoutingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ROUTE
    text = emit(res.routed, expand=not args.compact)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    elif not args.quiet:
        sys.stdout.write(text)
    if args.dot:
        Path(args.dot).write_text(to_dot(build(circuit, FORMULATIONS[args.formulation][0])), encoding="utf-8")
    print(f"{res.stats.line()} time_s={elapsed:.4f}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        logical = _read_circuit(args.logical)
        routed, diags = parse_routed(Path(args.routed).read_text(encoding="utf-8"))
        coupling = resolve(args.coupling)
    except (OSError, QasmError, CouplingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    comp = check_compliance(routed, coupling)
    for idx, msg in comp.violations:
        print(f"compliance: op {idx}: {msg}")
    ok = comp.passed
    if routed.num_physical <= MAX_SIM_QUBITS:
        eq = check_equivalence(logical, routed, trials=args.trials, tol=args.tol, seed=args.seed)
        print(f"equivalence: min_fidelity={eq.min_fidelity:.12f} trials={eq.trials} rng={eq.rng} seed={eq.seed}")
        ok = ok and eq.passed
    else:
        print(f"equivalence: skipped ({routed.num_physical} qubits exceed the simulation cap)")
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_bench(args) -> int:
    try:
        coupling = resolve(args.coupling)
        coupling.require_connected()
        circuits = []
        for path in args.circuits:
            circuits.append((Path(path).stem, _read_circuit(path).padded(coupling.n)))
        for k in range(args.count):
            seed = args.seed + k
            circuits.append((f"random_{args.qubits}q_{args.gates}g_s{seed}",
                             gen_random(args.qubits, args.gates, seed).padded(coupling.n)))
    except (OSError, QasmError, CouplingError, ValueError, CircuitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    forms = [f.strip() for f in args.formulations.split(",") if f.strip()]
    unknown = [f for f in forms if f not in FORMULATIONS]
    if unknown:
        raise _Usage(f"unknown formulations {unknown}")
    layout = args.initial_layout or ("all" if args.algo == "exact" else "trivial")
    rows = run_bench(circuits, coupling, forms, args.algo, sabotage=args.sabotage_verify,
                     initial_layout=layout, guard=args.guard)
    out = to_csv(rows) if args.format == "csv" else to_markdown(rows, forms)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    for row in rows:
        for c in row.cells:
            if not c.verified:
                print(f"FAILED {row.name} {c.formulation}: {c.error}", file=sys.stderr)
    return EXIT_VERIFY if any(r.failed for r in rows) else EXIT_OK


def cmd_dot(args) -> int:
    try:
        circuit = _read_circuit(args.input)
    except (OSError, QasmError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(to_dot(build(circuit, FORMULATIONS[args.formulation][0])))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cxroute", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 (kernels: {kernels.BACKEND})")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a random Rz/H/CX circuit")
    g.add_argument("--qubits", type=int, required=True)
    g.add_argument("--gates", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("map", help="route a circuit onto a coupling graph")
    m.add_argument("input")
    _add_routing_flags(m)
    m.add_argument("-o", "--output")
    m.add_argument("--compact", action="store_true", help="emit swap statements instead of CX expansions")
    m.add_argument("--quiet", action="store_true", help="do not print QASM when no --output is given")
    m.add_argument("--dot", help="also write the dependency graph in DOT format")
    m.set_defaults(func=cmd_map)

    v = sub.add_parser("verify", help="check a routed QASM file against its logical circuit")
    v.add_argument("logical")
    v.add_argument("routed")
    v.add_argument("--coupling", required=True)
    v.add_argument("--trials", type=int, default=8)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="compare formulations over random and supplied circuits")
    b.add_argument("circuits", nargs="*", help="extra QASM files")
    b.add_argument("--coupling", required=True)
    b.add_argument("--algo", choices=["exact", "heuristic"], default="exact")
    b.add_argument("--formulations", default=",".join(FORMULATIONS))
    b.add_argument("--qubits", type=int, default=5)
    b.add_argument("--gates", type=int, default=100)
    b.add_argument("--count", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--initial-layout", default=None)
    b.add_argument("--guard", type=int, default=8)
    b.add_argument("--format", choices=["csv", "markdown"], default="csv")
    b.add_argument("-o", "--output")
    b.add_argument("--sabotage-verify", action="store_true", help=argparse.SUPPRESS)
    b.set_defaults(func=cmd_bench)

    d = sub.add_parser("depgraph-dot", help="print the dependency graph in DOT format")
    d.add_argument("input")
    d.add_argument("--formulation", choices=list(FORMULATIONS), default="proposed")
    d.set_defaults(func=cmd_dot)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
