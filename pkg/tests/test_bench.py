import csv
import io

from cxroute import CX, Circuit, H, Rz, lnn
from cxroute.bench import CSV_COLUMNS, FORMULATIONS, gen_random, route, run_bench, to_csv, to_markdown


def test_gen_random_is_deterministic():
    a, b = gen_random(5, 100, 1), gen_random(5, 100, 1)
    assert a.num_qubits == 5 and len(a) == 100 and a.kinds() == b.kinds()
    assert len(gen_random(5, 0, 3)) == 0


def test_gen_random_frequencies():
    counts = {Rz: 0, H: 0, CX: 0}
    total = 0
    for seed in range(10):
        for k in gen_random(5, 1000, seed).kinds():
            counts[type(k)] += 1
            total += 1
    assert abs(counts[Rz] / total - 0.25) <= 0.02
    assert abs(counts[H] / total - 0.25) <= 0.02
    assert abs(counts[CX] / total - 0.50) <= 0.02


def test_formulations():
    assert list(FORMULATIONS) == ["proposed", "no-bridge", "std-dag", "fixed-layer"]


def test_route_no_bridge_override(t4_example, tgraph):
    assert route(t4_example, tgraph, "fixed-layer", "exact", initial_layout="trivial").cost == 1
    res = route(t4_example, tgraph, "fixed-layer", "exact", initial_layout="trivial", no_bridge=True)
    assert (res.cost, res.stats.num_bridges) == (2, 0)


def test_table_rows_and_csv():
    circuits = [(f"r{s}", gen_random(4, 20, s)) for s in range(3)]
    rows = run_bench(circuits, lnn(4), list(FORMULATIONS), "exact")
    assert not any(r.failed for r in rows)
    recs = list(csv.DictReader(io.StringIO(to_csv(rows))))
    assert list(recs[0]) == CSV_COLUMNS
    assert len(recs) == 12
    for rec in recs:
        assert int(rec["added_cnots"]) == 3 * (int(rec["swaps"]) + int(rec["bridges"]))
        assert rec["verified"] == "yes"
    md = to_markdown(rows, list(FORMULATIONS))
    assert "| average (3 rows) |" in md and "time_s" in md


def test_compliant_circuit_gives_zero_row():
    c = Circuit.from_kinds(3, [CX(0, 1), CX(1, 2)])
    rows = run_bench([("ok", c)], lnn(3), list(FORMULATIONS), "exact")
    assert [(x.swaps, x.bridges) for x in rows[0].cells] == [(0, 0)] * 4


def test_sabotage_marks_failed():
    rows = run_bench([("s", gen_random(4, 20, 1))], lnn(4), ["proposed"], "exact", sabotage=True)
    assert rows[0].failed
    assert "FAILED" in to_csv(rows) and "FAILED" in to_markdown(rows, ["proposed"])


def test_reproducible_tables():
    circuits = [(f"r{s}", gen_random(5, 30, s)) for s in range(2)]
    a = run_bench(circuits, lnn(5), list(FORMULATIONS), "heuristic", initial_layout="trivial")
    b = run_bench(circuits, lnn(5), list(FORMULATIONS), "heuristic", initial_layout="trivial")
    strip = lambda rows: [[(c.swaps, c.bridges, c.verified) for c in r.cells] for r in rows]
    assert strip(a) == strip(b)
