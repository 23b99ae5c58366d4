import math
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cxroute import CX, Circuit, H, Layout, Rx, Rz, Rules, build, lnn, reduce_transitive
from cxroute.bench import gen_random
from cxroute.depgraph import (DependencyGraph, advance, cnot_layers, initial_frontier, lookahead_depths,
                              resolve_gate, to_dot)

import oracle

FULL_T4_EXAMPLE = {(0, 2), (0, 3), (0, 4), (1, 2)}


def closure(d):
    g = nx.DiGraph()
    g.add_nodes_from(range(d.n))
    g.add_edges_from(d.edges)
    return set(nx.transitive_closure_dag(g).edges)


def test_t4_example_full_edges(t4_example):
    d = build(t4_example, Rules.FULL)
    assert set(d.edges) == FULL_T4_EXAMPLE
    assert set(reduce_transitive(d).edges) == FULL_T4_EXAMPLE
    assert (2, 4) not in d.edges and (3, 4) not in d.edges


def test_t4_example_standard_chains(t4_example):
    d = build(t4_example, Rules.STANDARD_DAG)
    assert set(d.edges) == {(0, 2), (0, 4), (1, 2), (2, 3), (3, 4)}


@pytest.mark.parametrize("kinds,edge", [
    ([Rz(0, 1.0), CX(0, 1)], False),
    ([CX(0, 1), CX(0, 2)], False),
    ([Rx(1, 1.0), CX(0, 1)], False),
    ([CX(0, 1), CX(2, 1)], False),
    ([Rz(0, 1.0), H(0)], True),
    ([Rz(0, 1.0), Rx(0, 1.0)], True),
    ([CX(0, 1), CX(1, 0)], True),
    ([H(0), H(0)], True),
])
def test_pairwise_rules(kinds, edge):
    d = build(Circuit.from_kinds(3, kinds))
    assert ((0, 1) in d.edges) is edge


def test_window_blocks_commutation():
    # Rz and CX control commute pairwise, but not across an H between them
    d = build(Circuit.from_kinds(2, [Rz(0, 1.0), H(0), CX(0, 1)]))
    assert (0, 2) in d.edges


def test_reduce_textbook():
    c = Circuit.from_kinds(1, [H(0), H(0), H(0)])
    d = DependencyGraph(c, frozenset({(0, 1), (1, 2), (0, 2)}))
    assert set(reduce_transitive(d).edges) == {(0, 1), (1, 2)}


def test_reduce_chain_of_ten():
    c = Circuit.from_kinds(1, [H(0)] * 10)
    d = DependencyGraph(c, frozenset((i, j) for i in range(10) for j in range(i + 1, 10)))
    assert set(reduce_transitive(d).edges) == {(i, i + 1) for i in range(9)}
    assert set(build(c).edges) == set(d.edges)


def test_cnot_layers():
    c = Circuit.from_kinds(4, [CX(0, 1), CX(0, 1), CX(2, 3), H(0), CX(1, 2)])
    d = build(c, Rules.STANDARD_DAG)
    assert cnot_layers(c, d.edges) == {0: 1, 1: 2, 2: 1, 4: 3}
    fixed = build(c, Rules.FIXED_LAYER)
    assert {(0, 1), (2, 1), (1, 4)} <= set(fixed.edges)
    assert (2, 4) in closure(fixed)


def test_fixed_layer_topological_order_respects_edges():
    c = Circuit.from_kinds(4, [CX(0, 1), CX(0, 1), CX(2, 3)])
    d = build(c, Rules.FIXED_LAYER)
    assert (2, 1) in d.edges
    assert d.order == (0, 2, 1)
    assert all(d.rank[u] < d.rank[v] for u, v in d.edges)


def test_initial_frontier(t4_example):
    assert initial_frontier(build(t4_example)).blocking == (0, 1)
    assert initial_frontier(build(Circuit(2, ()))).blocking == ()
    assert initial_frontier(build(Circuit.from_kinds(4, [CX(0, 1), CX(2, 3)]))).blocking == (0, 1)


def test_advance_t4_example(t4_example, tgraph):
    d = build(t4_example)
    f = advance(d, initial_frontier(d), Layout.trivial(4), tgraph)
    assert f.blocking == (1,)
    assert f.executed == (0, 3, 4)
    f2 = advance(d, resolve_gate(d, f, 1), Layout.trivial(4), tgraph)
    assert f2.done and f2.executed == (2,)
    assert f2.resolved_count == 5


def test_advance_compliant_runs_everything():
    c = Circuit.from_kinds(3, [CX(0, 1), H(2), CX(1, 2), Rz(0, 0.1)])
    d = build(c)
    f = advance(d, initial_frontier(d), Layout.trivial(3), lnn(3))
    assert f.done and sorted(f.executed) == [0, 1, 2, 3]


def test_resolve_gate_requires_frontier(t4_example):
    d = build(t4_example)
    with pytest.raises(ValueError):
        resolve_gate(d, initial_frontier(d), 4)


def test_lookahead_t4_example(t4_example):
    assert lookahead_depths(build(t4_example), [1], 10) == {1: 0, 2: 1}


def test_lookahead_chain_truncates():
    c = Circuit.from_kinds(2, [CX(0, 1), CX(1, 0)] * 3)
    d = build(c)
    assert lookahead_depths(d, [0], 3) == {0: 0, 1: 1, 2: 2, 3: 3}
    assert lookahead_depths(d, [0], 10) == {k: k for k in range(6)}


def test_lookahead_unreachable_absent():
    c = Circuit.from_kinds(4, [CX(0, 1), CX(2, 3), CX(1, 0)])
    assert lookahead_depths(build(c), [0], 10) == {0: 0, 2: 1}


def test_to_dot(t4_example):
    text = to_dot(build(t4_example))
    assert text.startswith("digraph") and "g0 -> g2;" in text and text.count("->") == 4


circuits = st.builds(gen_random, st.integers(2, 6), st.integers(0, 40), st.integers(0, 100_000))


@settings(max_examples=80, deadline=None)
@given(circuits)
def test_full_matches_pairwise_oracle(c):
    d = build(c)
    assert [set(p) for p in oracle.full_predecessors(c)] == [set(p) for p in d.pred]
    assert [set(p) for p in oracle.timeline_predecessors(c)] == [set(p) for p in build(c, Rules.STANDARD_DAG).pred]


@settings(max_examples=80, deadline=None)
@given(circuits)
def test_rule_inclusion(c):
    # compared as orderings: Full drops timeline edges but keeps long-range ones
    # that Std implies transitively
    full, std, fixed = (closure(build(c, r)) for r in Rules)
    assert full <= std <= fixed
    assert set(build(c, Rules.STANDARD_DAG).edges) <= set(build(c, Rules.FIXED_LAYER).edges)


@settings(max_examples=80, deadline=None)
@given(circuits)
def test_full_edges_share_a_qubit(c):
    for u, v in build(c).edges:
        assert set(c.gates[u].qubits) & set(c.gates[v].qubits)
        assert u < v


@settings(max_examples=60, deadline=None)
@given(circuits)
def test_topological_order(c):
    for rules in Rules:
        d = build(c, rules)
        assert sorted(d.order) == list(range(d.n))
        assert all(d.rank[u] < d.rank[v] for u, v in d.edges)
        if rules is not Rules.FIXED_LAYER:
            assert d.order == tuple(range(d.n))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 50), st.floats(0.05, 0.6), st.integers(0, 10_000))
def test_reduction_preserves_reachability(n, p, seed):
    rnd = random.Random(seed)
    edges = frozenset((i, j) for i in range(n) for j in range(i + 1, n) if rnd.random() < p)
    d = DependencyGraph(Circuit.from_kinds(1, [H(0)] * n), edges)
    r = reduce_transitive(d)
    assert closure(r) == closure(d)
    g = nx.DiGraph(list(edges))
    g.add_nodes_from(range(n))
    assert set(r.edges) == set(nx.transitive_reduction(g).edges)


def random_order_advance(d, layout, coupling, rnd):
    resolved = set()
    while True:
        ready = [g for g in range(d.n) if g not in resolved and all(p in resolved for p in d.pred[g])
                 and (not d.is_cx(g) or coupling.is_edge(*(layout[q] for q in d.circuit.gates[g].qubits)))]
        if not ready:
            return resolved
        resolved.add(rnd.choice(ready))


@settings(max_examples=60, deadline=None)
@given(circuits, st.sampled_from(list(Rules)), st.integers(0, 10_000))
def test_advance_is_confluent(c, rules, seed):
    d = build(c, rules)
    rnd = random.Random(seed)
    coupling = lnn(c.num_qubits)
    layout = Layout(tuple(rnd.sample(range(c.num_qubits), c.num_qubits)))
    f = advance(d, initial_frontier(d), layout, coupling)
    assert set(np.flatnonzero(f.resolved)) == random_order_advance(d, layout, coupling, rnd)
    assert set(f.executed) == set(np.flatnonzero(f.resolved))
    for g in f.blocking:
        assert all(f.resolved[p] for p in d.pred[g])
        assert d.is_cx(g)
        a, b = (layout[q] for q in c.gates[g].qubits)
        assert not coupling.is_edge(a, b)


@settings(max_examples=40, deadline=None)
@given(circuits, st.integers(0, 12))
def test_lookahead_depth_bounds(c, depth):
    d = build(c)
    f = initial_frontier(d)
    got = lookahead_depths(d, f.blocking, depth)
    assert all(0 <= k <= depth for k in got.values())
    assert all(d.is_cx(g) for g in got)
    for g, k in got.items():
        for p in d.pred[g]:
            if p in got:
                assert got[p] < k
