import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cxroute import from_edges, grid, lnn, middles, t4
from cxroute.coupling import CouplingError, DisconnectedError, resolve


def test_path_distance():
    assert from_edges(3, [(0, 1), (1, 2)]).distance(0, 2) == 2


def test_t_graph():
    g = t4()
    assert g.distance(2, 3) == 2 and g.distance(0, 2) == 2
    assert all(g.distance(p, q) == 1 for p, q in g.edges)
    assert g.edges == [(0, 1), (1, 2), (1, 3)]


def test_disconnected_is_rejected():
    with pytest.raises(DisconnectedError, match="disconnected"):
        from_edges(4, [(0, 1)])
    g = from_edges(4, [(0, 1)], require_connected=False)
    assert not g.connected
    with pytest.raises(DisconnectedError):
        g.require_connected()


def test_bad_edges():
    with pytest.raises(CouplingError, match="self-loop"):
        from_edges(3, [(1, 1)])
    with pytest.raises(CouplingError):
        from_edges(3, [(0, 3)])


def test_lnn():
    assert lnn(5).distance(0, 4) == 4
    assert lnn(2).edges == [(0, 1)]
    with pytest.raises(CouplingError):
        lnn(1)


def test_grid():
    g = grid(2, 3)
    assert g.n == 6 and len(g.edges) == 7
    assert g.distance(0, 5) == 3
    assert grid(1, 4).edges == lnn(4).edges
    with pytest.raises(CouplingError):
        grid(1, 1)


@pytest.mark.parametrize("g,p,q,want", [
    (t4(), 2, 3, [1]),
    (lnn(3), 0, 2, [1]),
    (lnn(4), 0, 3, []),
])
def test_middles(g, p, q, want):
    assert middles(g, p, q) == want


def test_resolve_names(tmp_path):
    assert resolve("t4").n == 4
    assert resolve("lnn:6").n == 6
    assert resolve("grid:2x4").n == 8
    f = tmp_path / "dev.edges"
    f.write_text("0 1\n1 2\n")
    assert resolve(str(f)).edges == [(0, 1), (1, 2)]
    with pytest.raises(CouplingError):
        resolve("ring:5")


def test_shipped_devices(data_dir):
    qx4 = resolve(str(data_dir / "devices" / "ibmqx4.edges"))
    qx3 = resolve(str(data_dir / "devices" / "ibmqx3.edges"))
    assert (qx4.n, len(qx4.edges), qx4.connected) == (5, 6, True)
    assert (qx3.n, len(qx3.edges), qx3.connected) == (16, 20, True)


@st.composite
def connected_graphs(draw, max_n=16):
    n = draw(st.integers(2, max_n))
    # random spanning tree plus extra edges
    edges = {(draw(st.integers(0, v - 1)), v) for v in range(1, n)}
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    edges |= {(a, b) for a, b in extra if a != b}
    return n, sorted(edges)


@settings(max_examples=60, deadline=None)
@given(connected_graphs())
def test_distances_match_floyd_warshall(graph):
    n, edges = graph
    g = from_edges(n, edges)
    ref = nx.floyd_warshall_numpy(nx.Graph(list(edges)), nodelist=range(n))
    assert np.array_equal(g.dist, ref.astype(np.int64))
    assert np.array_equal(g.dist, g.dist.T)
    assert (np.diag(g.dist) == 0).all()
    assert np.array_equal(g.dist == 1, nx.to_numpy_array(nx.Graph(list(edges)), nodelist=range(n)) == 1)
    d = g.dist
    assert (d[:, :, None] <= d[:, None, :] + d.T[None, :, :]).all()


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=10))
def test_middles_is_neighbor_intersection(graph):
    n, edges = graph
    g = from_edges(n, edges)
    for p in range(n):
        for q in range(n):
            want = sorted(m for m in range(n) if g.is_edge(p, m) and g.is_edge(m, q))
            assert middles(g, p, q) == want


def test_dist_is_read_only():
    with pytest.raises(ValueError):
        lnn(3).dist[0, 1] = 5
