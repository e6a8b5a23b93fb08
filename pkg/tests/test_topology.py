import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdnlab.topology import (
    DisconnectedGraphError,
    DistanceMatrix,
    DuplicateEdgeError,
    GraphError,
    MalformedLineError,
    NegativeLengthError,
    NodeRangeError,
    WeightedGraph,
    all_pairs_distances,
    dump_graph,
    figure2_graph,
    load_graph,
    outdegrees,
    path_graph,
    random_graph,
    star_graph,
)


def test_load_path():
    g = load_graph("3\n0 1 1.0\n1 2 1.0")
    assert g.n == 3
    assert g.edges == {(0, 1): 1.0, (1, 2): 1.0}
    assert g == path_graph(3)


def test_load_negative_length_reports_line():
    with pytest.raises(NegativeLengthError) as exc:
        load_graph("2\n0 1 -1")
    assert exc.value.lineno == 2


@pytest.mark.parametrize("text, error, line", [
    ("3\n0 1 1\n0 1 2\n", DuplicateEdgeError, 3),
    ("3\n1 0 1\n0 1 2\n", DuplicateEdgeError, 3),
    ("3\n0 3 1\n", NodeRangeError, 2),
    ("3\n0 1\n", MalformedLineError, 2),
    ("3\n0 0 1\n", MalformedLineError, 2),
    ("x\n", MalformedLineError, 1),
    ("# only a comment\n", MalformedLineError, 0),
    ("2\n0 1 nan\n", MalformedLineError, 2),
])
def test_load_errors(text, error, line):
    with pytest.raises(error) as exc:
        load_graph(text)
    assert exc.value.lineno == line


def test_reversed_endpoints_are_normalised():
    assert load_graph("2\n1 0 2.5\n").edges == {(0, 1): 2.5}


def test_figure2_fixture():
    g = figure2_graph()
    assert g.n == 7 and g.edge_count == 6
    assert set(g.edges.values()) == {1.0}
    assert g.label(2) == "C"
    assert load_graph(dump_graph(g)) == g


def test_distances_path_and_singleton():
    d = all_pairs_distances(path_graph(3))
    assert d(0, 2) == 2.0
    one = all_pairs_distances(WeightedGraph(1, {}))
    assert one.matrix.shape == (1, 1) and one(0, 0) == 0.0


def test_disconnected_rejected():
    with pytest.raises(DisconnectedGraphError):
        all_pairs_distances(WeightedGraph(3, {(0, 1): 1.0}))


def _dijkstra_free_oracle(g):
    # Bellman-Ford per source on the edge list
    out = []
    for s in range(g.n):
        dist = [math.inf] * g.n
        dist[s] = 0.0
        for _ in range(g.n):
            changed = False
            for (u, v), w in g.edges.items():
                if dist[u] + w < dist[v]:
                    dist[v], changed = dist[u] + w, True
                if dist[v] + w < dist[u]:
                    dist[u], changed = dist[v] + w, True
            if not changed:
                break
        out.append(dist)
    return out


@pytest.mark.parametrize("seed", range(5))
def test_distances_match_bellman_ford(backend, seed):
    rng = np.random.default_rng(seed)
    base = random_graph(10, 0.3, seed)
    g = WeightedGraph(10, {e: float(rng.integers(1, 10)) / 2 for e in base.edges})
    assert all_pairs_distances(g).matrix.tolist() == _dijkstra_free_oracle(g)


def test_random_graph_trivial_and_deterministic():
    one = random_graph(1, 0.5, 7)
    assert one.n == 1 and one.edge_count == 0
    assert random_graph(50, 0.2, 42) == random_graph(50, 0.2, 42)


def test_random_graph_mean_edge_count():
    counts = [random_graph(50, 0.2, s).edge_count for s in range(1, 101)]
    expected = 0.2 * math.comb(50, 2)
    assert abs(np.mean(counts) - expected) <= 0.1 * expected


def test_random_graph_patch_joins_components():
    g = random_graph(30, 0.0, 1)
    assert g.is_connected()
    assert g.edge_count == 29
    assert set(g.edges) == {(i, i + 1) for i in range(29)}


def test_outdegrees():
    assert outdegrees(star_graph(4))[0] == (0, 4)
    assert outdegrees(path_graph(3)) == [(1, 2), (0, 1), (2, 1)]
    g = random_graph(20, 0.25, 3)
    adj = g.adjacency()
    assert dict(outdegrees(g)) == {u: len(adj[u]) for u in range(g.n)}


def test_graph_validation():
    with pytest.raises(GraphError):
        WeightedGraph(2, {(0, 0): 1.0})
    with pytest.raises(GraphError):
        WeightedGraph(2, {(0, 1): -1.0})
    with pytest.raises(GraphError):
        WeightedGraph.from_edges(2, [(0, 1, 1.0), (1, 0, 2.0)])


graphs = st.builds(
    lambda n, p, seed: random_graph(n, p, seed),
    st.integers(1, 14), st.floats(0.0, 1.0), st.integers(0, 2**32),
)


@settings(max_examples=60, deadline=None)
@given(graphs)
def test_metric_laws(g):
    d = all_pairs_distances(g).matrix
    assert np.all(np.diag(d) == 0)
    assert np.array_equal(d, d.T)
    # d(u,w) <= d(u,v) + d(v,w) for every triple
    assert np.all(d[:, None, :] <= d[:, :, None] + d[None, :, :] + 1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.data())
def test_round_trip(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    lengths = data.draw(st.lists(st.floats(0, 1e6, allow_nan=False), min_size=len(chosen),
                                 max_size=len(chosen)))
    labels = data.draw(st.lists(st.one_of(st.none(), st.from_regex(r"[A-Za-z][\w-]{0,6}", fullmatch=True)),
                                min_size=n, max_size=n))
    g = WeightedGraph(n, dict(zip(chosen, lengths)), tuple(labels))
    assert load_graph(dump_graph(g)) == g


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.floats(0, 1), st.integers(0, 10**6))
def test_random_graph_is_pure(n, p, seed):
    assert random_graph(n, p, seed) == random_graph(n, p, seed)
    assert random_graph(n, p, seed).is_connected()


def test_distance_matrix_read_only():
    d = DistanceMatrix([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        d.matrix[0, 1] = 5
