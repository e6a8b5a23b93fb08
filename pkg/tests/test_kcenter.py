import itertools

import pytest

from cdnlab.placement import (
    PlacementError,
    brute_force_optimal,
    min_kcenter_2approx,
    min_kcenter_count_for_diameter,
)
from cdnlab.placement.kcenter import mis_sequence, square_mis
from cdnlab.placement.problem import PlacementProblem, max_radius
from cdnlab.topology import WeightedGraph, all_pairs_distances, path_graph, random_graph


def _opt_radius(d, K):
    return min(max(min(d(v, c) for c in combo) for v in range(d.n))
               for combo in itertools.combinations(range(d.n), K))


def test_k_equals_n():
    g = random_graph(7, 0.4, 3)
    res = min_kcenter_2approx(g, 7)
    assert res.objective == 0 and res.centers == tuple(range(7))


def test_path_one_center():
    res = min_kcenter_2approx(path_graph(3), 1)
    assert res.objective <= 2


@pytest.mark.parametrize("seed", range(30))
@pytest.mark.parametrize("K", [1, 2, 3])
def test_within_twice_optimum(seed, K):
    g = random_graph(10, 0.25, seed)
    d = all_pairs_distances(g)
    res = min_kcenter_2approx(g, K)
    assert len(res.centers) <= K
    assert res.objective == max_radius(d, res.centers)
    assert res.objective <= 2 * _opt_radius(d, K)


def test_weighted_instances_within_twice_optimum():
    for seed in range(20):
        base = random_graph(9, 0.35, seed)
        g = WeightedGraph(9, {e: 1.0 + (hash((seed,) + e) % 7) for e in base.edges})
        d = all_pairs_distances(g)
        for K in (1, 2, 3):
            assert min_kcenter_2approx(g, K).objective <= 2 * _opt_radius(d, K)


def test_square_mis_is_maximal_and_independent():
    g = random_graph(12, 0.2, 5)
    adj = [0] * g.n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    mis = square_mis(adj, g.n)
    nbrs = g.adjacency()
    two_hop = [set(nbrs[v]) | {w for u in nbrs[v] for w in nbrs[u]} - {v} for v in range(g.n)]
    assert all(b not in two_hop[a] for a, b in itertools.combinations(mis, 2))
    assert all(v in mis or two_hop[v] & set(mis) for v in range(g.n))


def test_mis_sequence_starts_empty_and_shrinks_to_one():
    d = all_pairs_distances(path_graph(4))
    seq = list(mis_sequence(d))
    assert seq[0] == (0, 0.0, [0, 1, 2, 3])
    assert len(seq) == 1 + 6
    assert len(seq[-1][2]) == 1


def test_count_for_diameter():
    g = random_graph(10, 0.3, 8)
    d = all_pairs_distances(g)
    assert min_kcenter_count_for_diameter(g, 0) == (10, tuple(range(10)))
    count, centers = min_kcenter_count_for_diameter(g, 2 * d.diameter)
    assert count == 1
    for D in (1, 2, 3, 4):
        count, centers = min_kcenter_count_for_diameter(g, D)
        assert count == len(centers)
        assert max_radius(d, centers) <= D


def test_count_for_diameter_path():
    count, centers = min_kcenter_count_for_diameter(path_graph(3), 2)
    assert count <= 2
    d = all_pairs_distances(path_graph(3))
    assert max_radius(d, centers) <= 2


def test_bad_arguments():
    with pytest.raises(PlacementError):
        min_kcenter_2approx(path_graph(3), 0)
    with pytest.raises(PlacementError):
        min_kcenter_count_for_diameter(path_graph(3), -1)


def test_matches_brute_force_optimal_bound():
    g = random_graph(10, 0.3, 12)
    opt = brute_force_optimal(PlacementProblem.from_graph(g), 2, "max-radius")
    assert min_kcenter_2approx(g, 2).objective <= 2 * opt.objective
