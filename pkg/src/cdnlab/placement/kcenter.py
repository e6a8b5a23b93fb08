"""Minimum K-center 2-approximation via square graphs of edge-cost prefixes.

The edge set is the metric closure of the input graph (one edge per node
pair, cost = shortest-path length), ordered by non-decreasing cost with
(u, v) as tie-break. ``G_i`` keeps the first ``i`` edges; ``G_0`` has none.
"""
from __future__ import annotations

from cdnlab.placement.problem import REL_TOL, PlacementError, PlacementResult, as_distances, max_radius
from cdnlab.topology import DistanceMatrix


def sorted_edges(dist: DistanceMatrix) -> list[tuple[float, int, int]]:
    mat = dist.matrix
    n = dist.n
    return sorted((float(mat[u, v]), u, v) for u in range(n) for v in range(u + 1, n))


def square_mis(adj: list[int], n: int) -> list[int]:
    """Greedy maximal independent set (ascending id) of the square of ``adj``.

    ``adj[v]`` is a bitmask of v's neighbours.
    """
    square = []
    for v in range(n):
        reach = adj[v]
        nbrs = adj[v]
        while nbrs:
            low = nbrs & -nbrs
            reach |= adj[low.bit_length() - 1]
            nbrs ^= low
        square.append(reach & ~(1 << v))
    chosen, blocked = [], 0
    for v in range(n):
        if not (blocked >> v) & 1:
            chosen.append(v)
            blocked |= square[v] | (1 << v)
    return chosen


def mis_sequence(dist: DistanceMatrix):
    """Yield ``(i, cost_of_e_i, M_i)`` for i = 0..m; cost is 0.0 for i = 0."""
    n = dist.n
    adj = [0] * n
    yield 0, 0.0, square_mis(adj, n)
    for i, (cost, u, v) in enumerate(sorted_edges(dist), start=1):
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        yield i, cost, square_mis(adj, n)


def min_kcenter_2approx(g, K: int) -> PlacementResult:
    """Centers = M_j for the smallest j with |M_j| <= K."""
    dist = as_distances(g)
    if not 1 <= K <= dist.n:
        raise PlacementError(f"K must lie in 1..{dist.n}")
    for i, cost, mis in mis_sequence(dist):
        if len(mis) <= K:
            return PlacementResult(
                centers=tuple(mis),
                objective=max_radius(dist, mis),
                algorithm="kcenter",
                parameters={"K": K, "index": i, "edge_cost": cost},
            )
    raise AssertionError("unreachable: the complete graph's square has a singleton MIS")


def min_kcenter_count_for_diameter(g, D: float) -> tuple[int, tuple[int, ...]]:
    """Center count |M_k| for the largest k with c(e_k) <= D/2."""
    if D < 0:
        raise PlacementError("D must be nonnegative")
    dist = as_distances(g)
    limit = D / 2.0
    n = dist.n
    adj = [0] * n
    for cost, u, v in sorted_edges(dist):
        if cost > limit + REL_TOL * abs(limit):
            break
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    mis = square_mis(adj, n)
    return len(mis), tuple(mis)


def kcenter_for_diameter_result(g, D: float) -> PlacementResult:
    dist = as_distances(g)
    count, centers = min_kcenter_count_for_diameter(dist, D)
    return PlacementResult(
        centers=centers,
        objective=max_radius(dist, centers),
        algorithm="kcenter-d",
        parameters={"D": D, "count": count},
    )
