"""Pure-Python/numpy versions of the hot kernels.

Signatures and tie-breaking match ``_kernels.pyx`` exactly; this module is
the fallback when the compiled extension is unavailable.
"""
from itertools import combinations

import numpy as np

TOTAL_COST = 0
MAX_RADIUS = 1


def floyd_warshall(dist):
    """All-pairs shortest paths, in place on a float64 (N, N) array."""
    n = dist.shape[0]
    for k in range(n):
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)


def _better(value, best, rel_tol):
    if best == np.inf:
        return value < np.inf
    return value < best - rel_tol * abs(best)


def _objective(nearest, weights, objective):
    if objective == TOTAL_COST:
        return float(np.dot(weights, nearest))
    clients = nearest[weights > 0]
    return float(clients.max()) if clients.size else 0.0


def coverage_costs(dist, weights, base_min, candidates, objective=TOTAL_COST):
    """Objective after adding each candidate on top of ``base_min``."""
    out = np.empty(len(candidates), dtype=np.float64)
    for i, c in enumerate(candidates):
        nearest = np.minimum(base_min, dist[c])
        out[i] = _objective(nearest, weights, objective)
    return out


def best_subset(dist, weights, base_min, candidates, size, objective, rel_tol):
    """Exhaustive search for the best ``size``-subset of ``candidates``.

    Combinations are visited in lexicographic order of candidate position and
    only a strictly better value (beyond ``rel_tol``) replaces the incumbent,
    so the lexicographically first optimum wins.
    Returns ``(positions, value, evaluated)``.
    """
    best_value = np.inf
    best_combo = None
    evaluated = 0
    rows = dist[np.asarray(candidates, dtype=np.int64)]
    for combo in combinations(range(len(candidates)), size):
        nearest = base_min
        for pos in combo:
            nearest = np.minimum(nearest, rows[pos])
        value = _objective(nearest, weights, objective)
        evaluated += 1
        if best_combo is None or _better(value, best_value, rel_tol):
            best_value = value
            best_combo = combo
    return tuple(best_combo), float(best_value), evaluated
