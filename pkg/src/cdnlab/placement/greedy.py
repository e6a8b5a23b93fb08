"""Greedy placement, l-backtracking greedy, transit-node heuristic and the
exhaustive optimum used to validate them."""
from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from cdnlab import kernels
from cdnlab.placement.problem import (
    REL_TOL,
    PlacementError,
    PlacementProblem,
    PlacementResult,
    as_distances,
    max_radius,
    total_cost,
)
from cdnlab.topology import WeightedGraph, outdegrees

ENUMERATION_CAP = 2_000_000

OBJECTIVES = {"total-cost": kernels.TOTAL_COST, "max-radius": kernels.MAX_RADIUS}


class EnumerationCapError(PlacementError):
    pass


def _check_budget(problem: PlacementProblem, M: int):
    if not 1 <= M <= len(problem.candidate_sites):
        raise PlacementError(f"M must lie in 1..{len(problem.candidate_sites)}")


def _pick(costs: np.ndarray) -> int:
    """Position of the lowest cost; earlier positions win near-ties."""
    best = 0
    for i in range(1, len(costs)):
        if costs[i] < costs[best] - REL_TOL * abs(costs[best]):
            best = i
    return best


def greedy_placement(problem: PlacementProblem, M: int) -> PlacementResult:
    """Add, one at a time, the site that minimises total weighted distance."""
    _check_budget(problem, M)
    mat = problem.distances.matrix
    weights = problem.weights
    nearest = np.full(problem.n, np.inf)
    chosen: list[int] = []
    pool = list(problem.candidate_sites)
    for _ in range(M):
        costs = kernels.coverage_costs(mat, weights, nearest, np.asarray(pool, dtype=np.int64))
        site = pool.pop(_pick(costs))
        chosen.append(site)
        np.minimum(nearest, mat[site], out=nearest)
    return PlacementResult(
        centers=tuple(sorted(chosen)),
        objective=total_cost(problem.distances, chosen, problem.demands),
        algorithm="greedy",
        parameters={"M": M, "order": chosen},
    )


def backtracking_greedy(problem: PlacementProblem, M: int, ell: int) -> PlacementResult:
    """Greedy where each step may also drop ``ell`` placed servers and add
    ``ell + 1`` new ones.

    With fewer than ``ell`` servers placed only the plain add move exists, so
    ``ell = 0`` is exactly :func:`greedy_placement`.
    """
    if ell < 0:
        raise PlacementError("ell must be nonnegative")
    if ell == 0:
        plain = greedy_placement(problem, M)
        return PlacementResult(plain.centers, plain.objective, "backtrack",
                               dict(plain.parameters, ell=0))
    _check_budget(problem, M)
    mat = problem.distances.matrix
    weights = problem.weights
    sites = list(problem.candidate_sites)
    placed: list[int] = []
    while len(placed) < M:
        best_set, best_cost = None, math.inf
        # plain add move
        base = _nearest(mat, placed, problem.n)
        pool = [s for s in sites if s not in placed]
        costs = kernels.coverage_costs(mat, weights, base, np.asarray(pool, dtype=np.int64))
        pos = _pick(costs)
        best_set, best_cost = sorted(placed + [pool[pos]]), float(costs[pos])
        if len(placed) >= ell:
            for removed in combinations(sorted(placed), ell):
                kept = [s for s in placed if s not in removed]
                pool = [s for s in sites if s not in kept]
                if len(pool) < ell + 1:
                    continue
                combo, cost, _ = kernels.best_subset(
                    mat, weights, _nearest(mat, kept, problem.n),
                    np.asarray(pool, dtype=np.int64), ell + 1, kernels.TOTAL_COST, REL_TOL,
                )
                if cost < best_cost - REL_TOL * abs(best_cost):
                    best_set = sorted(kept + [pool[i] for i in combo])
                    best_cost = cost
        placed = best_set
    return PlacementResult(
        centers=tuple(sorted(placed)),
        objective=total_cost(problem.distances, placed, problem.demands),
        algorithm="backtrack",
        parameters={"M": M, "ell": ell},
    )


def _nearest(mat: np.ndarray, placed, n: int) -> np.ndarray:
    if not placed:
        return np.full(n, np.inf)
    return mat[np.asarray(placed, dtype=np.int64)].min(axis=0)


def transit_node_placement(g: WeightedGraph, M: int) -> PlacementResult:
    """The M highest-degree nodes; ties go to the smaller id."""
    if not 1 <= M <= g.n:
        raise PlacementError(f"M must lie in 1..{g.n}")
    chosen = [node for node, _ in outdegrees(g)[:M]]
    dist = as_distances(g)
    return PlacementResult(
        centers=tuple(sorted(chosen)),
        objective=total_cost(dist, chosen),
        algorithm="transit",
        parameters={"M": M},
    )


def brute_force_optimal(problem: PlacementProblem, M: int, objective: str = "total-cost",
                        cap: int = ENUMERATION_CAP) -> PlacementResult:
    """Exact optimum by enumeration; lexicographically first optimum wins."""
    _check_budget(problem, M)
    if objective not in OBJECTIVES:
        raise PlacementError(f"objective must be one of {sorted(OBJECTIVES)}")
    sites = list(problem.candidate_sites)
    count = math.comb(len(sites), M)
    if count > cap:
        raise EnumerationCapError(f"C({len(sites)}, {M}) = {count} exceeds cap {cap}")
    combo, _, _ = kernels.best_subset(
        problem.distances.matrix, problem.weights, np.full(problem.n, np.inf),
        np.asarray(sites, dtype=np.int64), M, OBJECTIVES[objective], REL_TOL,
    )
    centers = tuple(sites[i] for i in combo)
    if objective == "total-cost":
        value = total_cost(problem.distances, centers, problem.demands)
    else:
        value = max_radius(problem.distances, centers, problem.demands)
    return PlacementResult(
        centers=centers,
        objective=value,
        algorithm="optimal",
        parameters={"M": M, "objective": objective, "enumerated": count},
    )
