"""Shared placement types: problem instances, results and the demands file."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from cdnlab.topology import DistanceMatrix, WeightedGraph, all_pairs_distances

# Relative slack used wherever derived sums of lengths are compared.
REL_TOL = 1e-9


class PlacementError(ValueError):
    pass


def as_distances(g) -> DistanceMatrix:
    if isinstance(g, DistanceMatrix):
        return g
    if isinstance(g, WeightedGraph):
        return all_pairs_distances(g)
    raise TypeError(f"expected WeightedGraph or DistanceMatrix, got {type(g).__name__}")


@dataclass(frozen=True)
class PlacementProblem:
    distances: DistanceMatrix
    demands: tuple[float, ...] = ()
    candidate_sites: tuple[int, ...] = ()

    def __post_init__(self):
        n = self.distances.n
        demands = tuple(float(d) for d in self.demands) or (1.0,) * n
        if len(demands) != n:
            raise PlacementError(f"expected {n} demands, got {len(demands)}")
        if any(d < 0 for d in demands):
            raise PlacementError("demands must be nonnegative")
        sites = tuple(sorted(set(self.candidate_sites))) or tuple(range(n))
        if not all(0 <= s < n for s in sites):
            raise PlacementError("candidate site out of range")
        object.__setattr__(self, "demands", demands)
        object.__setattr__(self, "candidate_sites", sites)

    @classmethod
    def from_graph(cls, g, demands=(), candidate_sites=()) -> PlacementProblem:
        return cls(as_distances(g), tuple(demands), tuple(candidate_sites))

    @property
    def n(self) -> int:
        return self.distances.n

    @property
    def weights(self) -> np.ndarray:
        return np.asarray(self.demands, dtype=np.float64)


@dataclass(frozen=True)
class PlacementResult:
    centers: tuple[int, ...]
    objective: float
    algorithm: str
    parameters: dict[str, Any] = field(default_factory=dict)
    partitions: tuple[tuple[int, ...], ...] = ()

    def to_dict(self) -> dict[str, Any]:
        out = {
            "algorithm": self.algorithm,
            "centers": list(self.centers),
            "objective": self.objective,
            "parameters": self.parameters,
        }
        if self.partitions:
            out["partitions"] = [list(p) for p in self.partitions]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> PlacementResult:
        return cls(
            centers=tuple(data["centers"]),
            objective=float(data["objective"]),
            algorithm=data["algorithm"],
            parameters=dict(data.get("parameters", {})),
            partitions=tuple(tuple(p) for p in data.get("partitions", ())),
        )


def nearest_distances(distances: DistanceMatrix, centers) -> np.ndarray:
    rows = distances.matrix[np.asarray(list(centers), dtype=np.int64)]
    return rows.min(axis=0)


def total_cost(distances: DistanceMatrix, centers, demands=None) -> float:
    """Sum of demand-weighted distances to the nearest center."""
    nearest = nearest_distances(distances, centers)
    weights = np.ones(distances.n) if demands is None else np.asarray(demands, dtype=np.float64)
    return float(np.dot(weights, nearest))


def max_radius(distances: DistanceMatrix, centers, demands=None) -> float:
    """Largest distance from a client (positive demand) to its nearest center."""
    nearest = nearest_distances(distances, centers)
    if demands is not None:
        nearest = nearest[np.asarray(demands, dtype=np.float64) > 0]
    return float(nearest.max()) if nearest.size else 0.0


def parse_demands(text: str, n: int) -> tuple[float, ...]:
    """Demands file: ``node weight`` lines; unlisted nodes default to 1.0."""
    demands = [1.0] * n
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise PlacementError(f"line {lineno}: expected 'node weight'")
        try:
            node, weight = int(parts[0]), float(parts[1])
        except ValueError:
            raise PlacementError(f"line {lineno}: unparseable {raw!r}") from None
        if not 0 <= node < n:
            raise PlacementError(f"line {lineno}: node {node} out of range")
        if weight < 0:
            raise PlacementError(f"line {lineno}: negative demand")
        demands[node] = weight
    return tuple(demands)
