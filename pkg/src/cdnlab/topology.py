"""Weighted network graphs, shortest-path distances and topology generation."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from cdnlab import kernels


class GraphError(ValueError):
    """Base class for graph construction and parsing errors."""


class GraphFormatError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class MalformedLineError(GraphFormatError):
    pass


class DuplicateEdgeError(GraphFormatError):
    pass


class NegativeLengthError(GraphFormatError):
    pass


class NodeRangeError(GraphFormatError):
    pass


class DisconnectedGraphError(GraphError):
    pass


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph on nodes ``0..n-1`` with nonnegative edge lengths.

    ``edges`` maps ``(u, v)`` with ``u < v`` to the edge length.
    """

    n: int
    edges: Mapping[tuple[int, int], float]
    labels: tuple[str | None, ...] = field(default=())

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("graph needs at least one node")
        clean = {}
        for (u, v), length in self.edges.items():
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range")
            if length < 0 or math.isnan(length):
                raise GraphError(f"edge ({u}, {v}) has invalid length {length}")
            key = (u, v) if u < v else (v, u)
            if key in clean:
                raise GraphError(f"duplicate edge {key}")
            clean[key] = float(length)
        object.__setattr__(self, "edges", dict(sorted(clean.items())))
        labels = tuple(self.labels) or (None,) * self.n
        if len(labels) != self.n:
            raise GraphError("labels must cover every node")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, float]], labels=()) -> WeightedGraph:
        mapping = {}
        for u, v, length in edges:
            key = (u, v) if u < v else (v, u)
            if key in mapping:
                raise GraphError(f"duplicate edge {key}")
            mapping[key] = length
        return cls(n, mapping, tuple(labels))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def label(self, node: int) -> str:
        name = self.labels[node]
        return name if name is not None else str(node)

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest member."""
        adj = self.adjacency()
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            seen[start] = True
            stack, comp = [start], []
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        stack.append(v)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1


class DistanceMatrix:
    """Read-only matrix of shortest-path lengths."""

    def __init__(self, matrix):
        arr = np.array(matrix, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise GraphError("distance matrix must be square")
        arr.setflags(write=False)
        self.matrix = arr

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, u: int, v: int) -> float:
        return float(self.matrix[u, v])

    @property
    def diameter(self) -> float:
        return float(self.matrix.max())

    def subset_diameter(self, members) -> float:
        idx = np.asarray(members, dtype=np.int64)
        if idx.size < 2:
            return 0.0
        return float(self.matrix[np.ix_(idx, idx)].max())

    def __eq__(self, other):
        return isinstance(other, DistanceMatrix) and np.array_equal(self.matrix, other.matrix)

    def __repr__(self):
        return f"DistanceMatrix(n={self.n})"


def load_graph(text: str) -> WeightedGraph:
    """Parse the edge-list format.

    First non-comment line is ``N``; each further non-empty line is
    ``u v length`` with distinct ids in ``0..N-1``. ``#`` starts a comment line;
    ``# label <id> <name>`` comments carry optional node labels.
    """
    n = None
    edges: dict[tuple[int, int], float] = {}
    labels: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split(None, 2)
            if len(parts) == 3 and parts[0] == "label":
                try:
                    labels[int(parts[1])] = parts[2].strip()
                except ValueError:
                    raise MalformedLineError(lineno, f"bad label directive {raw!r}") from None
            continue
        if n is None:
            try:
                n = int(line)
            except ValueError:
                raise MalformedLineError(lineno, f"expected node count, got {raw!r}") from None
            if n < 1:
                raise MalformedLineError(lineno, "node count must be positive")
            continue
        parts = line.split()
        if len(parts) != 3:
            raise MalformedLineError(lineno, f"expected 'u v length', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            length = float(parts[2])
        except ValueError:
            raise MalformedLineError(lineno, f"unparseable edge {raw!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise NodeRangeError(lineno, f"node id out of range 0..{n - 1}")
        if u == v:
            raise MalformedLineError(lineno, f"self-loop on node {u}")
        if u > v:
            u, v = v, u
        if math.isnan(length) or math.isinf(length):
            raise MalformedLineError(lineno, f"length must be finite, got {parts[2]}")
        if length < 0:
            raise NegativeLengthError(lineno, f"negative length {length}")
        if (u, v) in edges:
            raise DuplicateEdgeError(lineno, f"duplicate edge ({u}, {v})")
        edges[(u, v)] = length
    if n is None:
        raise MalformedLineError(0, "missing node count")
    for node in labels:
        if not 0 <= node < n:
            raise NodeRangeError(0, f"label for unknown node {node}")
    return WeightedGraph(n, edges, tuple(labels.get(i) for i in range(n)))


def dump_graph(g: WeightedGraph) -> str:
    lines = [str(g.n)]
    for node, name in enumerate(g.labels):
        if name is not None:
            lines.append(f"# label {node} {name}")
    for (u, v), length in g.edges.items():
        lines.append(f"{u} {v} {length!r}")
    return "\n".join(lines) + "\n"


def all_pairs_distances(g: WeightedGraph) -> DistanceMatrix:
    """Exact shortest-path lengths; rejects disconnected graphs."""
    if not g.is_connected():
        raise DisconnectedGraphError(f"graph has {len(g.components())} components")
    dist = np.full((g.n, g.n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for (u, v), length in g.edges.items():
        if length < dist[u, v]:
            dist[u, v] = dist[v, u] = length
    kernels.floyd_warshall(dist)
    return DistanceMatrix(dist)


def random_graph(n: int, edge_probability: float, seed: int) -> WeightedGraph:
    """Erdos-Renyi graph with unit edges, patched to be connected.

    Disconnected draws are joined by adding one unit edge between the
    smallest nodes of consecutive components.
    """
    if n < 1:
        raise GraphError("n must be >= 1")
    if not 0.0 <= edge_probability <= 1.0:
        raise GraphError("edge_probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = {}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < edge_probability:
                edges[(u, v)] = 1.0
    g = WeightedGraph(n, edges)
    comps = g.components()
    if len(comps) > 1:
        for a, b in zip(comps, comps[1:]):
            edges[(a[0], b[0])] = 1.0
        g = WeightedGraph(n, edges)
    return g


def outdegrees(g: WeightedGraph) -> list[tuple[int, int]]:
    """(node, degree) pairs, highest degree first, ties by node id."""
    degree = [0] * g.n
    for u, v in g.edges:
        degree[u] += 1
        degree[v] += 1
    return sorted(enumerate(degree), key=lambda item: (-item[1], item[0]))


def star_graph(leaves: int) -> WeightedGraph:
    """Hub 0 with unit spokes to nodes 1..leaves."""
    return WeightedGraph(leaves + 1, {(0, i): 1.0 for i in range(1, leaves + 1)})


def path_graph(n: int) -> WeightedGraph:
    return WeightedGraph(n, {(i, i + 1): 1.0 for i in range(n - 1)})


# Seven-node unit-length tree used for the 1-HST walk-through. Only the
# final {C,E,F,G} / {A,B,D} split is documented, so the edge set is a
# transcription that reproduces it: C hubs E, F, G; B hubs A, D; D-E bridges.
FIGURE2_LABELS = ("A", "B", "C", "D", "E", "F", "G")
FIGURE2_EDGES = (("A", "B"), ("B", "D"), ("C", "E"), ("C", "F"), ("C", "G"), ("D", "E"))


def figure2_graph() -> WeightedGraph:
    index = {name: i for i, name in enumerate(FIGURE2_LABELS)}
    edges = {tuple(sorted((index[a], index[b]))): 1.0 for a, b in FIGURE2_EDGES}
    return WeightedGraph(len(FIGURE2_LABELS), edges, FIGURE2_LABELS)
