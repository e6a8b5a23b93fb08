"""k-HST partition trees and the greedy center selection on top of them."""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field

import numpy as np

from cdnlab.placement.problem import PlacementError, PlacementResult, as_distances
from cdnlab.topology import DistanceMatrix


@dataclass
class PartitionNode:
    members: tuple[int, ...]
    diameter: float
    anchor: int
    children: list[PartitionNode] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def link_length(self) -> float:
        """Length of the tree link from this virtual node to each child."""
        return self.diameter / 2.0

    def walk(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


@dataclass
class PartitionTree:
    root: PartitionNode
    k_factor: float
    seed: int
    distances: DistanceMatrix

    def levels(self) -> list[list[PartitionNode]]:
        out, frontier = [], [self.root]
        while frontier:
            out.append(frontier)
            frontier = [c for node in frontier for c in node.children]
        return out


def build_khst(g, k: float, seed: int) -> PartitionTree:
    """Randomised recursive partitioning into a k-HST.

    For a partition of diameter ``delta``, children are carved as balls
    around uniformly chosen anchors with radius drawn from
    ``[delta / (4k), delta / (2k))``, so every child diameter is below
    ``delta / k``.
    """
    if k < 1:
        raise PlacementError("k must be >= 1")
    dist = as_distances(g)
    mat = dist.matrix
    rng = random.Random(seed)
    everyone = tuple(range(dist.n))
    root = PartitionNode(everyone, dist.subset_diameter(everyone), everyone[0])
    stack = [root]
    while stack:
        node = stack.pop()
        if len(node.members) == 1:
            continue
        node.children = _split(node, mat, k, rng)
        stack.extend(reversed(node.children))
    return PartitionTree(root, float(k), seed, dist)


def _split(node: PartitionNode, mat: np.ndarray, k: float, rng: random.Random):
    delta = node.diameter
    if delta == 0.0:
        # zero-length links: no radius separates these members
        return [PartitionNode((m,), 0.0, m) for m in node.members]
    lo, hi = delta / (4.0 * k), delta / (2.0 * k)
    remaining = list(node.members)
    children = []
    while remaining:
        anchor = remaining[rng.randrange(len(remaining))]
        radius = rng.uniform(lo, hi)
        row = mat[anchor]
        ball = tuple(v for v in remaining if row[v] <= radius)
        taken = set(ball)
        remaining = [v for v in remaining if v not in taken]
        sub = mat[np.ix_(ball, ball)]
        children.append(PartitionNode(ball, float(sub.max()) if len(ball) > 1 else 0.0, anchor))
    return children


def one_center(dist: DistanceMatrix, members) -> int:
    """Member minimising the farthest distance to the rest; ties by id."""
    idx = np.asarray(sorted(members), dtype=np.int64)
    ecc = dist.matrix[np.ix_(idx, idx)].max(axis=1)
    return int(idx[int(np.argmin(ecc))])


def _heap_key(node: PartitionNode):
    return (-node.diameter, node.is_leaf, node.members[0])


def _select(tree: PartitionTree, stop) -> list[PartitionNode]:
    heap = [(_heap_key(tree.root), 0, tree.root)]
    counter = 1
    while heap and stop(heap):
        _, _, head = heapq.heappop(heap)
        for child in head.children:
            heapq.heappush(heap, (_heap_key(child), counter, child))
            counter += 1
    chosen = [item[2] for item in heap]
    chosen.sort(key=lambda p: p.members[0])
    return chosen


def _result(tree, chosen, algorithm, params) -> PlacementResult:
    centers = [one_center(tree.distances, p.members) for p in chosen]
    objective = max(p.diameter for p in chosen)
    params = dict(params, k=tree.k_factor, seed=tree.seed, partition_count=len(chosen))
    return PlacementResult(
        centers=tuple(sorted(centers)),
        objective=objective,
        algorithm=algorithm,
        parameters=params,
        partitions=tuple(p.members for p in chosen),
    )


def khst_centers_by_diameter(tree: PartitionTree, D: float) -> PlacementResult:
    """Split the widest partition until every partition has diameter <= D."""
    if D < 0:
        raise PlacementError("D must be nonnegative")
    # heap head is the widest partition; leaves always satisfy the bound
    chosen = _select(tree, lambda heap: heap[0][2].diameter > D and not heap[0][2].is_leaf)
    return _result(tree, chosen, "khst-d", {"D": D})


def khst_centers_by_budget(tree: PartitionTree, K: int) -> PlacementResult:
    """Split the widest partition while fewer than K partitions exist.

    The last split may overshoot K; the actual count is reported in
    ``parameters["partition_count"]``.
    """
    n = tree.distances.n
    if not 1 <= K <= n:
        raise PlacementError(f"K must lie in 1..{n}")
    chosen = _select(tree, lambda heap: len(heap) < K)
    return _result(tree, chosen, "khst-k", {"K": K})


def check_tree(tree: PartitionTree) -> list[str]:
    """Return a list of violated invariants (empty when the tree is valid)."""
    problems = []
    dist = tree.distances
    if tree.root.members != tuple(range(dist.n)):
        problems.append("root does not cover every node")
    for node in tree.root.walk():
        true_diam = dist.subset_diameter(node.members)
        if not np.isclose(true_diam, node.diameter, rtol=1e-12, atol=0.0):
            problems.append(f"partition {node.members}: stored diameter {node.diameter} != {true_diam}")
        if node.anchor not in node.members:
            problems.append(f"partition {node.members}: anchor {node.anchor} not a member")
        if node.is_leaf:
            if len(node.members) != 1:
                problems.append(f"leaf {node.members} holds more than one node")
            continue
        if node.diameter > 0 and len(node.members) == 1:
            problems.append(f"singleton {node.members} has positive diameter")
        union = [m for c in node.children for m in c.members]
        if sorted(union) != sorted(node.members) or len(union) != len(set(union)):
            problems.append(f"children of {node.members} do not partition it")
        for child in node.children:
            if tree.k_factor > 1 and child.diameter > node.diameter / tree.k_factor * (1 + 1e-9):
                problems.append(f"child {child.members} too wide for k={tree.k_factor}")
            if len(child.members) >= len(node.members):
                problems.append(f"child {child.members} does not shrink its parent")
        if node.link_length != node.diameter / 2.0:
            problems.append("link length is not half the partition diameter")
    for node in tree.root.walk():
        if node.is_leaf != (len(node.members) == 1):
            problems.append(f"leaf status mismatch at {node.members}")
    return problems
