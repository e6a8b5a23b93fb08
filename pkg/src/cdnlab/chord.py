"""Static-snapshot Chord ring used as the O(log N) lookup baseline."""
from __future__ import annotations

from dataclasses import dataclass

from cdnlab.iridium.ids import clockwise_distance, first_at_or_after, in_arc
from cdnlab.trace import LookupTrace


class ChordError(ValueError):
    pass


@dataclass(frozen=True)
class ChordNode:
    id: int
    fingers: tuple[int, ...]  # fingers[i - 1] = successor(id + 2^(i-1))
    successor: int
    predecessor: int


class ChordRing:
    def __init__(self, nodes: dict[int, ChordNode], m: int):
        self.nodes = nodes
        self.m = m
        self.space = 1 << m
        self.ids = sorted(nodes)

    def successor_of(self, key: int) -> int:
        return first_at_or_after(self.ids, key % self.space)

    def __len__(self):
        return len(self.ids)

    def snapshot(self) -> dict:
        return {
            "m": self.m,
            "nodes": [
                {"id": n.id, "fingers": list(n.fingers), "successor": n.successor,
                 "predecessor": n.predecessor}
                for n in (self.nodes[i] for i in self.ids)
            ],
        }


def build_chord_ring(node_ids, m: int) -> ChordRing:
    ids = list(node_ids)
    if not ids:
        raise ChordError("ring needs at least one node")
    if len(set(ids)) != len(ids):
        raise ChordError("duplicate node identifiers")
    space = 1 << m
    if any(not 0 <= i < space for i in ids):
        raise ChordError(f"identifiers must lie in [0, 2^{m})")
    ids.sort()
    nodes = {}
    for pos, n in enumerate(ids):
        fingers = tuple(first_at_or_after(ids, (n + (1 << i)) % space) for i in range(m))
        nodes[n] = ChordNode(n, fingers, fingers[0], ids[pos - 1])
    return ChordRing(nodes, m)


def _closest_preceding(node: ChordNode, key: int) -> int:
    for finger in reversed(node.fingers):
        if finger != node.id and in_arc(finger, node.id, key) and finger != key:
            return finger
    return node.successor


def chord_lookup(ring: ChordRing, origin: int, key: int) -> LookupTrace:
    """Iterative lookup: each hop asks the current node for the finger that
    most closely precedes the key, one message per hop."""
    if origin not in ring.nodes:
        raise ChordError(f"origin {origin} is not in the ring")
    key %= ring.space
    trace = LookupTrace(origin=origin, key=key, forward_path=[origin])
    current = ring.nodes[origin]
    if in_arc(key, current.predecessor, current.id) or len(ring) == 1:
        trace.holder = origin
    else:
        while True:
            if in_arc(key, current.id, current.successor):
                trace.forward_path.append(current.successor)
                trace.holder = current.successor
                break
            nxt = _closest_preceding(current, key)
            trace.forward_path.append(nxt)
            current = ring.nodes[nxt]
    trace.return_path = [trace.holder, origin] if trace.holder != origin else [origin]
    trace.messages = trace.hops
    return trace


def keys_per_node(ring: ChordRing, keys) -> dict[int, int]:
    counts = dict.fromkeys(ring.ids, 0)
    for k in keys:
        counts[ring.successor_of(k)] += 1
    return counts


def distance_to_key(ring: ChordRing, node: int, key: int) -> int:
    return clockwise_distance(node, key % ring.space, ring.space)


__all__ = [
    "ChordError",
    "ChordNode",
    "ChordRing",
    "build_chord_ring",
    "chord_lookup",
    "keys_per_node",
    "distance_to_key",
]
