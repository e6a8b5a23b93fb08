"""Iridium constant-hop content location."""
from cdnlab.iridium.ids import hash_id, in_arc
from cdnlab.iridium.ring import (
    F_POLICIES,
    REGULAR,
    SUPERNODE,
    ChangeReport,
    DepartureRefused,
    EmptyRingError,
    JoinError,
    NodeRecord,
    PromotionError,
    RingError,
    RingState,
    SupernodeState,
    check_ring,
    expected_supernode_storage,
    figure6_ring,
    key_ids,
    node_address,
    stale_references,
    supernode_target,
    synthetic_nodes,
)

__all__ = [
    "F_POLICIES",
    "REGULAR",
    "SUPERNODE",
    "ChangeReport",
    "DepartureRefused",
    "EmptyRingError",
    "JoinError",
    "NodeRecord",
    "PromotionError",
    "RingError",
    "RingState",
    "SupernodeState",
    "check_ring",
    "expected_supernode_storage",
    "figure6_ring",
    "hash_id",
    "in_arc",
    "key_ids",
    "node_address",
    "stale_references",
    "supernode_target",
    "synthetic_nodes",
]
