import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdnlab.chord import (
    ChordError,
    build_chord_ring,
    chord_lookup,
    distance_to_key,
    keys_per_node,
)

FIG5 = [0, 1, 3]


def test_three_node_ring_fingers():
    ring = build_chord_ring(FIG5, m=3)
    assert ring.nodes[0].fingers == (1, 3, 0)
    assert ring.nodes[1].fingers == (3, 3, 0)
    assert ring.nodes[3].fingers == (0, 0, 0)
    assert ring.nodes[0].predecessor == 3


@pytest.mark.parametrize("key,holder", [(1, 1), (2, 3), (6, 0)])
def test_three_node_ring_keys(key, holder):
    ring = build_chord_ring(FIG5, m=3)
    assert ring.successor_of(key) == holder
    for origin in FIG5:
        assert chord_lookup(ring, origin, key).holder == holder


def test_single_node_ring_owns_everything():
    ring = build_chord_ring([5], m=4)
    assert ring.nodes[5].fingers == (5,) * 4
    for key in range(16):
        t = chord_lookup(ring, 5, key)
        assert t.holder == 5 and t.hops == 0 and t.messages == 0


def test_origin_holding_key_takes_zero_hops():
    ring = build_chord_ring(FIG5, m=3)
    t = chord_lookup(ring, 3, 2)
    assert t.hops == 0 and t.forward_path == [3] and t.return_path == [3]


def test_first_finger_is_successor():
    rng = random.Random(3)
    ring = build_chord_ring(rng.sample(range(1 << 12), 50), m=12)
    for node in ring.nodes.values():
        assert node.fingers[0] == node.successor


def test_rejects_bad_membership():
    with pytest.raises(ChordError):
        build_chord_ring([], m=3)
    with pytest.raises(ChordError):
        build_chord_ring([1, 1], m=3)
    with pytest.raises(ChordError):
        build_chord_ring([8], m=3)
    with pytest.raises(ChordError):
        chord_lookup(build_chord_ring([1], m=3), 2, 0)


def test_log_hops_at_1024():
    rng = random.Random(7)
    m = 24
    ring = build_chord_ring(rng.sample(range(1 << m), 1024), m)
    hops = [chord_lookup(ring, rng.choice(ring.ids), rng.randrange(1 << m)).hops
            for _ in range(3000)]
    mean = sum(hops) / len(hops)
    assert 0.3 * math.log2(1024) <= mean <= 1.5 * math.log2(1024)
    assert max(hops) <= m


def test_key_counts_and_distance():
    ring = build_chord_ring(FIG5, m=3)
    assert keys_per_node(ring, range(8)) == {0: 5, 1: 1, 3: 2}
    assert distance_to_key(ring, 3, 1) == 6


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1023), min_size=1, max_size=40, unique=True),
       st.integers(0, 1023), st.data())
def test_lookup_finds_successor(ids, key, data):
    ring = build_chord_ring(ids, m=10)
    origin = data.draw(st.sampled_from(sorted(ids)))
    t = chord_lookup(ring, origin, key)
    assert t.holder == ring.successor_of(key)
    assert t.hops <= 10
    assert t.messages == t.hops
    # each hop strictly closes the clockwise gap to the key
    gaps = [distance_to_key(ring, n, key) for n in t.forward_path[:-1]]
    assert gaps == sorted(gaps, reverse=True) and len(set(gaps)) == len(gaps)
