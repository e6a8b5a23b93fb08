"""Identifier circle arithmetic."""
from __future__ import annotations

import hashlib
from bisect import bisect_left


def hash_id(data: bytes | str, m: int) -> int:
    """Top ``m`` bits of the SHA-1 digest of ``data``."""
    if not 1 <= m <= 160:
        raise ValueError(f"m must lie in 1..160, got {m}")
    if isinstance(data, str):
        data = data.encode("utf-8")
    digest = int.from_bytes(hashlib.sha1(data).digest(), "big")
    return digest >> (160 - m)


def first_at_or_after(ordered: list[int], x: int) -> int:
    """First element clockwise from ``x`` (inclusive) in a sorted id list."""
    i = bisect_left(ordered, x)
    return ordered[i] if i < len(ordered) else ordered[0]


def clockwise_from(ordered: list[int], x: int, count: int) -> list[int]:
    """Up to ``count`` distinct ids clockwise from ``x`` inclusive."""
    if not ordered:
        return []
    count = min(count, len(ordered))
    start = bisect_left(ordered, x)
    size = len(ordered)
    return [ordered[(start + i) % size] for i in range(count)]


def clockwise_after(ordered: list[int], x: int, count: int) -> list[int]:
    """Up to ``count`` ids strictly after ``x`` going clockwise."""
    return clockwise_from(ordered, x + 1, count) if ordered else []


def predecessors(ordered: list[int], x: int, count: int) -> list[int]:
    """Up to ``count`` ids strictly before ``x`` going counter-clockwise."""
    if not ordered:
        return []
    count = min(count, len(ordered))
    start = bisect_left(ordered, x) - 1
    size = len(ordered)
    return [ordered[(start - i) % size] for i in range(count)]


def in_arc(x: int, lo: int, hi: int) -> bool:
    """True when ``x`` lies in the clockwise half-open arc ``(lo, hi]``.

    ``lo == hi`` denotes the full circle.
    """
    if lo < hi:
        return lo < x <= hi
    return x > lo or x <= hi


def clockwise_distance(a: int, b: int, space: int) -> int:
    return (b - a) % space
