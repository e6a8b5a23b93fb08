"""A minimal discrete-event queue ordered by (time, insertion sequence)."""
from __future__ import annotations

import heapq
from itertools import count


class EventQueue:
    def __init__(self):
        self._heap = []
        self._seq = count()
        self.now = 0.0

    def schedule(self, time: float, kind: str, payload=None):
        if time < self.now:
            raise ValueError(f"cannot schedule at {time} before now={self.now}")
        heapq.heappush(self._heap, (time, next(self._seq), kind, payload))

    def pop(self):
        time, seq, kind, payload = heapq.heappop(self._heap)
        self.now = time
        return time, seq, kind, payload

    def peek_time(self):
        return self._heap[0][0] if self._heap else None

    def __len__(self):
        return len(self._heap)

    def __bool__(self):
        return bool(self._heap)
