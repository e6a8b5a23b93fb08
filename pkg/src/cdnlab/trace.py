"""Per-lookup traces shared by the Iridium and Chord implementations."""
from __future__ import annotations

from dataclasses import dataclass, field

FOUND = "found"
TIMEOUT_RETRY = "timeout-retry"
FAILED = "failed"


@dataclass
class LookupTrace:
    origin: int
    key: int
    forward_path: list[int] = field(default_factory=list)
    return_path: list[int] = field(default_factory=list)
    messages: int = 0
    timeouts: int = 0
    outcome: str = FOUND
    holder: int | None = None
    # messages sent to dead nodes; they expire instead of being delivered
    expired: int = 0

    @property
    def hops(self) -> int:
        """Forward overlay hops (edges on the forward path)."""
        return max(len(self.forward_path) - 1, 0)

    @property
    def delivered(self) -> int:
        return self.messages - self.expired

    @property
    def succeeded(self) -> bool:
        return self.outcome != FAILED

    def outcome_label(self) -> str:
        if self.outcome == TIMEOUT_RETRY:
            return f"{TIMEOUT_RETRY}({self.timeouts})"
        return self.outcome

    def to_dict(self) -> dict:
        return {
            "origin": self.origin,
            "key": self.key,
            "forward_path": list(self.forward_path),
            "return_path": list(self.return_path),
            "messages": self.messages,
            "timeouts": self.timeouts,
            "outcome": self.outcome_label(),
            "holder": self.holder,
        }
