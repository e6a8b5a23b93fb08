"""Per-run metrics and their CSV / JSON renderings."""
from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import dataclass, field

from cdnlab.trace import FAILED, FOUND, TIMEOUT_RETRY

CSV_COLUMNS = ("time", "origin", "key", "hops", "messages", "outcome")


@dataclass
class LookupRecord:
    time: float
    origin: int
    key: int
    hops: int
    messages: int
    outcome: str  # outcome label, e.g. "timeout-retry(1)"
    timeouts: int = 0
    expired: int = 0
    latency: float = 0.0

    @property
    def kind(self) -> str:
        return self.outcome.split("(", 1)[0]


@dataclass
class ChurnRecord:
    time: float
    event: str
    node: int
    keys_moved: int
    messages: int


@dataclass
class MetricsReport:
    scenario: dict
    lookups: list[LookupRecord] = field(default_factory=list)
    churn: list[ChurnRecord] = field(default_factory=list)
    supernode_load: dict[int, int] = field(default_factory=dict)
    final_nodes: int = 0
    final_supernodes: int = 0
    promotions: int = 0
    runtime: float = 0.0  # wall clock; never part of the deterministic outputs

    # ------------------------------------------------------------- tallies

    def tallies(self) -> dict[str, int]:
        out = {FOUND: 0, TIMEOUT_RETRY: 0, FAILED: 0}
        for rec in self.lookups:
            out[rec.kind] += 1
        return out

    def hops(self) -> list[int]:
        return [r.hops for r in self.lookups]

    def summary(self) -> dict:
        hops = self.hops()
        tallies = self.tallies()
        total = len(self.lookups)
        messages = sum(r.messages for r in self.lookups)
        expired = sum(r.expired for r in self.lookups)
        moved = [c.keys_moved for c in self.churn]
        return {
            "protocol": self.scenario.get("protocol"),
            "N": self.scenario.get("N"),
            "f_policy": self.scenario.get("f_policy"),
            "seed": self.scenario.get("seed"),
            "lookups": total,
            "found": tallies[FOUND],
            "timeout_retry": tallies[TIMEOUT_RETRY],
            "failed": tallies[FAILED],
            "success_rate": (total - tallies[FAILED]) / total if total else 1.0,
            "mean_hops": statistics.fmean(hops) if hops else 0.0,
            "median_hops": statistics.median(hops) if hops else 0,
            "max_hops": max(hops, default=0),
            "messages": messages,
            "messages_delivered": messages - expired,
            "messages_expired": expired,
            "mean_latency": statistics.fmean(r.latency for r in self.lookups) if hops else 0.0,
            "churn_events": len(self.churn),
            "keys_moved": sum(moved),
            "mean_keys_moved": statistics.fmean(moved) if moved else 0.0,
            "promotions": self.promotions,
            "final_nodes": self.final_nodes,
            "final_supernodes": self.final_supernodes,
            "max_supernode_load": max(self.supernode_load.values(), default=0),
        }

    # ------------------------------------------------------------- output

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.lookups:
            writer.writerow((repr(r.time), r.origin, r.key, r.hops, r.messages, r.outcome))
        return buf.getvalue()

    def summary_json(self) -> str:
        data = {
            "scenario": self.scenario,
            "summary": self.summary(),
            "supernode_load": {str(k): v for k, v in sorted(self.supernode_load.items())},
        }
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    def human(self) -> str:
        s = self.summary()
        width = max(len(k) for k in s)
        return "".join(f"{k:<{width}}  {v}\n" for k, v in s.items())


def format_table(rows: list[dict], fmt: str = "human") -> str:
    """Render summary rows as CSV, JSON or an aligned text table."""
    if not rows:
        return ""
    cols = list(rows[0])
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, cols, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()

    def cell(v):
        return f"{v:.3f}" if isinstance(v, float) else str(v)

    text = [[cell(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(t[i]) for t in text)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(t, widths)) for t in text]
    return "\n".join(lines) + "\n"
