"""Scenario execution, protocol comparison and f(N) sweeps."""
from __future__ import annotations

import math
import random
import time as _time
from bisect import insort
from concurrent.futures import ThreadPoolExecutor
from itertools import accumulate

from cdnlab.chord import build_chord_ring, chord_lookup
from cdnlab.iridium.ring import (
    F_POLICIES,
    DepartureRefused,
    JoinError,
    PromotionError,
    RingState,
    key_ids,
    synthetic_nodes,
)
from cdnlab.sim.engine import EventQueue
from cdnlab.sim.report import ChurnRecord, LookupRecord, MetricsReport
from cdnlab.sim.scenario import Scenario

CHURN_KINDS = ("join", "leave", "fail", "super_leave", "super_fail")


class Workload:
    """Seeded lookup and churn streams shared by both protocols, so a
    churn-free scenario issues the same lookups whatever the protocol."""

    def __init__(self, s: Scenario):
        self.s = s
        self.keys = key_ids(s.keys, s.m)
        self.lookup_rng = random.Random(f"{s.seed}:lookups")
        self.churn_rng = random.Random(f"{s.seed}:churn")
        self.latency_rng = random.Random(f"{s.seed}:latency")
        self.jitter_rng = random.Random(f"{s.seed}:jitter")
        self.fault_rng = random.Random(f"{s.seed}:faults")
        self._cum = None
        if s.popularity == "zipf" and self.keys:
            weights = [1.0 / (rank ** s.zipf_s) for rank in range(1, len(self.keys) + 1)]
            self._cum = list(accumulate(weights))

    def next_lookup_gap(self) -> float:
        return self.lookup_rng.expovariate(self.s.lookup_rate)

    def pick_key(self) -> int:
        if self._cum is not None:
            return self.lookup_rng.choices(self.keys, cum_weights=self._cum)[0]
        return self.keys[self.lookup_rng.randrange(len(self.keys))]

    def pick(self, rng: random.Random, items: list[int]) -> int:
        return items[rng.randrange(len(items))]

    def next_churn(self):
        rates = [getattr(self.s, f"{k}_rate") for k in CHURN_KINDS]
        total = sum(rates)
        gap = self.churn_rng.expovariate(total)
        kind = self.churn_rng.choices(CHURN_KINDS, weights=rates)[0]
        return gap, kind

    def message_delay(self) -> float:
        if self.s.latency == "constant":
            return self.s.latency_low
        return self.latency_rng.uniform(self.s.latency_low, self.s.latency_high)


class _IridiumAdapter:
    def __init__(self, s: Scenario, w: Workload):
        self.s = s
        self.ring = RingState.random(s.N, m=s.m, p=s.p, q=s.q, f_policy=s.f_policy, seed=s.seed)
        for k in w.keys:
            self.ring.add_key(k)
        self.promotions = 0

    def live(self) -> list[int]:
        return self.ring._live

    def regulars(self) -> list[int]:
        supers = set(self.ring._live_super)
        return [n for n in self.ring._live if n not in supers]

    def supernodes(self) -> list[int]:
        return self.ring._live_super

    def is_supernode(self, nid: int) -> bool:
        return nid in self.ring.supers and self.ring.is_alive(nid)

    def lookup(self, origin, key):
        return self.ring.lookup(origin, key)

    def holder_map(self) -> dict[int, tuple]:
        return dict(self.ring.keys)

    def fail_supernode(self, sid):
        self.ring.fail_supernode(sid)

    def apply(self, kind, node, now, bootstrap=None, capacity=1.0, address=None):
        r = self.ring
        if kind == "join":
            return r.join(node, bootstrap, address=address, capacity=capacity, now=now)
        if kind == "leave":
            return r.leave_regular(node)
        if kind == "fail":
            return r.fail_regular(node)
        if kind == "super_leave":
            return r.leave_supernode(node)
        return r.fail_supernode(node)

    def maybe_promote(self, now):
        """Promote when some bound set exceeds twice the target size N/f(N)."""
        r = self.ring
        n = r.node_count()
        target = n / max(F_POLICIES[self.s.f_policy](n), 1.0)
        largest = max((len(r.bound_set(s)) for s in r._live_super), default=0)
        if largest > 2 * target:
            try:
                r.select_supernode("threshold", now=now)
                self.promotions += 1
            except PromotionError:
                pass


class _ChordAdapter:
    """Static Chord snapshot rebuilt after every membership change."""

    def __init__(self, s: Scenario, w: Workload):
        self.s = s
        ids, _, _ = synthetic_nodes(s.N, s.m, s.seed)
        self.ids = sorted(ids)
        self.keys = w.keys
        self.ring = build_chord_ring(self.ids, s.m)
        self.promotions = 0

    def live(self):
        return self.ids

    def regulars(self):
        return self.ids

    def supernodes(self):
        return []

    def is_supernode(self, nid):
        return False

    def lookup(self, origin, key):
        return chord_lookup(self.ring, origin, key)

    def holder_map(self):
        return {k: (self.ring.successor_of(k),) for k in self.keys}

    def fail_supernode(self, sid):
        raise DepartureRefused("chord has no supernodes")

    def apply(self, kind, node, now, **_):
        if kind == "join":
            insort(self.ids, node)
        elif kind in ("leave", "fail"):
            if len(self.ids) <= 1:
                raise DepartureRefused("the last node cannot leave")
            self.ids.remove(node)
        else:
            raise DepartureRefused("chord has no supernodes")
        self.ring = build_chord_ring(self.ids, self.s.m)
        return None

    def maybe_promote(self, now):
        pass


def _moved(before: dict, after: dict) -> int:
    return sum(1 for k, h in before.items() if after.get(k) != h)


def run_scenario(s: Scenario) -> MetricsReport:
    """Drive one protocol through the scenario's workload.

    Lookups are atomic at their issue time; their latency is the sum of
    per-message delays plus one timeout per expired message. Churn events
    and delayed rebinds interleave with lookups in (time, sequence) order.
    """
    started = _time.perf_counter()
    w = Workload(s)
    proto = _IridiumAdapter(s, w) if s.protocol == "iridium" else _ChordAdapter(s, w)
    report = MetricsReport(scenario=s.to_dict())
    q = EventQueue()
    next_address = s.N * 4  # join addresses start well past the initial ones

    if s.supernode_fail_prob > 0 and s.protocol == "iridium":
        for sid in list(proto.supernodes()):
            if w.fault_rng.random() < s.supernode_fail_prob and len(proto.supernodes()) > 1:
                proto.fail_supernode(sid)

    if s.lookup_rate > 0 and w.keys:
        q.schedule(w.next_lookup_gap(), "lookup")
    if s.churn_rate > 0:
        gap, kind = w.next_churn()
        q.schedule(gap, "churn", kind)
    if s.refresh_interval > 0 and s.protocol == "iridium":
        q.schedule(s.refresh_interval, "refresh")

    issued = 0
    while q:
        now, _, kind, payload = q.pop()
        if now > s.duration:
            break
        if kind == "lookup":
            live = proto.live()
            origin = w.pick(w.lookup_rng, live)
            key = w.pick_key()
            trace = proto.lookup(origin, key)
            latency = 0.0
            for _ in range(trace.delivered):
                latency += w.message_delay()
            latency += trace.timeouts * s.timeout
            report.lookups.append(LookupRecord(
                now, origin, key, trace.hops, trace.messages, trace.outcome_label(),
                trace.timeouts, trace.expired, latency))
            for hop in trace.forward_path[1:]:
                if proto.is_supernode(hop):
                    report.supernode_load[hop] = report.supernode_load.get(hop, 0) + 1
            issued += 1
            if s.lookups and issued >= s.lookups:
                break  # the cap ends the run
            q.schedule(now + w.next_lookup_gap(), "lookup")
        elif kind == "churn":
            _churn(proto, w, s, q, report, now, payload, next_address)
            if payload == "join":
                next_address += 1
            gap, nxt = w.next_churn()
            q.schedule(now + gap, "churn", nxt)
        elif kind == "rebind":
            proto.ring.complete_rebind(payload)
        elif kind == "refresh":
            proto.ring.sweep()
            q.schedule(now + s.refresh_interval, "refresh")

    report.final_nodes = len(proto.live())
    report.final_supernodes = len(proto.supernodes())
    report.promotions = proto.promotions
    report.runtime = _time.perf_counter() - started
    return report


def _churn(proto, w, s, q, report, now, kind, address_index):
    rng = w.churn_rng
    if kind == "join":
        live = proto.live()
        # crashed nodes stay on record, so their ids remain taken
        ids, addrs, caps = synthetic_nodes(1, s.m, s.seed, start=address_index,
                                           taken=proto.ring.nodes)
        node = ids[0]
        extra = {"bootstrap": w.pick(rng, live), "capacity": caps[node], "address": addrs[node]}
    else:
        pool = proto.supernodes() if kind.startswith("super") else proto.regulars()
        if not pool:
            return
        node = w.pick(rng, pool)
        extra = {}
    before = proto.holder_map()
    try:
        change = proto.apply(kind, node, now, **extra)
    except (DepartureRefused, JoinError):
        return
    after = proto.holder_map()
    messages = change.messages if change is not None else 0
    report.churn.append(ChurnRecord(now, kind, node, _moved(before, after), messages))
    if change is not None:
        for n in change.rebinds:
            q.schedule(now + w.jitter_rng.uniform(0, s.jitter), "rebind", n)
    proto.maybe_promote(now)


def _summary_row(s: Scenario, report: MetricsReport) -> dict:
    full = report.summary()
    return {
        "N": s.N,
        "protocol": s.protocol,
        "f_policy": s.f_policy,
        "lookups": full["lookups"],
        "mean_hops": full["mean_hops"],
        "median_hops": full["median_hops"],
        "max_hops": full["max_hops"],
        "success_rate": full["success_rate"],
        "mean_messages": full["messages"] / full["lookups"] if full["lookups"] else 0.0,
    }


def compare_protocols(base: Scenario, sizes=None, workers: int = 1):
    """Run Iridium and Chord on matched workloads for each N.

    Returns ``(reports, rows)`` where ``reports[(N, protocol)]`` is the
    full report and ``rows`` is the summary table in (N, protocol) order.
    """
    sizes = list(sizes) if sizes else [base.N]
    jobs = [base.replace(N=n, protocol=proto) for n in sizes for proto in ("iridium", "chord")]
    results = _run_all(jobs, workers)
    reports = {(j.N, j.protocol): r for j, r in zip(jobs, results)}
    rows = [_summary_row(j, r) for j, r in zip(jobs, results)]
    return reports, rows


def sweep(base: Scenario, f_policies, workers: int = 4):
    """One isolated run per f(N) policy, executed on a thread pool."""
    jobs = [base.replace(f_policy=f) for f in f_policies]
    results = _run_all(jobs, workers)
    rows = []
    for j, r in zip(jobs, results):
        row = _summary_row(j, r)
        row["supernodes"] = r.final_supernodes
        row["max_supernode_load"] = max(r.supernode_load.values(), default=0)
        rows.append(row)
    return rows


def _run_all(jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [run_scenario(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_scenario, jobs))


def expected_failure_rate(f: float, q: int) -> float:
    """All q window supernodes dead: f to the power q."""
    return math.pow(f, q)
