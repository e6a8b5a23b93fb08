"""Iridium ring state: consistent-hashing key placement, supernode routing
fabric, constant-hop lookups and membership maintenance with lazy update.

A single ``RingState`` is mutated in place by one thread of control. Ground
truth (who is alive, the sorted live id lists) is kept separately from what
each node *believes* (associated supernode sets, supernode directories,
bound-set registrations); beliefs are corrected only by timeouts.
"""
from __future__ import annotations

import json
import math
import random
from bisect import bisect_left, insort
from dataclasses import dataclass, field
from typing import Callable, Iterable

from cdnlab.iridium.ids import clockwise_after, clockwise_from, first_at_or_after, hash_id, in_arc, predecessors
from cdnlab.trace import FAILED, FOUND, TIMEOUT_RETRY, LookupTrace

REGULAR = "regular"
SUPERNODE = "supernode"


class RingError(ValueError):
    pass


class EmptyRingError(RingError):
    pass


class JoinError(RingError):
    """Join could not complete; the caller may retry with another bootstrap."""

    retryable = True


class PromotionError(RingError):
    pass


class DepartureRefused(RingError):
    pass


def f_sqrt(n: float) -> float:
    return math.sqrt(n)


def f_two_thirds(n: float) -> float:
    return n ** (2.0 / 3.0)


def f_log(n: float) -> float:
    return max(math.log2(n), 1.0) if n > 1 else 1.0


F_POLICIES: dict[str, Callable[[float], float]] = {
    "sqrt": f_sqrt,
    "n23": f_two_thirds,
    "log": f_log,
}


def supernode_target(n: int, f_policy="sqrt") -> int:
    """Number of supernodes for ``n`` live nodes: ceil(f(n)), clamped to [1, n]."""
    f = F_POLICIES[f_policy] if isinstance(f_policy, str) else f_policy
    return max(1, min(n, math.ceil(f(n) - 1e-9)))


def expected_supernode_storage(N: float, f_policy, q: int, bytes_per_entry: float) -> float:
    """Bytes a supernode needs for its stored nodes plus the supernode directory.

    ``(B(N) + f(N)) * bytes_per_entry`` with ``B(N) = q * N / f(N)``.
    ``f_policy`` is a policy name, a callable, or a fixed supernode count.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if isinstance(f_policy, str):
        f = F_POLICIES[f_policy](N)
    elif callable(f_policy):
        f = f_policy(N)
    else:
        f = float(f_policy)
    bound = q * N / f
    return (bound + f) * bytes_per_entry


@dataclass
class NodeRecord:
    id: int
    address: str
    role: str = REGULAR
    alive: bool = True
    associated: list[int] = field(default_factory=list)
    held_keys: set[int] = field(default_factory=set)
    capacity: float = 1.0
    joined_at: float = 0.0

    @property
    def is_supernode(self) -> bool:
        return self.role == SUPERNODE


@dataclass
class SupernodeState:
    id: int
    # every node that listed this supernode in its associated set
    registry: set[int] = field(default_factory=set)
    # supernode id -> believed alive
    directory: dict[int, bool] = field(default_factory=dict)
    load: int = 0

    def believed_alive(self) -> list[int]:
        return sorted(s for s, ok in self.directory.items() if ok)


@dataclass
class ChangeReport:
    """What a membership event changed."""

    keys_moved: int = 0
    messages: int = 0
    rebinds: list[int] = field(default_factory=list)
    migrated_nodes: list[int] = field(default_factory=list)


def node_address(index: int) -> str:
    return f"10.{(index >> 16) & 255}.{(index >> 8) & 255}.{index & 255}"


def synthetic_nodes(n: int, m: int, seed: int = 0, start: int = 0, taken=()):
    """``n`` distinct SHA-1 node ids drawn from consecutive synthetic
    addresses beginning at index ``start``; colliding hashes are skipped.

    Returns ``(ids, addresses, capacities)`` with ids in draw order.
    """
    rng = random.Random(f"{seed}:build:{start}")
    ids, addresses, capacities = [], {}, {}
    used = set(taken)
    index = start
    while len(ids) < n:
        address = node_address(index)
        index += 1
        nid = hash_id(f"node:{address}", m)
        if nid in used:
            continue
        used.add(nid)
        ids.append(nid)
        addresses[nid] = address
        capacities[nid] = rng.random()
    return ids, addresses, capacities


def key_ids(count: int, m: int) -> list[int]:
    """Distinct key identifiers ``hash("key:i")`` in draw order."""
    seen, out = set(), []
    for i in range(count):
        k = hash_id(f"key:{i}", m)
        if k not in seen:
            seen.add(k)
            out.append(k)
    return out


class RingState:
    def __init__(self, m: int, p: int = 2, q: int = 3, seed: int = 0):
        if not 1 <= m <= 160:
            raise RingError("m must lie in 1..160")
        if p < 1 or q < 1:
            raise RingError("p and q must be >= 1")
        self.m = m
        self.p = p
        self.q = q
        self.space = 1 << m
        self.rng_seed = seed
        self.rng = random.Random(seed)
        self.nodes: dict[int, NodeRecord] = {}
        self.supers: dict[int, SupernodeState] = {}
        self.keys: dict[int, tuple[int, ...]] = {}
        self.lost_keys: set[int] = set()
        self.pending_rebinds: set[int] = set()
        self.messages_sent = 0
        self.messages_expired = 0
        self._live: list[int] = []
        self._live_super: list[int] = []
        self._key_ids: list[int] = []

    # ------------------------------------------------------------------ build

    @classmethod
    def build(cls, node_ids: Iterable[int], supernode_ids: Iterable[int], keys: Iterable[int] = (),
              m: int = 32, p: int = 2, q: int = 3, seed: int = 0,
              addresses: dict[int, str] | None = None,
              capacities: dict[int, float] | None = None) -> RingState:
        ring = cls(m, p, q, seed)
        supers = set(supernode_ids)
        ids = sorted(set(node_ids) | supers)
        if not supers:
            raise RingError("ring needs at least one supernode")
        for nid in ids:
            if not 0 <= nid < ring.space:
                raise RingError(f"identifier {nid} outside [0, 2^{m})")
            ring.nodes[nid] = NodeRecord(
                id=nid,
                address=(addresses or {}).get(nid, f"node-{nid}"),
                role=SUPERNODE if nid in supers else REGULAR,
                capacity=(capacities or {}).get(nid, 1.0),
            )
        ring._live = ids
        ring._live_super = sorted(supers)
        for sid in ring._live_super:
            ring.supers[sid] = SupernodeState(sid, directory={s: True for s in ring._live_super})
        for nid in ids:
            ring._bind_truth(nid)
        for key in sorted(set(keys)):
            ring.add_key(key)
        return ring

    @classmethod
    def random(cls, n: int, m: int = 32, p: int = 2, q: int = 3, f_policy="sqrt",
               keys: int = 0, seed: int = 0) -> RingState:
        """Ring of ``n`` nodes with SHA-1 identifiers from synthetic addresses.

        Initial supernodes are a uniform sample of ``ceil(f(n))`` nodes.
        """
        if n < 1 or n > (1 << m) // 2:
            raise RingError(f"n must lie in 1..2^{m - 1}")
        ids, addresses, capacities = synthetic_nodes(n, m, seed)
        rng = random.Random(f"{seed}:supers")
        supers = rng.sample(sorted(ids), supernode_target(n, f_policy))
        return cls.build(ids, supers, key_ids(keys, m), m=m, p=p, q=q, seed=seed,
                         addresses=addresses, capacities=capacities)

    # ----------------------------------------------------------- ground truth

    @property
    def live_nodes(self) -> list[int]:
        return list(self._live)

    @property
    def live_supernodes(self) -> list[int]:
        return list(self._live_super)

    def is_alive(self, nid: int) -> bool:
        rec = self.nodes.get(nid)
        return rec is not None and rec.alive

    def successor_node(self, key: int) -> int:
        if not self._live:
            raise EmptyRingError("no live node")
        return first_at_or_after(self._live, key % self.space)

    def associated_supernode(self, nid: int) -> int:
        if not self._live_super:
            raise EmptyRingError("no live supernode")
        return first_at_or_after(self._live_super, nid % self.space)

    def successor_set(self, key: int) -> list[int]:
        return clockwise_from(self._live, key % self.space, self.p)

    def associated_set(self, nid: int) -> list[int]:
        return clockwise_from(self._live_super, nid, self.q)

    def bound_set(self, sid: int) -> set[int]:
        """Registered regular nodes whose first associated supernode is ``sid``."""
        state = self.supers[sid]
        return {n for n in state.registry
                if n in self.nodes and self.nodes[n].associated[:1] == [sid]}

    def node_count(self) -> int:
        return len(self._live)

    # ------------------------------------------------------------------- keys

    def add_key(self, key: int) -> tuple[int, ...]:
        key %= self.space
        if key in self.keys:
            return self.keys[key]
        holders = tuple(self.successor_set(key))
        self.keys[key] = holders
        insort(self._key_ids, key)
        for h in holders:
            self.nodes[h].held_keys.add(key)
        return holders

    def holders(self, key: int) -> tuple[int, ...]:
        return self.keys.get(key % self.space, ())

    def _keys_in_arc(self, lo: int, hi: int) -> list[int]:
        """Keys in the clockwise arc (lo, hi]; lo == hi means every key."""
        ks = self._key_ids
        if lo == hi:
            return list(ks)
        a = bisect_left(ks, lo + 1)
        b = bisect_left(ks, hi + 1)
        if lo < hi:
            return ks[a:b]
        return ks[a:] + ks[:b]

    def _rehome(self, key: int) -> bool:
        """Recompute a key's holder set from live membership; True if changed."""
        old = self.keys[key]
        if key in self.lost_keys:
            return False
        if old and not any(self.is_alive(h) for h in old):
            self.lost_keys.add(key)
            return False
        new = tuple(self.successor_set(key))
        if new == old:
            return False
        for h in old:
            if h in self.nodes and h not in new:
                self.nodes[h].held_keys.discard(key)
        for h in new:
            self.nodes[h].held_keys.add(key)
        self.keys[key] = new
        return True

    # ------------------------------------------------------- binding helpers

    def _register(self, nid: int, sid: int):
        if sid in self.supers:
            self.supers[sid].registry.add(nid)

    def _unregister(self, nid: int, sid: int):
        if sid in self.supers:
            self.supers[sid].registry.discard(nid)

    def _bind_truth(self, nid: int):
        """Set a node's associated set from ground truth and register it."""
        rec = self.nodes[nid]
        if rec.is_supernode:
            rec.associated = [nid]
            return
        for sid in rec.associated:
            self._unregister(nid, sid)
        rec.associated = self.associated_set(nid)
        for sid in rec.associated:
            self._register(nid, sid)

    def _extend_associated(self, rec: NodeRecord) -> int | None:
        """Append the next live supernode clockwise after the set's last entry."""
        want = min(self.q, len(self._live_super))
        if len(rec.associated) >= want:
            return None
        anchor = rec.associated[-1] if rec.associated else rec.id - 1
        for sid in clockwise_after(self._live_super, anchor, len(self._live_super)):
            if sid not in rec.associated:
                rec.associated.append(sid)
                self._register(rec.id, sid)
                self.messages_sent += 1
                return sid
        return None

    # ----------------------------------------------------------------- lookup

    def lookup(self, origin: int, key: int) -> LookupTrace:
        """Locate ``key`` starting at ``origin``.

        origin -> random live member I of origin's associated set -> the
        clockwise-closest supernode J to the key (as I believes) -> a random
        holder j registered with J. Dead contacts cost a timeout and update
        the contacting node's beliefs.
        """
        key %= self.space
        if not self.is_alive(origin):
            raise RingError(f"origin {origin} is not alive")
        trace = LookupTrace(origin=origin, key=key, forward_path=[origin])
        o = self.nodes[origin]
        if key in o.held_keys:
            trace.holder = origin
            return self._finish(trace)
        if o.is_supernode:
            entry = origin
        else:
            entry = self._reach_entry(o, trace)
            if entry is None:
                trace.outcome = FAILED
                return self._finish(trace)
            trace.forward_path.append(entry)
        holder = self._route(entry, key, trace)
        if holder is None:
            trace.outcome = FAILED
        else:
            trace.holder = holder
            if trace.forward_path[-1] != holder:
                trace.forward_path.append(holder)
                self._deliver(trace, holder)
        return self._finish(trace)

    def _deliver(self, trace: LookupTrace, target: int):
        trace.messages += 1
        state = self.supers.get(target)
        if state is not None:
            state.load += 1

    def _expire(self, trace: LookupTrace):
        trace.messages += 1
        trace.expired += 1
        trace.timeouts += 1

    def _finish(self, trace: LookupTrace) -> LookupTrace:
        if trace.outcome != FAILED:
            trace.return_path = list(reversed(trace.forward_path))
            trace.messages += len(trace.return_path) - 1
            if trace.timeouts:
                trace.outcome = TIMEOUT_RETRY
            else:
                trace.outcome = FOUND
        self.messages_sent += trace.messages
        self.messages_expired += trace.expired
        return trace

    def _reach_entry(self, o: NodeRecord, trace: LookupTrace) -> int | None:
        tried: set[int] = set()
        while True:
            options = [s for s in o.associated if s not in tried]
            if not options:
                return None
            sid = options[self.rng.randrange(len(options))]
            if self.is_alive(sid) and self.nodes[sid].is_supernode:
                self._deliver(trace, sid)
                return sid
            self._expire(trace)
            tried.add(sid)
            # lazy update: drop the dead supernode, extend the set by one
            o.associated.remove(sid)
            self._extend_associated(o)

    def _route(self, entry: int, key: int, trace: LookupTrace) -> int | None:
        """Try the q supernodes clockwise from the key that the entry
        believes alive, until one yields a live holder."""
        me = self.supers[entry]
        window = clockwise_from(me.believed_alive(), key, self.q)
        for target in window:
            if target != entry:
                if not self.is_alive(target):
                    self._expire(trace)
                    me.directory[target] = False
                    continue
                trace.forward_path.append(target)
                self._deliver(trace, target)
            handler = self._lazy_redirect(me, target, key, trace)
            holder = self._pick_holder(handler, key, trace)
            if holder is not None:
                return holder
        return None

    def _lazy_redirect(self, requester: SupernodeState, target: int, key: int, trace: LookupTrace) -> int:
        """Forward to a closer supernode the target knows but the requester
        has never heard of (a recent promotion), teaching the requester."""
        current = target
        while True:
            state = self.supers[current]
            unknown = [s for s in state.believed_alive()
                       if s not in requester.directory and s != current
                       and in_arc(s, key - 1, current)]
            if not unknown:
                return current
            closer = min(unknown, key=lambda s: (s - key) % self.space)
            if not self.is_alive(closer):
                self._expire(trace)
                state.directory[closer] = False
                continue
            requester.directory[closer] = True
            trace.messages += 1
            trace.forward_path.append(closer)
            self._deliver(trace, closer)
            current = closer

    def _pick_holder(self, handler: int, key: int, trace: LookupTrace) -> int | None:
        if key in self.nodes[handler].held_keys:
            return handler
        state = self.supers[handler]
        candidates = [h for h in self.keys.get(key, ()) if h in state.registry]
        while candidates:
            pick = candidates.pop(self.rng.randrange(len(candidates)))
            if self.is_alive(pick):
                return pick
            self._expire(trace)
            state.registry.discard(pick)
        return None

    # ------------------------------------------------------------------ joins

    def join(self, new_id: int, bootstrap: int, address: str | None = None,
             capacity: float = 1.0, now: float = 0.0) -> ChangeReport:
        """Add a regular node via a live bootstrap node and migrate its keys."""
        new_id %= self.space
        if new_id in self.nodes:
            raise RingError(f"identifier {new_id} already in use")
        if not self.is_alive(bootstrap):
            raise JoinError(f"bootstrap {bootstrap} is not alive")
        report = ChangeReport()
        boot = self.nodes[bootstrap]
        contact = bootstrap if boot.is_supernode else next(
            (s for s in boot.associated if self.is_alive(s)), None)
        report.messages += 2  # neighbour discovery and reply
        if contact is None:
            raise JoinError(f"bootstrap {bootstrap} knows no live supernode")
        state = self.supers[contact]
        report.messages += 2  # associated-set query and reply
        assoc = self._resolve_associated(new_id, state, report)

        preds = predecessors(self._live, new_id, self.p)
        if len(preds) < self.p:
            affected = list(self._key_ids)
        else:
            affected = self._keys_in_arc(preds[-1], new_id)

        rec = NodeRecord(new_id, address or f"node-{new_id}", REGULAR,
                         capacity=capacity, joined_at=now)
        self.nodes[new_id] = rec
        insort(self._live, new_id)
        rec.associated = assoc
        for sid in assoc:
            self._register(new_id, sid)
        for key in affected:
            if self._rehome(key):
                report.keys_moved += 1
        self.messages_sent += report.messages
        return report

    def _resolve_associated(self, new_id: int, contact: SupernodeState,
                            report: ChangeReport) -> list[int]:
        """Associated set for a joining node, starting from the contact's view.

        Registering with a dead supernode times out and the contact learns of
        the death; a live supernode answers with any closer supernode it
        knows of (a promotion the contact has not heard about yet).
        """
        view = set(contact.believed_alive())
        dead: set[int] = set()
        while True:
            assoc = clockwise_from(sorted(view), new_id, self.q)
            revised = False
            for sid in assoc:
                report.messages += 1
                if not self.is_alive(sid) or sid not in self.supers:
                    self.messages_expired += 1
                    view.discard(sid)
                    dead.add(sid)
                    if sid in contact.directory:
                        contact.directory[sid] = False
                    revised = True
                    break
                closer = {s for s in self.supers[sid].believed_alive()
                          if s not in view and s not in dead and in_arc(s, new_id - 1, sid)}
                if closer:
                    view |= closer
                    revised = True
                    break
            if not revised:
                return assoc

    # -------------------------------------------------------------- promotion

    def select_supernode(self, trigger: str = "threshold", now: float = 0.0) -> int:
        """Promote the best candidate from the most loaded (``load``) or the
        largest (``threshold``) bound set. Returns the promoted id."""
        if trigger not in ("threshold", "load"):
            raise PromotionError(f"unknown trigger {trigger!r}")
        sources = []
        for sid in self._live_super:
            bound = [n for n in self.bound_set(sid) if self.is_alive(n)]
            if bound:
                weight = self.supers[sid].load if trigger == "load" else len(bound)
                sources.append((-weight, sid, bound))
        if not sources:
            raise PromotionError("no supernode has a live bound-set member")
        sources.sort(key=lambda item: (item[0], item[1]))
        _, source, bound = sources[0]
        candidate = min(bound, key=lambda n: (-self.nodes[n].capacity, self.nodes[n].joined_at, n))
        self.promote(candidate, source)
        return candidate

    def promote(self, nid: int, source: int | None = None) -> ChangeReport:
        rec = self.nodes.get(nid)
        if rec is None or not rec.alive or rec.is_supernode:
            raise PromotionError(f"node {nid} cannot be promoted")
        if source is None:
            source = self.associated_supernode(nid)
        report = ChangeReport()
        old_supers = list(self._live_super)
        preds = predecessors(old_supers, nid, self.q)
        for sid in rec.associated:
            self._unregister(nid, sid)
        rec.role = SUPERNODE
        rec.associated = [nid]
        insort(self._live_super, nid)
        src = self.supers[source]
        directory = dict(src.directory)
        directory[nid] = True
        self.supers[nid] = SupernodeState(nid, directory=directory)
        src.directory[nid] = True
        report.messages += 1
        # regular nodes whose associated set now includes the promotee
        if len(preds) < self.q:
            arc_nodes = list(self._live)
        else:
            lo = preds[-1]
            arc_nodes = [n for n in self._live if in_arc(n, lo, nid)]
        for n in arc_nodes:
            node = self.nodes[n]
            if node.is_supernode:
                continue
            before = list(node.associated)
            self._bind_truth(n)
            if node.associated != before:
                report.migrated_nodes.append(n)
                report.messages += 1
        self.messages_sent += report.messages
        return report

    def complete_propagation(self):
        """Tell every live supernode about every live supernode (broadcast);
        used to reach the quiescent state in tests and sweeps."""
        live = set(self._live_super)
        for sid in self._live_super:
            state = self.supers[sid]
            for other in state.directory:
                state.directory[other] = other in live
            for other in live:
                state.directory[other] = True

    # ------------------------------------------------------------- departures

    def leave_regular(self, nid: int) -> ChangeReport:
        rec = self._require(nid, REGULAR)
        report = ChangeReport()
        for sid in rec.associated:
            self._unregister(nid, sid)
            report.messages += 1
        self._drop_from_live(nid)
        # the record stays until its keys have been handed over
        for key in sorted(rec.held_keys):
            if self._rehome(key):
                report.keys_moved += 1
        del self.nodes[nid]
        self.messages_sent += report.messages
        return report

    def fail_regular(self, nid: int) -> ChangeReport:
        """Crash: registrations linger until they time out; keys on the node
        are not re-replicated."""
        rec = self._require(nid, REGULAR)
        rec.alive = False
        self._drop_from_live(nid)
        for key in rec.held_keys:
            if not any(self.is_alive(h) for h in self.keys[key]):
                self.lost_keys.add(key)
        return ChangeReport()

    def leave_supernode(self, sid: int) -> ChangeReport:
        """Hand the bound set to the next live supernode; affected nodes top up
        their associated sets later (see :meth:`complete_rebind`)."""
        rec = self._require(sid, SUPERNODE)
        if len(self._live_super) <= 1:
            raise DepartureRefused("the last live supernode cannot leave")
        report = ChangeReport()
        state = self.supers[sid]
        self._drop_from_live(sid)
        successor = first_at_or_after(self._live_super, sid)
        succ_state = self.supers[successor]
        for other, ok in state.directory.items():
            succ_state.directory.setdefault(other, ok)
        succ_state.directory[sid] = False
        for n in sorted(state.registry):
            node = self.nodes.get(n)
            if node is None or not node.alive:
                continue
            if sid in node.associated:
                node.associated.remove(sid)
            if not node.associated:
                node.associated = [successor]
            succ_state.registry.add(n)
            if len(node.associated) < min(self.q, len(self._live_super)):
                self.pending_rebinds.add(n)
                report.rebinds.append(n)
        report.messages += 1
        for key in sorted(rec.held_keys):
            if self._rehome(key):
                report.keys_moved += 1
        del self.nodes[sid]
        del self.supers[sid]
        self.messages_sent += report.messages
        return report

    def fail_supernode(self, sid: int) -> ChangeReport:
        """Crash: nobody is told; beliefs are fixed by later timeouts."""
        rec = self._require(sid, SUPERNODE)
        if len(self._live_super) <= 1:
            raise DepartureRefused("the last live supernode cannot fail")
        rec.alive = False
        self._drop_from_live(sid)
        for key in rec.held_keys:
            if not any(self.is_alive(h) for h in self.keys[key]):
                self.lost_keys.add(key)
        return ChangeReport()

    def complete_rebind(self, nid: int) -> int | None:
        """A node in a departed supernode's bound set tops its associated set
        back up to q entries."""
        self.pending_rebinds.discard(nid)
        rec = self.nodes.get(nid)
        if rec is None or not rec.alive:
            return None
        added = None
        while len(rec.associated) < min(self.q, len(self._live_super)):
            sid = self._extend_associated(rec)
            if sid is None:
                break
            added = sid
        return added

    def settle(self):
        """Run every pending rebind immediately."""
        for nid in sorted(self.pending_rebinds):
            self.complete_rebind(nid)

    def refresh(self, nid: int) -> int:
        """Periodic soft-state refresh.

        A regular node re-registers with its associated set; a supernode
        pings its directory and expires registrations of dead nodes. Dead
        contacts are detected by timeout. Returns the number of timeouts.
        """
        rec = self.nodes.get(nid)
        if rec is None or not rec.alive:
            return 0
        timeouts = 0
        if rec.is_supernode:
            state = self.supers[nid]
            for other, ok in sorted(state.directory.items()):
                if ok and other != nid:
                    self.messages_sent += 1
                    if not self.is_alive(other):
                        timeouts += 1
                        state.directory[other] = False
            for n in sorted(state.registry):
                if not self.is_alive(n):
                    state.registry.discard(n)
            return timeouts
        for sid in list(rec.associated):
            self.messages_sent += 1
            if not self.is_alive(sid):
                timeouts += 1
                rec.associated.remove(sid)
        self.messages_expired += timeouts
        if not rec.associated:
            while self._extend_associated(rec) is not None:
                pass
            return timeouts
        # re-registration: the first associate answers with the current set
        report = ChangeReport()
        fresh = self._resolve_associated(nid, self.supers[rec.associated[0]], report)
        self.messages_sent += report.messages
        for sid in rec.associated:
            if sid not in fresh:
                self._unregister(nid, sid)
        for sid in fresh:
            self._register(nid, sid)
        rec.associated = fresh
        return timeouts

    def sweep(self):
        """Let every live node run one refresh round."""
        for nid in list(self._live):
            self.refresh(nid)

    # ---------------------------------------------------------------- helpers

    def _require(self, nid: int, role: str) -> NodeRecord:
        rec = self.nodes.get(nid)
        if rec is None or not rec.alive:
            raise RingError(f"node {nid} is not alive")
        if rec.role != role:
            raise RingError(f"node {nid} is a {rec.role}, expected {role}")
        return rec

    def _drop_from_live(self, nid: int):
        i = bisect_left(self._live, nid)
        if i < len(self._live) and self._live[i] == nid:
            del self._live[i]
        i = bisect_left(self._live_super, nid)
        if i < len(self._live_super) and self._live_super[i] == nid:
            del self._live_super[i]

    # ---------------------------------------------------------------- export

    def snapshot(self) -> dict:
        return {
            "m": self.m,
            "p": self.p,
            "q": self.q,
            "nodes": [
                {"id": rec.id, "role": rec.role, "alive": rec.alive}
                for rec in sorted(self.nodes.values(), key=lambda r: r.id)
            ],
            "keys": [{"key": k, "holders": list(self.keys[k])} for k in self._key_ids],
        }

    def snapshot_json(self) -> str:
        return json.dumps(self.snapshot(), indent=2, sort_keys=True)


def check_ring(ring: RingState, propagated: bool = True) -> list[str]:
    """Invariant violations of a quiescent ring (empty list when healthy).

    ``propagated=False`` skips directory completeness, which lazy update
    only reaches once lookups or a sweep have touched every supernode.
    """
    problems = []
    for key, holders in ring.keys.items():
        if key in ring.lost_keys:
            continue
        expected = tuple(ring.successor_set(key))
        if holders != expected:
            problems.append(f"key {key}: holders {holders} != {expected}")
        if ring._live_super:
            closest = first_at_or_after(ring._live_super, key)
            if closest != ring.associated_supernode(ring.successor_node(key)):
                problems.append(f"key {key}: routing inconsistency")
    for nid in ring._live:
        rec = ring.nodes[nid]
        if rec.is_supernode:
            continue
        expected = ring.associated_set(nid)
        if rec.associated != expected:
            problems.append(f"node {nid}: associated {rec.associated} != {expected}")
        for sid in rec.associated:
            if nid not in ring.supers[sid].registry:
                problems.append(f"node {nid} missing from registry of {sid}")
    for sid in ring._live_super:
        want = {n for n in ring._live
                if not ring.nodes[n].is_supernode and ring.associated_supernode(n) == sid}
        if ring.bound_set(sid) != want:
            problems.append(f"supernode {sid}: bound set mismatch")
        state = ring.supers[sid]
        for n in state.registry:
            if not ring.is_alive(n):
                problems.append(f"supernode {sid}: registry holds dead node {n}")
        if propagated:
            believed = set(state.believed_alive())
            if believed != set(ring._live_super):
                problems.append(f"supernode {sid}: directory {sorted(believed)} is stale")
    return problems


def stale_references(ring: RingState, nid: int) -> list[str]:
    """Places where a live node still treats ``nid`` as alive."""
    refs = []
    for other in ring._live:
        rec = ring.nodes[other]
        if nid in rec.associated:
            refs.append(f"associated set of {other}")
        state = ring.supers.get(other)
        if state is not None:
            if state.directory.get(nid):
                refs.append(f"directory of {other}")
            if nid in state.registry:
                refs.append(f"registry of {other}")
    return refs


def figure6_ring(p: int = 1, q: int = 1, seed: int = 0) -> RingState:
    """The six-node worked example: supernodes 0, 4, 10; regular 2, 8, 12;
    keys 1, 6, 9, 11 on a 4-bit circle."""
    return RingState.build([0, 2, 4, 8, 10, 12], [0, 4, 10], [1, 6, 9, 11],
                           m=4, p=p, q=q, seed=seed)
