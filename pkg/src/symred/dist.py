"""Parallel execution of the search: a coordinator owning a global stack
plus workers that pop, expand and push over an explicit message protocol.

The transport here is in-process (queues between coordinator and worker
threads), but all work travels as messages with a serializable payload,
so a process- or network-boundary transport can implement the same
contract.  Two distribution modes exist: ``master``, where every item
lives on the coordinator's global stack, and ``hierarchical``, where one
designated worker keeps items at levels <= threshold in a local stack and
the remaining workers keep deeper items locally, with the global stack
holding only cross-class pushes.

Termination: a worker is idle from the moment it sends a pop request
until the request is serviced; its requests double as empty-local-stack
beacons.  When every worker is idle and the global stack is empty the
coordinator broadcasts exit and collects the run.
"""

from __future__ import annotations

import json
import queue
import threading
from dataclasses import dataclass, field

from .core import (Assignment, PrefixPlan, SearchStats, WorkItem, expand,
                   root_item)
from .encode import SymmetryModel
from .perm import GeneratorSet, WreathElement, WreathSet


class DistError(RuntimeError):
    """Protocol violation or worker failure; the run has no result."""


# ---------------------------------------------------------------------------
# Messages


PUSH_REQUEST = "push_request"
POP_REQUEST = "pop_request"
WORK = "work"
EMIT = "emit"
IDLE = "idle"
EXIT = "exit"


@dataclass(frozen=True)
class ControlMessage:
    kind: str
    sender: int | None = None
    item: "TrackedItem | None" = None
    assignment: Assignment | None = None
    level_class: int | None = None
    error: str | None = None


@dataclass(frozen=True)
class TrackedItem:
    """A work item with a transfer id, unique per run, for the
    delivered-exactly-once check."""

    uid: int
    item: WorkItem

    @property
    def level(self) -> int:
        return self.item.assignment.level


# -- wire format -------------------------------------------------------------
#
# Work items cross the (conceptual) process boundary as JSON.  The
# in-process transport passes objects directly; the codec is the contract
# for any external transport and must round-trip exactly.


def _aut_to_obj(aut):
    if aut is None:
        return None
    if isinstance(aut, WreathSet):
        return {"kind": "wreath", "degree": aut.degree,
                "num_values": aut.num_values,
                "elements": [[list(e.pi), [list(s) for s in e.sigmas]]
                             for e in aut.elements]}
    return {"kind": "plain", "degree": aut.degree,
            "perms": [list(p) for p in aut.perms]}


def _aut_from_obj(obj):
    if obj is None:
        return None
    if obj["kind"] == "wreath":
        els = tuple(WreathElement(tuple(pi), tuple(tuple(s) for s in sigmas))
                    for pi, sigmas in obj["elements"])
        return WreathSet(obj["degree"], obj["num_values"], els)
    return GeneratorSet(obj["degree"],
                        tuple(tuple(p) for p in obj["perms"]))


def encode_item(t: TrackedItem) -> bytes:
    obj = {
        "uid": t.uid,
        "assignment": [list(pair) for pair in t.item.assignment.items],
        "ext_var": t.item.ext_var,
        "parent_aut": _aut_to_obj(t.item.parent_aut),
    }
    return json.dumps(obj, sort_keys=True).encode()


def decode_item(data: bytes) -> TrackedItem:
    obj = json.loads(data.decode())
    item = WorkItem(
        assignment=Assignment.of(tuple(p) for p in obj["assignment"]),
        ext_var=obj["ext_var"],
        parent_aut=_aut_from_obj(obj["parent_aut"]),
    )
    return TrackedItem(obj["uid"], item)


# ---------------------------------------------------------------------------
# Stack policy


MASTER = "master"
HIERARCHICAL = "hier"


@dataclass(frozen=True)
class StackPolicy:
    """Distribution mode; in hierarchical mode, one class of workers owns
    levels 1..threshold and the other class everything deeper."""

    mode: str = MASTER
    threshold: int = 1
    low_level_workers: int = 1

    def validate(self, k: int, workers: int) -> "StackPolicy":
        if self.mode not in (MASTER, HIERARCHICAL):
            raise DistError(f"unknown stack mode {self.mode!r}")
        if self.mode == HIERARCHICAL:
            if workers < 2:
                # A single worker must serve every level anyway.
                return StackPolicy(MASTER)
            if not 1 <= self.threshold < max(k, 2):
                raise DistError(
                    f"hierarchical threshold must be in 1..{max(k, 2) - 1}")
        return self

    def class_of_level(self, level: int) -> int:
        if self.mode == MASTER:
            return 0
        return 0 if level <= self.threshold else 1

    def class_of_worker(self, worker_id: int, workers: int) -> int:
        if self.mode == MASTER:
            return 0
        return 0 if worker_id < self.low_level_workers else 1


def route(policy: StackPolicy, worker_class: int, item_level: int) -> str:
    """Destination of a freshly pushed item: the pushing worker's local
    stack when the item's level class matches, else the global stack."""
    if policy.mode == MASTER:
        return "global"
    return ("local" if policy.class_of_level(item_level) == worker_class
            else "global")


# ---------------------------------------------------------------------------
# Coordinator and workers


@dataclass
class RunStatistics:
    messages: int = 0
    deliveries: int = 0
    pushes_accepted: int = 0
    search: SearchStats | None = None
    per_worker_pops: dict = field(default_factory=dict)


class _Worker(threading.Thread):
    def __init__(self, wid, wclass, model, plan, policy, inbox, coordinator):
        super().__init__(daemon=True, name=f"symred-worker-{wid}")
        self.wid = wid
        self.wclass = wclass
        self.model = model
        self.plan = plan
        self.policy = policy
        self.inbox: queue.Queue = inbox
        self.coordinator = coordinator
        self.local: list[TrackedItem] = []
        self.stats = SearchStats.for_depth(plan.k)
        self.pops = 0
        self.failure: str | None = None

    def _emit(self, assignment: Assignment):
        self.coordinator.post(ControlMessage(EMIT, sender=self.wid,
                                             assignment=assignment))

    def _process(self, tracked: TrackedItem):
        self.pops += 1
        children = expand(tracked.item, self.plan, self.model,
                          self._emit, self.stats)
        for child in children:
            wrapped = self.coordinator.wrap(child)
            if route(self.policy, self.wclass, wrapped.level) == "local":
                self.local.append(wrapped)
            else:
                self.coordinator.post(
                    ControlMessage(PUSH_REQUEST, sender=self.wid,
                                   item=wrapped))

    def run(self):
        try:
            while True:
                if self.local:
                    self._process(self.local.pop())
                    continue
                # Local stack empty: beacon it, then request work.
                self.coordinator.post(ControlMessage(IDLE, sender=self.wid))
                self.coordinator.post(
                    ControlMessage(POP_REQUEST, sender=self.wid,
                                   level_class=self.wclass))
                msg = self.inbox.get()
                if msg.kind == EXIT:
                    return
                if msg.kind != WORK:
                    raise DistError(
                        f"worker {self.wid} got unexpected {msg.kind}")
                self._process(msg.item)
        except BaseException as exc:  # propagated to the coordinator
            self.failure = f"{type(exc).__name__}: {exc}"
            self.coordinator.post(ControlMessage(IDLE, sender=self.wid,
                                                 error=self.failure))


class _Coordinator:
    """Owns the global stack, tracks idle workers, and decides
    termination: global stack empty and every worker idle."""

    def __init__(self, workers: int, policy: StackPolicy, plan_k: int):
        self.inbox: queue.Queue = queue.Queue()
        self.worker_inboxes = [queue.Queue() for _ in range(workers)]
        self.policy = policy
        self.nworkers = workers
        self.global_stack: list[TrackedItem] = []
        self.waiting: dict[int, int] = {}   # worker id -> level class
        self.emitted: list[Assignment] = []
        self.stats = RunStatistics()
        self._uid = 0
        self._uid_lock = threading.Lock()
        self._delivered: set[int] = set()

    def wrap(self, item: WorkItem) -> TrackedItem:
        with self._uid_lock:
            self._uid += 1
            return TrackedItem(self._uid, item)

    def post(self, msg: ControlMessage):
        self.inbox.put(msg)

    def _deliver(self, wid: int, tracked: TrackedItem, local_empty):
        if tracked.uid in self._delivered:
            raise DistError(f"work item {tracked.uid} delivered twice")
        self._delivered.add(tracked.uid)
        self.stats.deliveries += 1
        del self.waiting[wid]
        local_empty[wid] = False
        self.worker_inboxes[wid].put(ControlMessage(WORK, item=tracked))

    def _try_service(self, local_empty):
        if not self.global_stack:
            return
        for wid, wclass in sorted(self.waiting.items()):
            for i in range(len(self.global_stack) - 1, -1, -1):
                item = self.global_stack[i]
                if (self.policy.mode == MASTER
                        or self.policy.class_of_level(item.level) == wclass):
                    del self.global_stack[i]
                    self._deliver(wid, item, local_empty)
                    break
            if not self.global_stack:
                return

    def run(self, root: TrackedItem) -> list[Assignment]:
        self.global_stack.append(root)
        local_empty = [True] * self.nworkers
        failure = None
        while True:
            msg = self.inbox.get()
            self.stats.messages += 1
            if msg.error is not None:
                failure = f"worker {msg.sender}: {msg.error}"
                break
            if msg.kind == PUSH_REQUEST:
                self.stats.pushes_accepted += 1
                self.global_stack.append(msg.item)
                self._try_service(local_empty)
            elif msg.kind == POP_REQUEST:
                if msg.sender in self.waiting:
                    raise DistError(
                        f"worker {msg.sender} double pop request")
                self.waiting[msg.sender] = msg.level_class
                self._try_service(local_empty)
            elif msg.kind == IDLE:
                local_empty[msg.sender] = True
            elif msg.kind == EMIT:
                self.emitted.append(msg.assignment)
            else:
                raise DistError(f"unexpected message kind {msg.kind}")
            if (len(self.waiting) == self.nworkers
                    and not self.global_stack and all(local_empty)):
                for q in self.worker_inboxes:
                    q.put(ControlMessage(EXIT))
                break
        if failure is not None:
            for q in self.worker_inboxes:
                q.put(ControlMessage(EXIT))
            raise DistError(failure)
        return self.emitted


def run_parallel(m: SymmetryModel, plan: PrefixPlan, workers: int = 1,
                 policy: StackPolicy | None = None,
                 stats_out: RunStatistics | None = None) -> list[Assignment]:
    """Run the search with the given number of workers and stack policy.

    Returns the emitted assignments sorted canonically by their
    (variable, value) sequences; the multiset equals the sequential
    run's output regardless of scheduling.
    """
    if workers < 1:
        raise DistError("at least one worker required")
    policy = (policy or StackPolicy()).validate(plan.k, workers)
    coord = _Coordinator(workers, policy, plan.k)
    ws = []
    for wid in range(workers):
        wclass = policy.class_of_worker(wid, workers)
        w = _Worker(wid, wclass, m, plan, policy,
                    coord.worker_inboxes[wid], coord)
        ws.append(w)
        w.start()
    try:
        out = coord.run(coord.wrap(root_item()))
    finally:
        for q in coord.worker_inboxes:
            q.put(ControlMessage(EXIT))
        for w in ws:
            w.join(timeout=60)
    merged = SearchStats.for_depth(plan.k)
    for w in ws:
        merged.merge(w.stats)
        coord.stats.per_worker_pops[w.wid] = w.pops
    coord.stats.search = merged
    if stats_out is not None:
        stats_out.messages = coord.stats.messages
        stats_out.deliveries = coord.stats.deliveries
        stats_out.pushes_accepted = coord.stats.pushes_accepted
        stats_out.search = merged
        stats_out.per_worker_pops = coord.stats.per_worker_pops
    return sorted(out, key=lambda a: a.items)
