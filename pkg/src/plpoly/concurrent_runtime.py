"""Parallel region traversal: shared store, basis dedup table, task schemes.

Shared structures:

* RegionStore - grow-only slot array with two counters.  n_fill hands out
  unique slots; n_ready is the publish index: slots below it are fully
  written and immutable, and readers re-read it on every scan step so
  regions published mid-scan become visible.  Writers serialize only on the
  publish handoff (FIFO by slot index).
* BasisTable - linearizable insert-or-test of basis keys, extended with a
  claim/publish/dead protocol so exactly one task builds each region and a
  task whose basis lost the race can wait for the winner instead of leaving
  its probe uncovered.
* WorkQueue - task multiset; every pushed task is executed exactly once, in
  no particular order.

Two schedulers are provided: "rounds" spawns a whole frontier, barriers, and
repeats; "pool" is a work pool with dynamic task injection.  Logical workers
are threads; because the heavy per-task arithmetic is pure Python (and so
serialized by the GIL), the float solve / exact reconstruction / redundancy
kernels can be offloaded to a process pool (`compute="processes"`), which is
what actually buys wall-clock speedup on multicore hosts.  Results are
bit-identical either way.
"""

from __future__ import annotations

import os
import queue
import sys
import threading
import time
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from typing import Optional, Sequence

from .plp_engine import (
    CoveringIndex,
    ParametricObjective,
    PLPSolution,
    SolveStats,
    Task,
    _solve_constant,
    build_stage,
    coverage_sweep,
    default_probe,
    float_stage,
    normalize_probe,
    probe_float_arrays,
    process_task,
    sweep_samples,
)

DEFAULT_CAPACITY = 2**20


class StoreCapacityError(RuntimeError):
    """The region store is full; raise the capacity configuration knob."""


class RegionStore:
    """Concurrent grow-only array with a publish index.

    push() claims a unique slot by bumping n_fill, writes it, then waits for
    its turn to advance n_ready so no reader ever sees a half-written slot.
    """

    def __init__(self, capacity: int = DEFAULT_CAPACITY):
        self.capacity = capacity
        self.slots = [None] * capacity
        self.n_fill = 0
        self.n_ready = 0
        self._fill_lock = threading.Lock()
        self._publish = threading.Condition()
        self._index = CoveringIndex()

    def push(self, region) -> int:
        with self._fill_lock:
            i = self.n_fill
            if i >= self.capacity:
                raise StoreCapacityError(f"store capacity {self.capacity} exhausted")
            self.n_fill = i + 1
        self.slots[i] = region
        # only the owner of slot i advances n_ready from i to i+1, so the
        # wait needs no lock: spin-yield briefly, then block on the condition
        spins = 0
        while self.n_ready != i:
            spins += 1
            if spins < 100:
                time.sleep(0)
                continue
            with self._publish:
                while self.n_ready != i:
                    self._publish.wait(0.01)
        if hasattr(region, "covers"):
            self._index.append(region)
        self.n_ready = i + 1
        if spins >= 100:
            with self._publish:
                self._publish.notify_all()
        return i

    def __len__(self) -> int:
        return self.n_ready

    def __getitem__(self, i: int):
        if i >= self.n_ready:
            raise IndexError(i)
        return self.slots[i]

    def published(self):
        i = 0
        while i < self.n_ready:  # n_ready re-read every iteration
            yield self.slots[i]
            i += 1

    def find_covering(self, d) -> Optional[int]:
        farrays = probe_float_arrays(d)
        seen = 0
        while True:
            upto = self.n_ready  # re-read so mid-scan publishes are visible
            if upto == seen:
                return None
            for i in self._index.scan(d, seen, upto, farrays):
                return i
            seen = upto

    def maybe_covered(self, d) -> bool:
        farrays = probe_float_arrays(d)
        if farrays is None:
            return False
        for _ in self._index.scan(d, 0, self.n_ready, farrays, exact=False):
            return True
        return False


def push_region(store: RegionStore, region) -> int:
    """Store a region at a unique slot and publish it in slot order."""
    return store.push(region)


def is_covered(d, store: RegionStore):
    """First published region covering d, re-reading the publish index."""
    idx = store.find_covering(d)
    return None if idx is None else store.slots[idx]


class BasisTable:
    """Atomic insert-or-test set of basis keys with build-state tracking."""

    def __init__(self):
        self._states: dict = {}
        self._lock = threading.Lock()

    def test_and_insert(self, key) -> bool:
        """True iff key was already present; otherwise insert it (atomic)."""
        with self._lock:
            if key in self._states:
                return True
            self._states[key] = ("busy", None)
            return False

    def claim(self, key):
        """("winner", None) | ("busy", None) | ("region", index)."""
        with self._lock:
            st = self._states.get(key)
            if st is None or st[0] == "dead":
                self._states[key] = ("busy", None)
                return "winner", None
            return st

    def publish(self, key, index: int) -> None:
        with self._lock:
            self._states[key] = ("region", index)

    def mark_dead(self, key) -> None:
        with self._lock:
            self._states[key] = ("dead", None)

    def __len__(self) -> int:
        with self._lock:
            return len(self._states)

    def __contains__(self, key) -> bool:
        with self._lock:
            return key in self._states


class WorkQueue:
    """Concurrent multiset of tasks; push/pop from any worker."""

    def __init__(self):
        self._q: queue.SimpleQueue = queue.SimpleQueue()

    def push(self, task) -> None:
        self._q.put(task)

    def pop(self):
        return self._q.get()


# --- compute backends ---------------------------------------------------------

_WORKER_STATE: dict = {}


def _compute_worker_init(lp, pobj, redundancy_mode):
    _WORKER_STATE["lp"] = lp
    _WORKER_STATE["pobj"] = pobj
    _WORKER_STATE["mode"] = redundancy_mode


def _compute_worker_float(d):
    return float_stage(_WORKER_STATE["lp"], _WORKER_STATE["pobj"], d)


def _compute_worker_build(d, basis, force_exact):
    return build_stage(
        _WORKER_STATE["lp"],
        _WORKER_STATE["pobj"],
        d,
        basis,
        force_exact,
        _WORKER_STATE["mode"],
    )


class InlineCompute:
    def __init__(self, lp, pobj, redundancy_mode):
        self.lp = lp
        self.pobj = pobj
        self.mode = redundancy_mode

    def run_float(self, d):
        return float_stage(self.lp, self.pobj, d)

    def run_build(self, d, basis, force_exact):
        return build_stage(self.lp, self.pobj, d, basis, force_exact, self.mode)

    def close(self):
        pass


class ProcessCompute:
    """Offloads the expensive build kernel to worker processes.

    The float proposal stays inline: it costs well under the IPC round trip.
    """

    def __init__(self, lp, pobj, redundancy_mode, workers: int):
        self.lp = lp
        self.pobj = pobj
        self._pool = ProcessPoolExecutor(
            max_workers=workers,
            initializer=_compute_worker_init,
            initargs=(lp, pobj, redundancy_mode),
        )

    def run_float(self, d):
        return float_stage(self.lp, self.pobj, d)

    def run_build(self, d, basis, force_exact):
        return self._pool.submit(_compute_worker_build, d, basis, force_exact).result()

    def close(self):
        self._pool.shutdown(wait=True, cancel_futures=True)


# --- shared solve state ---------------------------------------------------------


class _SharedState:
    def __init__(self, lp, pobj, store, bases, compute, redundancy_mode):
        self.lp = lp
        self.pobj = pobj
        self.store = store
        self.bases = bases
        self.compute = compute
        self.redundancy_mode = redundancy_mode
        self.edges: list = []
        self._edge_lock = threading.Lock()
        self._stats = SolveStats()
        self._stats_lock = threading.Lock()
        self._cancel = threading.Event()

    def cancelled(self) -> bool:
        return self._cancel.is_set()

    def cancel(self) -> None:
        self._cancel.set()

    def stat(self, name: str, delta: int = 1) -> None:
        with self._stats_lock:
            setattr(self._stats, name, getattr(self._stats, name) + delta)

    def stats(self) -> SolveStats:
        with self._stats_lock:
            return SolveStats(**vars(self._stats))

    def find_covering(self, d):
        return self.store.find_covering(d)

    def maybe_covered(self, d):
        return self.store.maybe_covered(d)

    def region_at(self, i):
        return self.store[i]

    def claim_basis(self, key):
        return self.bases.claim(key)

    def publish_region(self, region, parent) -> int:
        idx = self.store.push(region)
        self.bases.publish(region.basis.key, idx)
        with self._edge_lock:
            self.edges.append((parent, idx))
        return idx

    def mark_dead(self, key) -> None:
        self.bases.mark_dead(key)

    def run_float(self, d):
        return self.compute.run_float(d)

    def run_build(self, d, basis, force_exact):
        return self.compute.run_build(d, basis, force_exact)


class _AtomicCounter:
    def __init__(self, value: int = 0):
        self._value = value
        self._lock = threading.Lock()

    def add(self, delta: int) -> int:
        with self._lock:
            self._value += delta
            return self._value


_STOP = object()


def _run_dynamic_pool(initial_tasks, state: _SharedState, threads: int):
    work = WorkQueue()
    for task in initial_tasks:
        work.push(task)
    outstanding = _AtomicCounter(len(initial_tasks))
    if not initial_tasks:
        return
    errors: list = []

    def worker():
        while True:
            task = work.pop()
            if task is _STOP:
                return
            try:
                for child in process_task(task, state):
                    outstanding.add(1)
                    work.push(child)
            except Exception as exc:  # noqa: BLE001 - reported to the caller
                errors.append(exc)
                state.cancel()
            finally:
                if outstanding.add(-1) == 0:
                    for _ in range(threads):
                        work.push(_STOP)

    crew = [threading.Thread(target=worker, name=f"plp-worker-{i}") for i in range(threads)]
    for t in crew:
        t.start()
    for t in crew:
        t.join()
    if errors:
        raise errors[0]


def _run_rounds(initial_tasks, state: _SharedState, threads: int):
    frontier = list(initial_tasks)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        while frontier:
            results = list(ex.map(lambda t: process_task(t, state), frontier))
            frontier = [child for sub in results for child in sub]


def solve_parallel(
    lp,
    pobj: ParametricObjective,
    d0: Optional[Sequence] = None,
    threads: int = 1,
    scheduler: str = "pool",
    capacity: int = DEFAULT_CAPACITY,
    redundancy_mode: str = "sequential",
    compute: str = "auto",
    sweep: Optional[int] = None,
) -> PLPSolution:
    """Parallel worklist solve; same covering guarantees as solve_sequential.

    scheduler: "pool" (dynamic work pool) or "rounds" (frontier + barrier).
    compute: "inline" runs kernels on the worker threads, "processes"
    offloads them to a process pool, "auto" picks processes when threads > 1.
    `sweep` is the coverage-sweep sample count (None default, 0 disables).
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if scheduler not in ("pool", "rounds"):
        raise ValueError(f"unknown scheduler {scheduler!r}")
    if pobj.k == 0:
        return _solve_constant(lp, pobj)
    if d0 is None:
        d0 = default_probe(pobj.k)
    if all(v == 0 for v in d0):
        raise ValueError("initial probe must be nonzero")

    if compute == "auto":
        compute = "processes" if threads > 1 else "inline"
    if compute == "processes":
        engine = ProcessCompute(lp, pobj, redundancy_mode, threads)
    elif compute == "inline":
        engine = InlineCompute(lp, pobj, redundancy_mode)
    else:
        raise ValueError(f"unknown compute mode {compute!r}")

    store = RegionStore(capacity)
    state = _SharedState(lp, pobj, store, BasisTable(), engine, redundancy_mode)
    samples = [] if sweep == 0 else sweep_samples(pobj.k, sweep)
    tasks = [Task(None, normalize_probe(pobj, d0))]
    # finer GIL slices keep the executor's result-delivery thread responsive
    switch = sys.getswitchinterval()
    if threads > 1:
        sys.setswitchinterval(0.0005)
    try:
        while True:
            if scheduler == "pool":
                _run_dynamic_pool(tasks, state, threads)
            else:
                _run_rounds(tasks, state, threads)
            gaps = coverage_sweep(state, samples) if samples else []
            if not gaps:
                break
            tasks = [Task(None, normalize_probe(pobj, p)) for p in gaps]
    finally:
        sys.setswitchinterval(switch)
        engine.close()
    regions = list(store.published())
    return PLPSolution(regions, list(state.edges), state.stats())


def available_threads() -> int:
    """Usable CPU count (affinity-aware where the platform supports it)."""
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1
