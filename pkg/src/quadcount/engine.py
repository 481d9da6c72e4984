"""Barrier-synchronized Gather/Apply/Scatter phase executor.

A plan is an ordered list of phases. Each phase runs its body over chunks of
the vertex (or edge) index range; chunks may run on any number of worker
threads in any order, but a body only reads state written by earlier phases
and only writes its own slots of arrays allocated before the phase starts, so
the final state does not depend on scheduling. Bodies that produce partial
results (global reductions) combine them with the phase's ``merge`` operator,
which must be associative and commutative. A full barrier separates phases.

Heavy bodies call numba kernels compiled with ``nogil=True``, so threads run
them concurrently.
"""

from __future__ import annotations

import os
import queue
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ArgumentError, PlanError

KINDS = ("gather", "apply", "scatter")
SCOPES = ("vertex", "edge")


def default_workers():
    raw = os.environ.get("QUADCOUNT_THREADS", "1")
    try:
        w = int(raw)
    except ValueError:
        raise ArgumentError(f"QUADCOUNT_THREADS must be an integer, got {raw!r}") from None
    if w < 1:
        raise ArgumentError("QUADCOUNT_THREADS must be >= 1")
    return w


@dataclass(frozen=True)
class Phase:
    """One barrier-delimited step.

    body(g, state, lo, hi, scratch) processes items ``[lo, hi)`` of the scope.
    alloc(g, state) returns arrays inserted into state before any body runs.
    scratch(g) builds one private buffer per worker. If ``merge`` is set, the
    bodies' return values are folded with it and handed to
    finish(g, state, merged), which returns more state (runs after the barrier).
    payload(g, state) returns per-vertex gathered units for CommStats.
    """

    name: str
    kind: str
    scope: str
    body: Callable
    reads: tuple = ()
    writes: tuple = ()
    alloc: Callable | None = None
    scratch: Callable | None = None
    merge: Callable | None = None
    finish: Callable | None = None
    payload: Callable | None = None


@dataclass(frozen=True)
class PhasePlan:
    phases: tuple
    inputs: tuple = ()

    def validate(self):
        known = set(self.inputs)
        names = set()
        for ph in self.phases:
            if ph.kind not in KINDS:
                raise PlanError(f"phase {ph.name!r}: unknown kind {ph.kind!r}")
            if ph.scope not in SCOPES:
                raise PlanError(f"phase {ph.name!r}: unknown scope {ph.scope!r}")
            if ph.name in names:
                raise PlanError(f"duplicate phase name {ph.name!r}")
            names.add(ph.name)
            missing = [k for k in ph.reads if k not in known]
            if missing:
                raise PlanError(f"phase {ph.name!r} reads {missing} before any phase writes them")
            if ph.finish is not None and ph.merge is None:
                raise PlanError(f"phase {ph.name!r} has finish without merge")
            known.update(ph.writes)


@dataclass
class CommStats:
    """Gathered payload units per vertex and phase (1 per id, 2 per (id, count) pair)."""

    per_phase: dict = field(default_factory=dict)
    h_v: np.ndarray | None = None

    @property
    def totals(self):
        return {name: int(units.sum()) for name, units in self.per_phase.items()}

    @property
    def total(self):
        return sum(self.totals.values())

    def per_vertex(self):
        if not self.per_phase:
            return np.zeros(0, dtype=np.int64)
        return sum(self.per_phase.values())


@dataclass
class RunResult:
    state: dict
    comm: CommStats
    timings: dict


def _chunks(size, workers, chunk):
    if size == 0:
        return []
    if chunk is None:
        chunk = max(1, -(-size // (workers * 16)))
    return [(lo, min(lo + chunk, size)) for lo in range(0, size, chunk)]


def _scope_size(g, scope):
    return g.n if scope == "vertex" else g.m


def run_plan(g, plan, workers=None, schedule_seed=None, chunk=None, state=None):
    """Execute ``plan`` on ``g``.

    ``schedule_seed`` shuffles the chunk order inside every phase (used by
    determinism tests); ``chunk`` fixes the chunk length.
    """
    plan.validate()
    workers = default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ArgumentError("workers must be >= 1")
    state = {} if state is None else dict(state)
    missing = [k for k in plan.inputs if k not in state]
    if missing:
        raise PlanError(f"plan inputs {missing} not supplied")
    rng = random.Random(schedule_seed) if schedule_seed is not None else None
    comm = CommStats()
    timings = {}

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for ph in plan.phases:
            t0 = time.perf_counter()
            if ph.alloc is not None:
                state.update(ph.alloc(g, state))
            chunks = _chunks(_scope_size(g, ph.scope), workers, chunk)
            if rng is not None:
                rng.shuffle(chunks)
            partials = _run_phase(g, state, ph, chunks, pool, workers)
            if ph.merge is not None:
                merged = None
                for _, part in sorted(partials, key=lambda x: x[0]):
                    merged = part if merged is None else ph.merge(merged, part)
                if ph.finish is not None:
                    state.update(ph.finish(g, state, merged))
                else:
                    state[ph.writes[0]] = merged
            if ph.payload is not None:
                comm.per_phase[ph.name] = np.asarray(ph.payload(g, state), dtype=np.int64)
            timings[ph.name] = time.perf_counter() - t0
    finally:
        if pool is not None:
            pool.shutdown(wait=True)
    if "h_v" in state:
        comm.h_v = state["h_v"]
    return RunResult(state=state, comm=comm, timings=timings)


def _run_phase(g, state, ph, chunks, pool, workers):
    if pool is None or len(chunks) <= 1:
        scratch = ph.scratch(g) if ph.scratch is not None else None
        return [(lo, ph.body(g, state, lo, hi, scratch)) for lo, hi in chunks]

    work = queue.SimpleQueue()
    for c in chunks:
        work.put(c)
    results = []
    lock = threading.Lock()

    def worker():
        scratch = ph.scratch(g) if ph.scratch is not None else None
        local = []
        while True:
            try:
                lo, hi = work.get_nowait()
            except queue.Empty:
                break
            local.append((lo, ph.body(g, state, lo, hi, scratch)))
        with lock:
            results.extend(local)

    futures = [pool.submit(worker) for _ in range(min(workers, len(chunks)))]
    for f in futures:
        f.result()
    return results


# merge operators


def add_merge(a, b):
    """Elementwise addition of equal-length integer sequences (Python ints)."""
    return [x + y for x, y in zip(a, b)]


def histogram_merge(h1, h2):
    """(p, c1) + (p, c2) -> (p, c1 + c2) over two histograms given as dicts."""
    out = dict(h1)
    for p, c in h2.items():
        out[p] = out.get(p, 0) + c
    return out


def union_merge(a, b):
    return a | b
