"""Shared helpers: store builders, level-by-level movie checking, backends."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest

from hull3d import kernels
from hull3d.merge import MergeJob, merge_movies
from hull3d.oracle import EventTimeCollision, snapshot_check
from hull3d.parallel import level_count, plan_level
from hull3d.store import EventLog, MovieBuffer, PointStore, init_base_logs


def lexsorted(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    return pts[np.lexsort((pts[:, 2], pts[:, 1], pts[:, 0]))]


def make_store(points) -> PointStore:
    return PointStore(lexsorted(points))


def heavy_tailed_time(rng) -> float:
    # covers probes below, between, and above all event times
    return math.tan(math.pi * (rng.random() - 0.5))


def snapshot_at(store, log, group, t_draw, rng, attempts=100) -> bool:
    for _ in range(attempts):
        try:
            return snapshot_check(store, log, group, t_draw(rng))
        except EventTimeCollision:
            continue
    raise RuntimeError("no collision-free probe time found")


def run_levels(points, times_per_group=0, rng=None, check_capacity=True):
    """Build the movie level by level, optionally snapshot-checking every
    merged group right after its merge (while the store still holds each
    group's start-of-time chain).

    Returns (store, final EventLog, number of groups checked).
    """
    store = make_store(points)
    n = store.n
    A, B = MovieBuffer(n), MovieBuffer(n)
    init_base_logs(store, A)
    inbuf, outbuf = A, B
    checked = 0
    for level in range(1, level_count(n) + 1):
        plan = plan_level(n, level)
        for L, M, R in plan.jobs:
            merge_movies(MergeJob(int(L), int(M), int(R), inbuf, outbuf), store)
        for Lc in plan.carries:
            code = kernels.active().copy_log(
                inbuf.slots, outbuf.slots, 2 * Lc, 2 * n - 2 * Lc
            )
            assert code >= 0
        for L, M, R in plan.jobs:
            log = EventLog(outbuf, 2 * int(L))
            m = int(R - L)
            k = len(log)
            if check_capacity:
                assert k < 2 * m, f"log length {k} at capacity for group of {m}"
                if m >= 3:
                    assert k <= 2 * m - 3, f"log length {k} > 2m-3 for m={m}"
            for _ in range(times_per_group):
                assert snapshot_at(
                    store, log, (int(L), int(R)), heavy_tailed_time, rng
                ), f"snapshot mismatch: level {level} group [{L},{R})"
            checked += 1
        inbuf, outbuf = outbuf, inbuf
    return store, EventLog(inbuf, 0), checked


def replayed_event_times(store, log) -> list[float]:
    """Event times as replay sees them, restoring the store afterward."""
    from hull3d.geometry import event_time
    from hull3d.store import NIL, act

    times = []
    applied = []
    slots = log.buffer.slots
    idx = log.offset
    pts = store.pts
    while True:
        e = int(slots[idx])
        if e == NIL:
            break
        p, nx = int(store.prev[e]), int(store.next[e])
        times.append(event_time(pts[p], pts[e], pts[nx]))
        act(store, e)
        applied.append(e)
        idx += 1
    for e in reversed(applied):
        act(store, e)
    return times


class ShuffleBackend:
    """Runs spans one at a time in a seeded random order (schedule probe)."""

    workers = 1

    def __init__(self, seed=0, parts=7):
        self._rng = random.Random(seed)
        self._parts = parts

    def run(self, count, body):
        if count <= 0:
            return
        parts = min(count, self._parts)
        step, extra = divmod(count, parts)
        spans = []
        lo = 0
        for p in range(parts):
            hi = lo + step + (1 if p < extra else 0)
            spans.append((lo, hi))
            lo = hi
        self._rng.shuffle(spans)
        for lo, hi in spans:
            body(lo, hi)


@pytest.fixture(params=kernels.available())
def each_kernel(request):
    """Run a test under every available kernel implementation."""
    with kernels.using(request.param):
        yield request.param
