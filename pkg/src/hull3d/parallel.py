"""Bottom-up leveled engine: data-parallel merge passes over a movie array.

Start with one trivial log per point, then run ceil(log2 n) levels. Level
k tiles [0, n) into groups of 2**k points; every group with more than half
a group of points becomes one merge job (left half against the rest), and
a short trailing group is carried to the next level unmerged. All jobs of
a level are independent — they read disjoint slices of the input buffer,
write disjoint slices of the output buffer, and mutate disjoint point
ranges — so a backend may run them in any order or in parallel. Buffer
roles swap by reference between levels; coordinates are written once at
store construction and never move.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .backends import ExecutionBackend, SerialBackend
from .merge import _check
from .store import MovieBuffer, PointStore, init_base_logs


def level_count(n: int) -> int:
    """Number of merge levels for n points: ceil(log2 n)."""
    if n < 1:
        raise ValueError("no points")
    return (n - 1).bit_length()


@dataclass(frozen=True)
class LevelPlan:
    """All merge jobs and carries of one level.

    ``jobs`` has one (L, M, R) row per merge; ``carries`` lists the leftmost
    point index of each group forwarded unmerged (at most one, the trailing
    group). Together they cover [0, n) with pairwise disjoint ranges.
    """

    level: int
    group_size: int
    jobs: np.ndarray  # (m, 3) int64 rows of L, M, R
    carries: list[int] = field(default_factory=list)


def plan_level(n: int, level: int) -> LevelPlan:
    """Tile [0, n) into groups of 2**level and emit the level's jobs."""
    if level < 1 or level > level_count(n):
        raise ValueError(f"level {level} outside 1..{level_count(n)} for n={n}")
    size = 1 << level
    half = size >> 1
    starts = np.arange(0, n, size, dtype=np.int64)
    ends = np.minimum(starts + size, n)
    merged = ends - starts > half  # short trailing group gets carried
    lefts = starts[merged]
    jobs = np.column_stack((lefts, lefts + half, ends[merged]))
    return LevelPlan(
        level=level,
        group_size=size,
        jobs=np.ascontiguousarray(jobs),
        carries=[int(L) for L in starts[~merged]],
    )


def build_movie(
    store: PointStore,
    A: MovieBuffer,
    B: MovieBuffer,
    backend: ExecutionBackend | None = None,
    level_times: list[float] | None = None,
) -> tuple[MovieBuffer, int]:
    """Run the full bottom-up build; returns (buffer holding the final log
    at offset 0, number of levels run).

    Base logs go into A; each level submits its merge jobs to the backend,
    copies any carry, then swaps buffer roles. Pass a list as
    ``level_times`` to collect per-level wall seconds.
    """
    n = store.n
    if A.capacity < 2 * n or B.capacity < 2 * n:
        raise ValueError("buffer capacity below 2n")
    if backend is None:
        backend = SerialBackend()

    init_base_logs(store, A)
    if n == 1:
        return A, 0

    K = kernels.active()
    pts, links = store.pts, store.links
    inbuf, outbuf = A, B
    levels = level_count(n)
    for level in range(1, levels + 1):
        t0 = time.perf_counter() if level_times is not None else 0.0
        plan = plan_level(n, level)
        jobs = plan.jobs
        in_slots = inbuf.slots
        out_slots = outbuf.slots

        def body(lo: int, hi: int) -> None:
            _check(int(K.merge_range(pts, links, in_slots, out_slots, jobs, lo, hi)))

        backend.run(len(jobs), body)
        for L in plan.carries:
            _check(int(K.copy_log(in_slots, out_slots, 2 * L, 2 * n - 2 * L)))
        inbuf, outbuf = outbuf, inbuf
        if level_times is not None:
            level_times.append(time.perf_counter() - t0)
    return inbuf, levels
