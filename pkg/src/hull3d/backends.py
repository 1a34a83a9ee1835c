"""Execution backends: strategies that run a level's merge jobs.

A backend receives a job count m and a body callable; it must invoke
``body(lo, hi)`` over disjoint spans covering [0, m) exactly once each,
with no ordering guarantee, and return only after all spans completed.
Spans (rather than single ids) keep the per-job dispatch overhead out of
Python: the body hands a whole span to one compiled kernel call. Jobs
within a level mutate disjoint state by construction, so any schedule
yields bit-identical results.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Protocol

Body = Callable[[int, int], None]


class ExecutionBackend(Protocol):
    def run(self, count: int, body: Body) -> None: ...


def resolve_workers(explicit: int | None = None) -> int:
    """Worker count: explicit argument, else HULL3D_WORKERS, else cores."""
    if explicit is not None:
        if explicit < 1:
            raise ValueError("workers must be >= 1")
        return explicit
    env = os.environ.get("HULL3D_WORKERS", "").strip()
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"HULL3D_WORKERS={env!r} is not an integer") from None
        if value < 1:
            raise ValueError("HULL3D_WORKERS must be >= 1")
        return value
    return os.cpu_count() or 1


class SerialBackend:
    """Runs the whole id range in the calling thread (testing baseline)."""

    workers = 1

    def run(self, count: int, body: Body) -> None:
        if count > 0:
            body(0, count)

    def __repr__(self):
        return "SerialBackend()"


class ThreadBackend:
    """Chunked dispatch onto a persistent thread pool.

    The compiled kernels release the GIL, so worker threads scale across
    cores. Each level's jobs are split into at most workers *
    chunks_per_worker contiguous spans (a little oversubscription smooths
    uneven chunk runtimes).
    """

    def __init__(self, workers: int | None = None, chunks_per_worker: int = 4):
        self.workers = resolve_workers(workers)
        if chunks_per_worker < 1:
            raise ValueError("chunks_per_worker must be >= 1")
        self._chunks = self.workers * chunks_per_worker
        self._pool = ThreadPoolExecutor(
            max_workers=self.workers, thread_name_prefix="hull3d"
        )

    def run(self, count: int, body: Body) -> None:
        if count <= 0:
            return
        parts = min(count, self._chunks)
        if parts == 1:
            body(0, count)
            return
        step, extra = divmod(count, parts)
        futures = []
        lo = 0
        for p in range(parts):
            hi = lo + step + (1 if p < extra else 0)
            futures.append(self._pool.submit(body, lo, hi))
            lo = hi
        for f in futures:
            f.result()  # propagates the first worker exception

    def close(self) -> None:
        self._pool.shutdown(wait=True)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def __repr__(self):
        return f"ThreadBackend(workers={self.workers})"
