"""Benchmark harness: serial vs parallel timings over doubling sizes.

Each row times the whole computation — sort, degeneracy scan, lower and
upper passes, orientation — but never file I/O or point generation. Runs
take one warmup plus ``reps`` measured repetitions and report medians.
A second mode compares the compiled and pure-Python kernels on the same
inputs, which is the honesty check for shipping a compiled core at all.
"""

from __future__ import annotations

import statistics
import sys
import time
from dataclasses import dataclass

from . import kernels
from .api import convex_hull_3d
from .backends import ThreadBackend
from .generators import generate

CSV_HEADER = "n,serial_ms,parallel_ms,speedup,workers,reps"
LEVELS_CSV_HEADER = "n,level,ms"
IMPL_CSV_HEADER = "n,impl,serial_ms,parallel_ms,speedup,workers,reps"


@dataclass
class BenchRecord:
    n: int
    serial_ms: float
    parallel_ms: float
    speedup: float
    workers: int
    reps: int

    def csv_row(self) -> str:
        return (
            f"{self.n},{self.serial_ms:.3f},{self.parallel_ms:.3f},"
            f"{self.speedup:.3f},{self.workers},{self.reps}"
        )


def _time_call(fn, reps: int, warmup: int = 1) -> tuple[float, list[float]]:
    """Median wall milliseconds of fn() over reps after warmup runs."""
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - t0) * 1e3)
    return statistics.median(samples), samples


def time_solver(
    points, solver: str, backend=None, reps: int = 5, warmup: int = 1
) -> float:
    """Median wall ms of one solver over the given points."""
    median, _ = _time_call(
        lambda: convex_hull_3d(points, backend, solver=solver), reps, warmup
    )
    return median


def measure_levels(points, backend, reps: int = 5) -> tuple[list[float], float]:
    """Per-level medians (ms, lower+upper pass summed per level) plus the
    median total wall ms of the same instrumented runs.

    Passes run sequentially here so level attribution is unambiguous.
    """
    per_rep: list[list[float]] = []
    totals: list[float] = []
    for _ in range(1 + reps):
        t0 = time.perf_counter()
        res = convex_hull_3d(points, backend, solver="parallel", concurrent_passes=False)
        wall = (time.perf_counter() - t0) * 1e3
        combined = [
            (a + b) * 1e3
            for a, b in zip(res.stats.lower_level_ms, res.stats.upper_level_ms)
        ]
        per_rep.append(combined)
        totals.append(wall)
    per_rep = per_rep[1:]  # drop warmup
    totals = totals[1:]
    levels = [statistics.median(col) for col in zip(*per_rep)]
    return levels, statistics.median(totals)


def run_bench(
    min_exp: int = 2,
    max_exp: int = 23,
    reps: int = 5,
    seed: int = 0,
    workers: int | None = None,
    dist: str = "ball",
    collect_levels: bool = False,
    progress=None,
) -> tuple[list[BenchRecord], list[tuple[int, int, float]]]:
    """The doubling sweep: one record per n = 2**min_exp .. 2**max_exp.

    ``collect_levels`` adds instrumented parallel runs and returns
    (n, level, ms) rows alongside the records. ``progress`` is an optional
    callable fed one line per finished size.
    """
    if min_exp < 1 or max_exp < min_exp:
        raise ValueError("need 1 <= min_exp <= max_exp")
    records = []
    level_rows: list[tuple[int, int, float]] = []
    with ThreadBackend(workers) as backend:
        for exp in range(min_exp, max_exp + 1):
            n = 1 << exp
            points = generate(n, dist, seed + exp)
            serial_ms = time_solver(points, "serial", reps=reps)
            parallel_ms = time_solver(points, "parallel", backend, reps=reps)
            rec = BenchRecord(
                n=n,
                serial_ms=serial_ms,
                parallel_ms=parallel_ms,
                speedup=serial_ms / parallel_ms if parallel_ms > 0 else 0.0,
                workers=backend.workers,
                reps=reps,
            )
            records.append(rec)
            if collect_levels:
                levels, _ = measure_levels(points, backend, reps=reps)
                level_rows.extend(
                    (n, lvl + 1, ms) for lvl, ms in enumerate(levels)
                )
            if progress is not None:
                progress(rec.csv_row())
    return records, level_rows


def run_impl_compare(
    min_exp: int,
    max_exp: int,
    reps: int = 5,
    seed: int = 0,
    workers: int | None = None,
    dist: str = "ball",
    progress=None,
) -> list[tuple[int, str, BenchRecord]]:
    """Benchmark every available kernel implementation on the same inputs."""
    rows = []
    for impl in kernels.available():
        with kernels.using(impl):
            records, _ = run_bench(
                min_exp, max_exp, reps=reps, seed=seed, workers=workers,
                dist=dist, progress=None,
            )
        for rec in records:
            rows.append((rec.n, impl, rec))
            if progress is not None:
                progress(f"{rec.n},{impl},{rec.csv_row().split(',', 1)[1]}")
    return rows


def write_csv(records: list[BenchRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(rec.csv_row() + "\n")


def write_levels_csv(rows: list[tuple[int, int, float]], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(LEVELS_CSV_HEADER + "\n")
        for n, level, ms in rows:
            fh.write(f"{n},{level},{ms:.4f}\n")


def write_impl_csv(rows, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(IMPL_CSV_HEADER + "\n")
        for n, impl, rec in rows:
            fh.write(
                f"{n},{impl},{rec.serial_ms:.3f},{rec.parallel_ms:.3f},"
                f"{rec.speedup:.3f},{rec.workers},{rec.reps}\n"
            )


def main_progress(line: str) -> None:
    print(line, file=sys.stderr, flush=True)
