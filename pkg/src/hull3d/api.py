"""Public entry point: sorting, validation, both hull passes, orientation.

``convex_hull_3d`` sorts the input by (x, y, z), perturbs any duplicate x
coordinates deterministically (flagged in the result), runs the kinetic
engine once for the lower hull and once on z-negated coordinates for the
upper hull, orients every facet outward against the centroid, and maps
facet indices back to the caller's input order.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass, field

import numpy as np

from .backends import ExecutionBackend, ThreadBackend
from .oracle import DegenerateInputError
from .parallel import build_movie
from .serial import build_movie_serial
from .store import EventLog, MovieBuffer, PointStore, extract_faces

_TIE_EPS = 16 * np.finfo(np.float64).eps


@dataclass
class HullStats:
    """Run metadata: sizes, per-phase timings, and engine instrumentation."""

    n: int
    levels: int
    lower_events: int
    upper_events: int
    sort_ms: float
    lower_ms: float
    upper_ms: float
    total_ms: float
    perturbed: bool
    solver: str
    workers: int
    lower_level_ms: list[float] = field(default_factory=list)
    upper_level_ms: list[float] = field(default_factory=list)


@dataclass
class HullResult:
    """Hull vertices and outward-oriented triangular facets, both in the
    caller's input indexing; vertices are sorted ascending."""

    vertices: np.ndarray
    faces: np.ndarray
    stats: HullStats

    def face_set(self) -> set[tuple[int, int, int]]:
        """Facets as canonical unordered triples (orientation dropped)."""
        return {tuple(sorted(map(int, row))) for row in self.faces}


def perturb_ties(points) -> np.ndarray:
    """Break duplicate x coordinates in lex-sorted points.

    Each point in a run of equal x gets nudged by its rank within the run
    times 16 * machine epsilon * max(1, |x|), which keeps x strictly
    increasing for anything short of adversarially dense input. Returns a
    new array; the input is not modified.
    """
    pts = np.array(points, dtype=np.float64, copy=True)
    x = pts[:, 0]
    n = len(x)
    i = 0
    while i < n:
        j = i + 1
        while j < n and x[j] == x[i]:
            j += 1
        if j - i > 1:
            base = x[i]
            step = _TIE_EPS * max(1.0, abs(base))
            for rank in range(1, j - i):
                x[i + rank] = base + rank * step
        i = j
    return pts


def _lex_order(coords: np.ndarray) -> np.ndarray:
    return np.lexsort((coords[:, 2], coords[:, 1], coords[:, 0]))


def _sort_and_perturb(coords: np.ndarray) -> tuple[np.ndarray, np.ndarray, bool]:
    """Sort by (x, y, z); perturb and re-sort if x has ties.

    Returns (sorted coords, permutation into the original order, perturbed
    flag). Distinct x lets a single stable argsort stand in for the full
    lexicographic sort, which matters at benchmark sizes.
    """
    order = np.argsort(coords[:, 0], kind="stable")
    xs = coords[order, 0]
    if not (np.diff(xs) > 0).all():
        order = _lex_order(coords)
        sorted_pts = perturb_ties(coords[order])
        suborder = np.argsort(sorted_pts[:, 0], kind="stable")
        sorted_pts = sorted_pts[suborder]
        order = order[suborder]
        if not (np.diff(sorted_pts[:, 0]) > 0).all():
            raise DegenerateInputError(
                "duplicate x coordinates survived perturbation"
            )
        return sorted_pts, order, True
    return coords[order], order, False


def _scan_degenerate(coords: np.ndarray, tol: float = 1e-9) -> None:
    """Reject all-collinear / all-coplanar input (relative tolerance).

    Block-wise with early exit, so the common case (random data) stops
    after one block instead of paying three O(n) passes.
    """
    n = len(coords)
    p0 = coords[0]
    scale = max(float(np.abs(coords).max()), 1e-30)

    def first_hit(block_mask, start: int) -> int:
        for lo in range(start, n, 65536):
            hits = np.flatnonzero(block_mask(lo, min(lo + 65536, n)))
            if len(hits):
                return lo + int(hits[0])
        return -1

    i = first_hit(
        lambda lo, hi: np.linalg.norm(coords[lo:hi] - p0, axis=1) > tol * scale, 1
    )
    if i < 0:
        raise DegenerateInputError("all points coincide")
    di = coords[i] - p0
    j = first_hit(
        lambda lo, hi: np.linalg.norm(np.cross(di, coords[lo:hi] - p0), axis=1)
        > tol * scale * scale,
        1,
    )
    if j < 0:
        raise DegenerateInputError("all points are collinear")
    normal = np.cross(di, coords[j] - p0)
    thr = tol * scale * float(np.linalg.norm(normal))
    k = first_hit(lambda lo, hi: np.abs((coords[lo:hi] - p0) @ normal) > thr, 1)
    if k < 0:
        raise DegenerateInputError("all points are coplanar")


def _run_pass(coords: np.ndarray, solver: str, backend, level_times) -> np.ndarray:
    """One engine pass over x-sorted coords; returns raw facet triples."""
    store = PointStore(coords)
    A = MovieBuffer(store.n)
    B = MovieBuffer(store.n)
    if solver == "serial":
        final, _ = build_movie_serial(store, A, B)
    else:
        final, _ = build_movie(store, A, B, backend, level_times=level_times)
    return extract_faces(store, EventLog(final, 0))


def convex_hull_3d(
    points,
    backend: ExecutionBackend | None = None,
    *,
    solver: str = "parallel",
    concurrent_passes: bool | None = None,
) -> HullResult:
    """Convex hull of 3D points.

    ``solver="parallel"`` runs the bottom-up leveled engine under the given
    backend (default: sequential); ``solver="serial"`` runs the recursive
    reference solver and ignores the backend. Under a ThreadBackend the
    lower and upper passes also run concurrently (they share no state);
    pass ``concurrent_passes=False`` to force sequential passes, e.g. for
    clean per-level timings.

    Raises DegenerateInputError for inputs whose hull is not a proper
    3-polytope of distinct-x points (after tie perturbation), ValueError
    for empty or non-finite input.
    """
    if solver not in ("parallel", "serial"):
        raise ValueError(f"unknown solver {solver!r}")
    total_t0 = time.perf_counter()

    coords = np.asarray(points, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != 3:
        raise ValueError("points must have shape (n, 3)")
    n = coords.shape[0]
    if n == 0:
        raise ValueError("no points")
    if not np.isfinite(coords).all():
        raise ValueError("coordinates must be finite")

    workers = getattr(backend, "workers", 1)
    if n <= 3:
        # Too few points for facets: every point is a hull vertex.
        total_ms = (time.perf_counter() - total_t0) * 1e3
        stats = HullStats(
            n=n, levels=0, lower_events=0, upper_events=0,
            sort_ms=0.0, lower_ms=0.0, upper_ms=0.0, total_ms=total_ms,
            perturbed=False, solver=solver, workers=workers,
        )
        return HullResult(
            vertices=np.arange(n, dtype=np.int64),
            faces=np.empty((0, 3), dtype=np.int64),
            stats=stats,
        )

    sort_t0 = time.perf_counter()
    sorted_pts, order, perturbed = _sort_and_perturb(coords)
    sort_ms = (time.perf_counter() - sort_t0) * 1e3
    _scan_degenerate(sorted_pts)

    upper_pts = sorted_pts.copy()
    upper_pts[:, 2] = -upper_pts[:, 2]

    lower_levels: list[float] = []
    upper_levels: list[float] = []
    pass_ms = [0.0, 0.0]
    pass_faces: list[np.ndarray] = [None, None]  # type: ignore[list-item]

    if concurrent_passes is None:
        concurrent_passes = solver == "parallel" and isinstance(backend, ThreadBackend)
    pass_backend = backend
    if concurrent_passes:
        # With both passes in flight, splitting each one across threads only
        # pays once each pass can still get >= 2 cores; below that the
        # pass-level overlap is the whole win and per-pass chunking just
        # thrashes caches. Any schedule yields bit-identical results.
        effective = min(workers, os.cpu_count() or 1)
        if effective < 4:
            pass_backend = None

    def run(which: int) -> None:
        t0 = time.perf_counter()
        pts = sorted_pts if which == 0 else upper_pts
        levels = lower_levels if which == 0 else upper_levels
        pass_faces[which] = _run_pass(pts, solver, pass_backend, levels)
        pass_ms[which] = (time.perf_counter() - t0) * 1e3

    if concurrent_passes:
        thread = threading.Thread(target=run, args=(1,), name="hull3d-upper")
        thread.start()
        run(0)
        thread.join()
    else:
        run(0)
        run(1)
    lower_faces, upper_faces = pass_faces

    faces = np.concatenate([lower_faces, upper_faces]).astype(np.int64)
    if len(faces) == 0:
        # n >= 4 with no facets from either pass: engine starved by
        # degeneracy the pre-scan's tolerance did not catch.
        raise DegenerateInputError("no facets produced; input is degenerate")

    # orient each facet outward against the centroid of all input points
    a = sorted_pts[faces[:, 0]]
    normals = np.cross(sorted_pts[faces[:, 1]] - a, sorted_pts[faces[:, 2]] - a)
    centroid = sorted_pts.mean(axis=0)
    flip = np.einsum("ij,ij->i", normals, centroid - a) > 0.0
    faces[flip, 1], faces[flip, 2] = faces[flip, 2], faces[flip, 1]

    faces = order[faces]
    vertices = np.unique(faces)

    total_ms = (time.perf_counter() - total_t0) * 1e3
    stats = HullStats(
        n=n,
        levels=(n - 1).bit_length(),
        lower_events=len(lower_faces),
        upper_events=len(upper_faces),
        sort_ms=sort_ms,
        lower_ms=pass_ms[0],
        upper_ms=pass_ms[1],
        total_ms=total_ms,
        perturbed=perturbed,
        solver=solver,
        workers=workers,
        lower_level_ms=lower_levels,
        upper_level_ms=upper_levels,
    )
    return HullResult(vertices=vertices, faces=faces, stats=stats)
