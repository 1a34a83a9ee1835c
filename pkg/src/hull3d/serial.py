"""Top-down recursive reference solver.

Splits at the floor midpoint, recurses with buffer roles swapped, then
merges — the classic form of the algorithm, kept on the same index arrays
as the leveled engine so differential tests can compare logs slot for slot.
Used as the serial baseline in benchmarks and for differential testing.
"""

from __future__ import annotations

from . import kernels
from .merge import _check
from .parallel import level_count
from .store import MovieBuffer, PointStore


def hull_recursive(
    store: PointStore, lo: int, hi: int, out: MovieBuffer, scratch: MovieBuffer
) -> int:
    """Solve [lo, hi); the final log lands in ``out`` at slot 2*lo.

    Base case: a single point nominates itself as the only hull point
    (links NIL, empty log). Otherwise recurse on the floor-midpoint split
    into ``scratch`` (children swap the buffer roles), then merge the two
    halves' movies into ``out``. Returns the final event count.
    """
    if not (0 <= lo < hi <= store.n):
        raise ValueError(f"invalid range [{lo}, {hi})")
    k = kernels.active().hull_recursive(
        store.pts, store.links, out.slots, scratch.slots, lo, hi
    )
    return _check(int(k))


def build_movie_serial(
    store: PointStore, A: MovieBuffer, B: MovieBuffer
) -> tuple[MovieBuffer, int]:
    """Full serial solve; mirrors build_movie's return convention.

    Returns the buffer holding the final log at offset 0, and the recursion
    depth ceil(log2 n) as the level count.
    """
    if A.capacity < 2 * store.n or B.capacity < 2 * store.n:
        raise ValueError("buffer capacity below 2n")
    hull_recursive(store, 0, store.n, A, B)
    return A, level_count(store.n)
