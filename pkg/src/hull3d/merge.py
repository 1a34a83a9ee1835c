"""Pairwise movie merge: two adjacent groups' kinetic movies become one.

A merge job covers the point range [L, R) split at M. It reads the two
input logs at slot offsets 2L and 2M, writes the merged log at 2L, and
leaves the chain over [L, R) at the merged start-of-time state. The whole
merge mutates nothing outside its point range and buffer slices, which is
the disjointness guarantee the parallel engine builds on.

The merge has three mandatory phases:

1. Forward: play both input movies and the bridge (the tangent edge joining
   the two partial hulls) forward in time, picking at each step the
   earliest of six candidate event times: the next event of either input
   movie, and four bridge-foot transitions. Sub-movie events are recorded
   only while strictly outside the bridge feet (hidden otherwise, but
   always applied to keep the sub-chain evolving); bridge transitions are
   recorded but never touch chain links during this phase.
2. Stitch the final bridge at the end of time.
3. Rewind the recorded events from last to first, toggling chain events
   back and splicing bridge-foot points between the current feet, so that
   the chain lands at the merged start-of-time hull and a forward replay of
   the output log reproduces the merged movie exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .store import NIL, MovieBuffer, PointStore


class MergeOverflowError(RuntimeError):
    """Merged log would exceed its 2*(R-L) slice: degenerate input or bug."""


class BridgeWalkError(RuntimeError):
    """Initial bridge walk overran the group size: chains were not valid
    convex chains (degenerate input or bug)."""


@dataclass(frozen=True)
class MergeJob:
    """One pairwise merge: groups [L, M) and [M, R) into [L, R)."""

    L: int
    M: int
    R: int
    in_buffer: MovieBuffer
    out_buffer: MovieBuffer

    def validate(self, n: int) -> None:
        if not (0 <= self.L < self.M < self.R <= n):
            raise ValueError(f"invalid merge range L={self.L} M={self.M} R={self.R}")
        if self.in_buffer.capacity < 2 * self.R or self.out_buffer.capacity < 2 * self.R:
            raise ValueError("buffer capacity below 2R")


def _check(code: int) -> int:
    if code >= 0:
        return code
    K = kernels.active()
    if code == K.E_OVERFLOW:
        raise MergeOverflowError(
            "merged event log overflow: input violates the general-position "
            "contract (or upstream state is corrupt)"
        )
    if code == K.E_BRIDGE:
        raise BridgeWalkError("bridge walk exceeded the group size")
    if code == K.E_CHAIN:
        raise BridgeWalkError("chain state corrupt: act() hit a sentinel neighbor")
    raise RuntimeError(f"merge failed with kernel error code {code}")


def find_initial_bridge(store: PointStore, u0: int, v0: int, limit: int | None = None):
    """Common tangent of two adjacent hull chains at the dawn of time.

    Start from u0 = M-1 and v0 = M (the x-extreme points of the two groups,
    which are always on their hulls); walk each foot outward while the
    start-of-time orientation test says the tangent can still drop.
    """
    if limit is None:
        limit = store.n
    u, v = kernels.active().find_initial_bridge(store.pts, store.links, u0, v0, limit)
    if u == NIL:
        raise BridgeWalkError("bridge walk exceeded its step limit")
    return int(u), int(v)


def merge_movies(job: MergeJob, store: PointStore) -> int:
    """Run one merge job; returns the merged event count k.

    Both groups must be fully merged at their own level, with chains at
    their start-of-time states and valid logs in ``job.in_buffer``. The
    output log (NIL-terminated) lands at slot 2L of ``job.out_buffer``.
    """
    job.validate(store.n)
    k = kernels.active().merge_movies(
        store.pts,
        store.links,
        job.in_buffer.slots,
        job.out_buffer.slots,
        job.L,
        job.M,
        job.R,
    )
    return _check(int(k))
