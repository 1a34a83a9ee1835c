"""Pure-Python kernels for the kinetic hull engine.

This module mirrors the compiled extension ``hull3d._ckernels`` function for
function; ``hull3d.kernels`` picks one of the two at import time. Keep the
arithmetic expression order identical between the twins: with FMA
contraction disabled in the extension build, both produce bit-identical
event times, and the differential tests assert exactly that.

Data layout is array-of-records: ``pts`` is (n, 3) float64 coordinate rows
and ``links`` is (n, 2) int32 rows of (prev, next), so one point's record
is one cache line in the compiled twin.

Kernels signal failure through negative return codes instead of exceptions
(the compiled twin runs without the GIL); ``hull3d.merge`` translates codes
into typed errors.
"""

from __future__ import annotations

import math

import numpy as np

IMPL = "python"

NIL = -1
INF = math.inf

E_OVERFLOW = -1  # merged event log would exceed its buffer slice
E_BRIDGE = -2  # initial bridge walk ran past the group size
E_CHAIN = -3  # act() reached a sentinel neighbor
E_COUNT = -4  # replay count exceeds the log length
E_UNTERMINATED = -5  # no NIL terminator within the slice


def _evtime(pts, p, q, r):
    # Kinetic time at which the projected triple (p, q, r) is collinear;
    # any sentinel participant means "never".
    if p == NIL or q == NIL or r == NIL:
        return INF
    px = pts[p, 0]
    py = pts[p, 1]
    qpx = pts[q, 0] - px
    rpx = pts[r, 0] - px
    den = qpx * (pts[r, 1] - py) - rpx * (pts[q, 1] - py)
    if den == 0.0:
        return INF
    pz = pts[p, 2]
    return (qpx * (pts[r, 2] - pz) - rpx * (pts[q, 2] - pz)) / den


def act(links, i):
    """Self-inverse chain toggle: insert i if its recorded neighbors do not
    currently link through it, delete it otherwise."""
    p = links[i, 0]
    n = links[i, 1]
    if p == NIL or n == NIL:
        return E_CHAIN
    if links[p, 1] != i:
        links[p, 1] = i
        links[n, 0] = i
    else:
        links[p, 1] = n
        links[n, 0] = p
    return 0


def init_base_logs(links, slots, n):
    """Base case: every point is its own one-point hull with an empty log."""
    links[:n] = NIL
    slots[0 : 2 * n : 2] = NIL
    return 0


def find_initial_bridge(pts, links, u, v, limit):
    """Walk (u, v) down to the common tangent of two hull chains at the
    dawn of time. Returns (NIL, NIL) if the walk exceeds ``limit`` steps."""
    steps = 0
    while True:
        vn = links[v, 1]
        if vn != NIL and (pts[v, 0] - pts[u, 0]) * (pts[vn, 1] - pts[u, 1]) - (
            pts[vn, 0] - pts[u, 0]
        ) * (pts[v, 1] - pts[u, 1]) < 0.0:
            v = vn
        else:
            up = links[u, 0]
            if up != NIL and (pts[u, 0] - pts[up, 0]) * (pts[v, 1] - pts[up, 1]) - (
                pts[v, 0] - pts[up, 0]
            ) * (pts[u, 1] - pts[up, 1]) < 0.0:
                u = up
            else:
                return u, v
        steps += 1
        if steps > limit:
            return NIL, NIL


def merge_movies(pts, links, in_slots, out_slots, L, M, R):
    """Merge the movies of adjacent groups [L, M) and [M, R).

    Reads the input logs at slots 2L and 2M, writes the merged log at 2L,
    and leaves the chain over [L, R) at its start-of-time state. Returns
    the merged event count, or a negative error code.
    """
    cap = 2 * (R - L)
    u, v = find_initial_bridge(pts, links, M - 1, M, R - L)
    if u == NIL:
        return E_BRIDGE

    i = 2 * L
    j = 2 * M
    iend = 2 * M
    jend = 2 * R
    out = 2 * L
    k = 0
    oldt = -INF

    # Phase 1: play both input movies and the bridge forward in time,
    # recording the events visible on the merged hull. Cases 0/1 advance a
    # sub-movie (hidden when at or beyond the bridge feet); cases 2-5 move
    # a bridge foot and touch no chain links.
    while True:
        if i >= iend or j >= jend:
            return E_UNTERMINATED
        ei = in_slots[i]
        ej = in_slots[j]
        t0 = _evtime(pts, links[ei, 0], ei, links[ei, 1]) if ei != NIL else INF
        t1 = _evtime(pts, links[ej, 0], ej, links[ej, 1]) if ej != NIL else INF
        t2 = _evtime(pts, u, links[u, 1], v)
        t3 = _evtime(pts, links[u, 0], u, v)
        t4 = _evtime(pts, u, v, links[v, 1])
        t5 = _evtime(pts, u, links[v, 0], v)

        # earliest candidate strictly after oldt; ties go to the lowest case
        newt = INF
        case = -1
        if oldt < t0 < newt:
            newt = t0
            case = 0
        if oldt < t1 < newt:
            newt = t1
            case = 1
        if oldt < t2 < newt:
            newt = t2
            case = 2
        if oldt < t3 < newt:
            newt = t3
            case = 3
        if oldt < t4 < newt:
            newt = t4
            case = 4
        if oldt < t5 < newt:
            newt = t5
            case = 5
        if case < 0:
            break

        if case == 0:
            if pts[ei, 0] < pts[u, 0]:
                if k >= cap - 1:
                    return E_OVERFLOW
                out_slots[out + k] = ei
                k += 1
            if act(links, ei) < 0:
                return E_CHAIN
            i += 1
        elif case == 1:
            if pts[ej, 0] > pts[v, 0]:
                if k >= cap - 1:
                    return E_OVERFLOW
                out_slots[out + k] = ej
                k += 1
            if act(links, ej) < 0:
                return E_CHAIN
            j += 1
        elif case == 2:
            u = links[u, 1]
            if k >= cap - 1:
                return E_OVERFLOW
            out_slots[out + k] = u
            k += 1
        elif case == 3:
            if k >= cap - 1:
                return E_OVERFLOW
            out_slots[out + k] = u
            k += 1
            u = links[u, 0]
        elif case == 4:
            if k >= cap - 1:
                return E_OVERFLOW
            out_slots[out + k] = v
            k += 1
            v = links[v, 1]
        else:
            v = links[v, 0]
            if k >= cap - 1:
                return E_OVERFLOW
            out_slots[out + k] = v
            k += 1
        oldt = newt

    out_slots[out + k] = NIL

    # Phase 2: stitch the bridge as it stands at the end of time.
    links[u, 1] = v
    links[v, 0] = u

    # Phase 3: walk the recorded events backward to rebuild the merged
    # chain at the start of time. Events at or outside the current bridge
    # span toggle back; events strictly inside are fresh bridge feet and
    # get spliced between u and v.
    for idx in range(k - 1, -1, -1):
        e = out_slots[out + idx]
        if pts[e, 0] <= pts[u, 0] or pts[e, 0] >= pts[v, 0]:
            if act(links, e) < 0:
                return E_CHAIN
            if e == u:
                u = links[u, 0]
            elif e == v:
                v = links[v, 1]
        else:
            links[u, 1] = e
            links[e, 0] = u
            links[v, 0] = e
            links[e, 1] = v
            if e < M:
                u = e
            else:
                v = e
    return k


def merge_range(pts, links, in_slots, out_slots, jobs, lo, hi):
    """Run jobs[lo:hi] (rows of L, M, R) back to back."""
    for idx in range(lo, hi):
        r = merge_movies(
            pts, links, in_slots, out_slots,
            int(jobs[idx, 0]), int(jobs[idx, 1]), int(jobs[idx, 2]),
        )
        if r < 0:
            return r
    return 0


def hull_recursive(pts, links, out_slots, scratch_slots, lo, hi):
    """Top-down reference solver: recurse on the floor-midpoint split with
    buffer roles swapped, then merge. The final log lands at slot 2*lo of
    ``out_slots``. Returns its event count or a negative error code."""
    if hi - lo == 1:
        links[lo, 0] = NIL
        links[lo, 1] = NIL
        out_slots[2 * lo] = NIL
        return 0
    mid = lo + (hi - lo) // 2
    r = hull_recursive(pts, links, scratch_slots, out_slots, lo, mid)
    if r < 0:
        return r
    r = hull_recursive(pts, links, scratch_slots, out_slots, mid, hi)
    if r < 0:
        return r
    return merge_movies(pts, links, scratch_slots, out_slots, lo, mid, hi)


def replay(links, slots, off, count):
    """Apply act to the first ``count`` events of the log at ``off``."""
    for idx in range(count):
        e = slots[off + idx]
        if e == NIL:
            return E_COUNT
        if act(links, e) < 0:
            return E_CHAIN
    return 0


def rewind_replay(links, slots, off, count):
    """Apply act to events count-1 .. 0; act is its own inverse, so this
    undoes a replay of the same count."""
    for idx in range(count - 1, -1, -1):
        e = slots[off + idx]
        if e == NIL:
            return E_COUNT
        if act(links, e) < 0:
            return E_CHAIN
    return 0


def extract_faces(links, slots, off, faces):
    """Emit (prev[e], e, next[e]) for each event, then act(e). Fills
    ``faces`` (shape (k, 3)) and returns the number of rows written."""
    m = 0
    idx = off
    limit = faces.shape[0]
    while True:
        e = slots[idx]
        if e == NIL:
            return m
        if m >= limit:
            return E_OVERFLOW
        faces[m, 0] = links[e, 0]
        faces[m, 1] = e
        faces[m, 2] = links[e, 1]
        if act(links, e) < 0:
            return E_CHAIN
        m += 1
        idx += 1


def log_length(slots, off, cap):
    """Number of events before the NIL terminator, scanning at most cap."""
    view = slots[off : off + cap]
    hits = view == NIL
    if not hits.any():
        return E_UNTERMINATED
    return int(np.argmax(hits))


def copy_log(src, dst, off, cap):
    """Carry: copy a log (terminator included) between buffers in place."""
    k = log_length(src, off, cap)
    if k < 0:
        return k
    dst[off : off + k + 1] = src[off : off + k + 1]
    return k
