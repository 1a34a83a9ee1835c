"""Independent brute-force verifiers.

Nothing here shares code with the kinetic engine: the 3D facet enumerator
is a direct O(n^4) definition-chasing scan, and the 2D check is a plain
monotone-chain lower hull. Both are deliberately simple enough to trust by
inspection; the engine's tests and the verify command lean on them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .geometry import event_time
from .store import NIL, EventLog, PointStore, act

PLANE_TOL = 1e-9  # relative near-plane tolerance for the degeneracy scan


class DegenerateInputError(ValueError):
    """Input violates the general-position contract in a way that makes
    facet decisions ambiguous."""


@dataclass
class FaceSet:
    """Hull facets as unordered index triples, split by outward-normal
    z-sign: lower facets are visible from z = -inf."""

    lower: set[tuple[int, int, int]] = field(default_factory=set)
    upper: set[tuple[int, int, int]] = field(default_factory=set)

    @property
    def all(self) -> set[tuple[int, int, int]]:
        return self.lower | self.upper

    @property
    def vertices(self) -> set[int]:
        return {i for tri in self.all for i in tri}

    def __len__(self) -> int:
        return len(self.lower) + len(self.upper)


@lru_cache(maxsize=32)
def _triples(n: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(n), 3)), dtype=np.int64)


def brute_force_hull(points, chunk: int = 32768) -> FaceSet:
    """Enumerate hull facets by definition: {i, j, k} is a facet iff every
    other point lies strictly on one side of its plane.

    Side tests are exact (tolerance zero); separately, any other point
    within a 1e-9 relative distance of a candidate plane that the remaining
    points do not clearly straddle raises DegenerateInputError, since the
    facet decision would hinge on noise.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("points must have shape (n, 3)")
    n = pts.shape[0]
    if n < 4:
        raise ValueError("need at least 4 points")

    scale = float(np.abs(pts).max())
    scale = max(scale, 1e-30)
    triples = _triples(n)
    faces = FaceSet()

    for start in range(0, len(triples), chunk):
        tri = triples[start : start + chunk]
        ia, ib, ic = tri[:, 0], tri[:, 1], tri[:, 2]
        a = pts[ia]
        normals = np.cross(pts[ib] - a, pts[ic] - a)
        offs = np.einsum("ij,ij->i", normals, a)
        side = normals @ pts.T - offs[:, None]  # (T, n)
        rows = np.arange(len(tri))
        side[rows, ia] = np.nan  # exclude the triple's own points
        side[rows, ib] = np.nan
        side[rows, ic] = np.nan

        thr = PLANE_TOL * scale * np.linalg.norm(normals, axis=1)
        above = side > thr[:, None]
        below = side < -thr[:, None]
        near = np.abs(side) <= thr[:, None]  # NaN compares False throughout
        n_above = above.sum(axis=1)
        n_below = below.sum(axis=1)
        n_near = near.sum(axis=1)

        ambiguous = (n_near > 0) & ~((n_above > 0) & (n_below > 0))
        if ambiguous.any():
            raise DegenerateInputError(
                "near-coplanar points make a facet decision ambiguous "
                f"(triple {tuple(int(v) for v in tri[int(np.argmax(ambiguous))])})"
            )

        pos = (side > 0.0).sum(axis=1)
        neg = (side < 0.0).sum(axis=1)
        others = n - 3
        for t in np.flatnonzero((pos == others) | (neg == others)):
            nz = normals[t, 2]
            # outward normal points away from the cloud
            outward_z = -nz if pos[t] == others else nz
            if outward_z == 0.0:
                raise DegenerateInputError("vertical facet (outward normal has zero z)")
            key = (int(tri[t, 0]), int(tri[t, 1]), int(tri[t, 2]))
            (faces.lower if outward_z < 0.0 else faces.upper).add(key)
    return faces


def lower_hull_2d(pts) -> list[int]:
    """Monotone-chain lower hull indices of (x, w) pairs sorted by x.

    Interior triples of the result are all strict left turns; collinear
    middle points are excluded. Raises on unsorted or duplicate x.
    """
    chain: list[int] = []
    last_x = None
    for i, (px, pw) in enumerate(pts):
        if last_x is not None and px <= last_x:
            raise ValueError("points must be sorted by strictly increasing x")
        last_x = px
        while len(chain) >= 2:
            ax, aw = pts[chain[-2]]
            bx, bw = pts[chain[-1]]
            if (bx - ax) * (pw - aw) - (px - ax) * (bw - aw) <= 0.0:
                chain.pop()
            else:
                break
        chain.append(i)
    return chain


class EventTimeCollision(RuntimeError):
    """The probe time essentially equals an event time; pick another t."""


def snapshot_check(
    store: PointStore,
    log: EventLog,
    group: tuple[int, int],
    t: float,
    collision_tol: float = 1e-12,
) -> bool:
    """Does the replayed kinetic chain at time t equal the independently
    computed 2D lower hull of the projected group?

    The store must be at the group's start-of-time chain state; it is
    restored before returning. Event times are evaluated the way replay
    sees them: event_time(prev[e], e, next[e]) just before each act.
    """
    L, R = group
    prev, nxt = store.prev, store.next
    x, y, z = store.x, store.y, store.z
    applied: list[int] = []

    def undo() -> None:
        for e in reversed(applied):
            act(store, e)

    slots = log.buffer.slots
    idx = log.offset
    while True:
        e = int(slots[idx])
        if e == NIL:
            break
        pe, ne = int(prev[e]), int(nxt[e])
        te = event_time(
            (x[pe], y[pe], z[pe]), (x[e], y[e], z[e]), (x[ne], y[ne], z[ne])
        )
        if abs(te - t) <= collision_tol * max(1.0, abs(te)):
            undo()
            raise EventTimeCollision(f"probe time {t} collides with event time {te}")
        if te > t:
            break
        act(store, e)
        applied.append(e)
        idx += 1

    got = []
    i = L
    while i != NIL:
        got.append(i)
        i = int(nxt[i])
        if len(got) > R - L:
            undo()
            raise RuntimeError("chain walk exceeded the group size")

    projected = [(float(x[i]), float(z[i] - t * y[i])) for i in range(L, R)]
    expected = [L + i for i in lower_hull_2d(projected)]
    undo()
    return got == expected
