"""Planar orientation predicates and the kinetic time function.

The solver views a 3D point (x, y, z) as a planar point (x, z - t*y) whose
ordinate drifts linearly with a time parameter t. As t sweeps the reals,
structural changes of the 2D lower hull of the moving points enumerate the
lower facets of the 3D hull, so the only geometry the engine ever needs is
a signed-area turn on two coordinate planes and the instant at which three
moving points become collinear.

Everything here is pure double-precision arithmetic with no tolerances;
degeneracy policy lives at the API layer (hull3d.api). ``+inf`` is the
"never" time: it compares strictly greater than every finite time, so
candidate-minimization loops need no special cases.
"""

from __future__ import annotations

import math
from typing import NamedTuple

INF = math.inf


class Point3(NamedTuple):
    """Immutable 3D input point. Coordinates must be finite."""

    x: float
    y: float
    z: float


def turn_xy(p, q, r) -> float:
    """Signed area of (p, q, r) projected to the xy-plane.

    Positive means a left (counterclockwise) turn, negative a right turn,
    zero collinear. Accepts any indexable (x, y, z) triples.
    """
    return (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1])


def turn_xz(p, q, r) -> float:
    """Signed area of (p, q, r) projected to the xz-plane."""
    return (q[0] - p[0]) * (r[2] - p[2]) - (r[0] - p[0]) * (q[2] - p[2])


def event_time(p, q, r) -> float:
    """Time at which the kinetic projections of p, q, r become collinear.

    The projected turn of the triple at time t equals
    ``turn_xz(p,q,r) - t * turn_xy(p,q,r)``, so the unique root is their
    ratio. When ``turn_xy`` vanishes the points drift in parallel and never
    change orientation: the result is ``+inf``. Invariant under permutations
    of the triple (both determinants flip sign together).
    """
    den = turn_xy(p, q, r)
    if den == 0.0:
        return INF
    return turn_xz(p, q, r) / den


def project(p, t: float) -> tuple[float, float]:
    """Kinetic projection of p at finite time t: ``(x, z - t*y)``.

    The 2D lower hull of projected points at time t corresponds to the 3D
    lower-z hull facets whose supporting plane is ``z = a*x + t*y + c``.
    Every module uses this one convention; at ``t -> -inf`` the projected
    turn sign degenerates to the plain ``turn_xy`` sign, which is what the
    bridge search relies on.
    """
    return (p[0], p[2] - t * p[1])
