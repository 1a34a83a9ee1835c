"""3D convex hulls via a kinetic, bottom-up divide-and-conquer merge engine.

The input is sorted by x and viewed as planar points (x, z - t*y) moving
over a time parameter t; hull events of that kinetic picture enumerate the
3D lower-hull facets. Per-point trivial event logs are merged pairwise in
ceil(log2 n) data-parallel levels over double-buffered flat event arrays;
an upper pass on z-negated input completes the hull.

Hot kernels live in a compiled extension with a pure-Python fallback
(hull3d.kernels selects at import; HULL3D_KERNEL overrides). Brute-force
oracles (hull3d.oracle) back every correctness claim.
"""

from .api import HullResult, HullStats, convex_hull_3d, perturb_ties
from .backends import ExecutionBackend, SerialBackend, ThreadBackend, resolve_workers
from .generators import generate
from .geometry import INF, Point3, event_time, project, turn_xy, turn_xz
from .merge import BridgeWalkError, MergeJob, MergeOverflowError, find_initial_bridge, merge_movies
from .oracle import (
    DegenerateInputError,
    FaceSet,
    brute_force_hull,
    lower_hull_2d,
    snapshot_check,
)
from .parallel import LevelPlan, build_movie, level_count, plan_level
from .serial import build_movie_serial, hull_recursive
from .store import (
    NIL,
    EventLog,
    MovieBuffer,
    PointStore,
    act,
    extract_faces,
    init_base_logs,
    replay,
    rewind_replay,
)

__version__ = "0.1.0"

__all__ = [
    "BridgeWalkError",
    "DegenerateInputError",
    "EventLog",
    "ExecutionBackend",
    "FaceSet",
    "HullResult",
    "HullStats",
    "INF",
    "LevelPlan",
    "MergeJob",
    "MergeOverflowError",
    "MovieBuffer",
    "NIL",
    "Point3",
    "PointStore",
    "SerialBackend",
    "ThreadBackend",
    "act",
    "brute_force_hull",
    "build_movie",
    "build_movie_serial",
    "convex_hull_3d",
    "event_time",
    "extract_faces",
    "find_initial_bridge",
    "generate",
    "hull_recursive",
    "init_base_logs",
    "level_count",
    "lower_hull_2d",
    "merge_movies",
    "perturb_ties",
    "plan_level",
    "project",
    "replay",
    "resolve_workers",
    "rewind_replay",
    "snapshot_check",
    "turn_xy",
    "turn_xz",
    "__version__",
]
