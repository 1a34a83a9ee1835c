"""Command-line surface: generate, hull, verify, bench.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
3 degenerate input. Worker count falls back to the HULL3D_WORKERS
environment variable, then the machine's core count.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from . import kernels
from .api import convex_hull_3d
from .backends import ThreadBackend
from .bench import (
    main_progress,
    run_bench,
    run_impl_compare,
    write_csv,
    write_impl_csv,
    write_levels_csv,
)
from .generators import DISTRIBUTIONS, generate
from .oracle import (
    DegenerateInputError,
    EventTimeCollision,
    brute_force_hull,
    snapshot_check,
)
from .parallel import build_movie
from .store import EventLog, MovieBuffer, PointStore

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_DEGENERATE = 3


class PointFileError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; this tool reserves 2 for
    # verification failures, so usage errors exit 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_points(path: str) -> np.ndarray:
    """Parse a point file: one `x y z` per line, `#` comments ignored."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) != 3:
                raise PointFileError(
                    f"{path}:{lineno}: expected 3 numbers, got {len(parts)}"
                )
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                raise PointFileError(f"{path}:{lineno}: not a number") from None
    if not rows:
        raise PointFileError("no points")
    return np.asarray(rows, dtype=np.float64)


def write_points(path: str, points: np.ndarray) -> None:
    # repr round-trips doubles exactly through the reader above
    with open(path, "w", encoding="utf-8") as fh:
        for p in points:
            fh.write(f"{float(p[0])!r} {float(p[1])!r} {float(p[2])!r}\n")


def write_faces(path: str, faces: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, c in faces:
            fh.write(f"{a} {b} {c}\n")


def write_obj(path: str, points: np.ndarray, faces: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in points:
            fh.write(f"v {float(p[0])!r} {float(p[1])!r} {float(p[2])!r}\n")
        for a, b, c in faces:
            fh.write(f"f {a + 1} {b + 1} {c + 1}\n")


def _random_probe_time(rng) -> float:
    # heavy-tailed so probes land below, between, and above all event times
    return math.tan(math.pi * (rng.random() - 0.5))


def final_group_snapshot_ok(points: np.ndarray, times: int, rng) -> bool:
    """Run the movie build, then snapshot-check the final merged group at
    ``times`` random probe times."""
    coords = points[np.lexsort((points[:, 2], points[:, 1], points[:, 0]))]
    store = PointStore(coords)
    n = store.n
    final, _ = build_movie(store, MovieBuffer(n), MovieBuffer(n))
    log = EventLog(final, 0)
    for _ in range(times):
        for _attempt in range(100):
            try:
                ok = snapshot_check(store, log, (0, n), _random_probe_time(rng))
                break
            except EventTimeCollision:
                continue
        else:
            raise RuntimeError("could not find a collision-free probe time")
        if not ok:
            return False
    return True


def cmd_generate(args) -> int:
    points = generate(args.n, args.dist, args.seed)
    write_points(args.out, points)
    print(f"wrote {args.n} {args.dist} points to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_hull(args) -> int:
    try:
        points = read_points(getattr(args, "in"))
    except (OSError, PointFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    t0 = time.perf_counter()
    try:
        if args.backend == "serial":
            result = convex_hull_3d(points, solver="serial")
        else:
            with ThreadBackend(args.workers) as backend:
                result = convex_hull_3d(points, backend, solver="parallel")
    except DegenerateInputError as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ms = (time.perf_counter() - t0) * 1e3

    write_faces(args.out, result.faces)
    if args.obj:
        write_obj(args.obj, points, result.faces)
    stats = result.stats
    flag = " (x-ties perturbed)" if stats.perturbed else ""
    print(
        f"n={stats.n} h={len(result.vertices)} F={len(result.faces)} "
        f"levels={stats.levels} ms={ms:.1f}{flag}",
        file=sys.stderr,
    )
    return EXIT_OK


def _dump_counterexample(points, got: set, expected: set) -> None:
    print("counterexample points:", file=sys.stderr)
    for p in points:
        print(f"  {float(p[0])!r} {float(p[1])!r} {float(p[2])!r}", file=sys.stderr)
    print(f"engine faces ({len(got)}): {sorted(got)}", file=sys.stderr)
    print(f"oracle faces ({len(expected)}): {sorted(expected)}", file=sys.stderr)


def cmd_verify(args) -> int:
    sizes = []
    n = 4
    while n <= args.max_n:
        sizes.append(n)
        n *= 2
    if not sizes:
        print("error: --max-n must be at least 4", file=sys.stderr)
        return EXIT_USAGE
    dists = ("ball", "sphere", "gauss")
    checked = 0
    t0 = time.perf_counter()
    for size in sizes:
        for seed in range(args.seeds):
            dist = dists[seed % len(dists)]
            points = generate(size, dist, seed)
            result = convex_hull_3d(points)
            expected = brute_force_hull(points)
            got = result.face_set()
            if got != expected.all:
                print(
                    f"FAIL: face sets differ at n={size} dist={dist} seed={seed}",
                    file=sys.stderr,
                )
                _dump_counterexample(points, got, expected.all)
                return EXIT_VERIFY
            rng = np.random.default_rng(seed + 1)
            if not final_group_snapshot_ok(points, args.times, rng):
                print(
                    f"FAIL: kinetic snapshot mismatch at n={size} dist={dist} "
                    f"seed={seed}",
                    file=sys.stderr,
                )
                _dump_counterexample(points, got, expected.all)
                return EXIT_VERIFY
            checked += 1
        print(f"verified n={size}: {args.seeds} seeds ok", file=sys.stderr)
    dt = time.perf_counter() - t0
    print(f"verify: {checked} cases passed in {dt:.1f}s", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.compare_impl:
        rows = run_impl_compare(
            args.min_exp, args.max_exp, reps=args.reps, seed=args.seed,
            workers=args.workers, dist=args.dist, progress=main_progress,
        )
        write_impl_csv(rows, args.csv)
        print(f"wrote {args.csv}", file=sys.stderr)
        return EXIT_OK
    records, level_rows = run_bench(
        args.min_exp,
        args.max_exp,
        reps=args.reps,
        seed=args.seed,
        workers=args.workers,
        dist=args.dist,
        collect_levels=bool(args.levels_csv),
        progress=main_progress,
    )
    write_csv(records, args.csv)
    if args.levels_csv:
        write_levels_csv(level_rows, args.levels_csv)
        print(f"wrote {args.levels_csv}", file=sys.stderr)
    print(f"wrote {args.csv}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="hull3d", description=__doc__)
    parser.add_argument(
        "--kernel",
        choices=["compiled", "python"],
        help="force a kernel implementation (default: compiled if built)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a deterministic point file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dist", choices=DISTRIBUTIONS, default="ball")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("hull", help="compute the hull of a point file")
    p.add_argument("--in", required=True, help="input point file")
    p.add_argument("--out", required=True, help="output face file (i j k per line)")
    p.add_argument("--obj", help="optional OBJ export path")
    p.add_argument("--backend", choices=["serial", "parallel"], default="parallel")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("verify", help="engine vs brute-force oracle campaign")
    p.add_argument("--max-n", type=int, default=128, dest="max_n")
    p.add_argument("--seeds", type=int, default=200)
    p.add_argument("--times", type=int, default=10, help="snapshot probes per case")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="doubling-size benchmark sweep to CSV")
    p.add_argument("--min-exp", type=int, default=2, dest="min_exp")
    p.add_argument("--max-exp", type=int, default=23, dest="max_exp")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--dist", choices=DISTRIBUTIONS, default="ball")
    p.add_argument("--csv", required=True)
    p.add_argument(
        "--levels-csv",
        dest="levels_csv",
        help="also write per-level parallel times (n,level,ms)",
    )
    p.add_argument(
        "--compare-impl",
        action="store_true",
        help="benchmark both kernel implementations (n,impl,... CSV schema)",
    )
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.kernel:
        try:
            kernels.use(args.kernel)
        except RuntimeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())
