import numpy as np
import pytest

from conftest import ShuffleBackend, lexsorted, make_store
from hull3d.backends import SerialBackend, ThreadBackend
from hull3d.generators import generate
from hull3d.parallel import build_movie, level_count, plan_level
from hull3d.serial import build_movie_serial, hull_recursive
from hull3d.store import NIL, EventLog, MovieBuffer, PointStore, init_base_logs


def final_log(points, engine, backend=None):
    store = make_store(points)
    n = store.n
    A, B = MovieBuffer(n), MovieBuffer(n)
    if engine == "serial":
        buf, levels = build_movie_serial(store, A, B)
    else:
        buf, levels = build_movie(store, A, B, backend)
    log = EventLog(buf, 0)
    return store, log, levels


def log_with_terminator(log):
    k = len(log)
    return log.buffer.slots[log.offset : log.offset + k + 1].copy()


def test_base_cases():
    for n in (1, 2):
        pts = generate(n, "gauss", 0)
        store, log, levels = final_log(pts, "parallel")
        assert levels == level_count(n) == (0 if n == 1 else 1)
        assert len(log) == 0
        s2, log2, lv2 = final_log(pts, "serial")
        assert lv2 == levels and len(log2) == 0
        if n == 2:
            assert store.next[0] == 1 and store.prev[1] == 0


def test_level_count_examples():
    assert level_count(1) == 0
    assert level_count(2) == 1
    assert level_count(3) == 2
    assert level_count(2**23) == 23  # largest default benchmark size
    with pytest.raises(ValueError):
        level_count(0)


def test_plan_level_power_of_two():
    plan = plan_level(8, 1)
    assert plan.jobs.tolist() == [[0, 1, 2], [2, 3, 4], [4, 5, 6], [6, 7, 8]]
    assert plan.carries == []
    plan = plan_level(8, 3)
    assert plan.jobs.tolist() == [[0, 4, 8]]
    assert plan.carries == []


def test_plan_level_ragged_n5():
    plan = plan_level(5, 1)
    assert plan.jobs.tolist() == [[0, 1, 2], [2, 3, 4]]
    assert plan.carries == [4]
    plan = plan_level(5, 2)
    assert plan.jobs.tolist() == [[0, 2, 4]]
    assert plan.carries == [4]
    plan = plan_level(5, 3)
    assert plan.jobs.tolist() == [[0, 4, 5]]
    assert plan.carries == []


def test_plan_level_covers_range_disjointly():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(2, 5000))
        for level in range(1, level_count(n) + 1):
            plan = plan_level(n, level)
            segments = [(int(L), int(R)) for L, M, R in plan.jobs]
            segments += [
                (c, min(c + plan.group_size // 2, n)) for c in plan.carries
            ]
            segments.sort()
            assert segments[0][0] == 0 and segments[-1][1] == n
            assert all(a[1] == b[0] for a, b in zip(segments, segments[1:]))
            for L, M, R in plan.jobs:
                assert L < M < R <= n
                assert M == L + plan.group_size // 2
    with pytest.raises(ValueError):
        plan_level(8, 4)
    with pytest.raises(ValueError):
        plan_level(8, 0)


def test_serial_parallel_log_equality_power_of_two():
    for n in (2, 4, 8, 16, 64, 256):
        for seed in range(6):
            pts = generate(n, "ball", seed)
            s_ser, log_ser, _ = final_log(pts, "serial")
            s_par, log_par, _ = final_log(pts, "parallel")
            assert np.array_equal(
                log_with_terminator(log_ser), log_with_terminator(log_par)
            )
            # identical merge trees leave identical chain state too
            assert np.array_equal(s_ser.links, s_par.links)


def test_serial_parallel_log_equality_ragged():
    # the merge trees differ, but the final movie is canonical: the
    # chronological event sequence of the whole group's kinetic hull
    for n in (3, 5, 6, 7, 12, 100, 193):
        for seed in range(4):
            pts = generate(n, "gauss", seed)
            _, log_ser, _ = final_log(pts, "serial")
            _, log_par, _ = final_log(pts, "parallel")
            assert np.array_equal(
                log_with_terminator(log_ser), log_with_terminator(log_par)
            )


def test_recursion_depth_matches_level_count():
    import math

    for n in (2, 3, 5, 17, 100, 256):
        pts = generate(n, "ball", 0)
        _, _, levels = final_log(pts, "serial")
        assert levels == math.ceil(math.log2(n))


def test_hull_recursive_range_validation():
    store = make_store(generate(4, "ball", 0))
    A, B = MovieBuffer(4), MovieBuffer(4)
    with pytest.raises(ValueError):
        hull_recursive(store, 2, 2, A, B)
    with pytest.raises(ValueError):
        hull_recursive(store, 0, 5, A, B)


def test_schedule_independence():
    for n in (64, 100, 257):
        pts = generate(n, "ball", 3)
        store_ref = make_store(pts)
        A, B = MovieBuffer(n), MovieBuffer(n)
        ref_buf, _ = build_movie(store_ref, A, B, SerialBackend())
        ref_slots = ref_buf.slots.copy()
        ref_links = store_ref.links.copy()
        backends = [
            ShuffleBackend(seed=1),
            ShuffleBackend(seed=2, parts=13),
            ThreadBackend(2),
            ThreadBackend(8),
        ]
        for be in backends:
            store = make_store(pts)
            buf, _ = build_movie(store, MovieBuffer(n), MovieBuffer(n), be)
            assert np.array_equal(buf.slots, ref_slots)
            assert np.array_equal(store.links, ref_links)
            if isinstance(be, ThreadBackend):
                be.close()


def test_coordinates_never_move():
    pts = generate(200, "ball", 8)
    store = make_store(pts)
    coords_before = store.pts.copy()
    A, B = MovieBuffer(200), MovieBuffer(200)
    build_movie(store, A, B, ThreadBackend(2))
    assert np.array_equal(store.pts, coords_before)


def test_disjoint_writes_per_level():
    # run each level's jobs one at a time, recording which links and output
    # slots each job touches; within a level those sets must be pairwise
    # disjoint and confined to the job's ranges
    from hull3d import kernels
    from hull3d.merge import MergeJob, merge_movies

    pts = generate(53, "gauss", 13)
    store = make_store(pts)
    n = store.n
    A, B = MovieBuffer(n), MovieBuffer(n)
    init_base_logs(store, A)
    inbuf, outbuf = A, B
    for level in range(1, level_count(n) + 1):
        plan = plan_level(n, level)
        touched_links: list[set] = []
        touched_slots: list[set] = []
        for L, M, R in plan.jobs:
            links_before = store.links.copy()
            slots_before = outbuf.slots.copy()
            merge_movies(MergeJob(int(L), int(M), int(R), inbuf, outbuf), store)
            lt = set(np.flatnonzero((store.links != links_before).any(axis=1)).tolist())
            st = set(np.flatnonzero(outbuf.slots != slots_before).tolist())
            assert all(L <= i < R for i in lt)
            assert all(2 * L <= s < 2 * R for s in st)
            touched_links.append(lt)
            touched_slots.append(st)
        for i in range(len(touched_links)):
            for j in range(i + 1, len(touched_links)):
                assert not (touched_links[i] & touched_links[j])
                assert not (touched_slots[i] & touched_slots[j])
        for Lc in plan.carries:
            kernels.active().copy_log(inbuf.slots, outbuf.slots, 2 * Lc, 2 * n - 2 * Lc)
        inbuf, outbuf = outbuf, inbuf


def test_build_movie_rejects_small_buffers():
    store = make_store(generate(8, "ball", 0))
    with pytest.raises(ValueError):
        build_movie(store, MovieBuffer(4), MovieBuffer(8))


def test_level_times_instrumentation():
    pts = generate(128, "ball", 2)
    store = make_store(pts)
    times: list[float] = []
    _, levels = build_movie(store, MovieBuffer(128), MovieBuffer(128), level_times=times)
    assert len(times) == levels == 7
    assert all(t >= 0 for t in times)
