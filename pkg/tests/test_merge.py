import numpy as np
import pytest

from conftest import (
    heavy_tailed_time,
    make_store,
    replayed_event_times,
    run_levels,
    snapshot_at,
)
from hull3d.generators import generate
from hull3d.merge import BridgeWalkError, MergeJob, find_initial_bridge, merge_movies
from hull3d.oracle import brute_force_hull, lower_hull_2d
from hull3d.store import (
    NIL,
    EventLog,
    MovieBuffer,
    PointStore,
    init_base_logs,
    replay,
    rewind_replay,
)


def merged_pairs(points):
    """Store with level-1 merges done: adjacent pairs linked, logs in B."""
    store = make_store(points)
    n = store.n
    A, B = MovieBuffer(n), MovieBuffer(n)
    init_base_logs(store, A)
    for L in range(0, n - 1, 2):
        merge_movies(MergeJob(L, L + 1, min(L + 2, n), A, B), store)
    if n % 2:
        B.slots[2 * (n - 1)] = NIL
    return store, A, B


def test_bridge_of_two_singletons(each_kernel):
    store = PointStore(np.array([[0.0, 0, 0], [1.0, 2, 3]]))
    buf = MovieBuffer(2)
    init_base_logs(store, buf)
    assert find_initial_bridge(store, 0, 1) == (0, 1)


def test_bridge_hand_example(each_kernel):
    # static kinetics (all y = 0): z plays the role of the 2D ordinate
    pts = np.array([[0.0, 0, 0], [1, 0, -1], [2, 0, -1], [3, 0, 0]])
    store, _, B = merged_pairs(pts)
    assert find_initial_bridge(store, 1, 2) == (1, 2)


def test_bridge_matches_2d_oracle_before_first_event(each_kernel):
    for seed in range(10):
        points = generate(32, "gauss", seed)
        store, A, B = merged_pairs(points)
        # merge the two 16-point halves up from pairs, then inspect level 5
        inbuf, outbuf = B, A
        for level, size in ((2, 4), (3, 8), (4, 16)):
            for L in range(0, 32, size):
                merge_movies(MergeJob(L, L + size // 2, L + size, inbuf, outbuf), store)
            inbuf, outbuf = outbuf, inbuf
        u, v = find_initial_bridge(store, 15, 16)
        # probe below every merged event (bridge transitions included), so
        # the union's hull still matches the dawn-of-time bridge
        merge_movies(MergeJob(0, 16, 32, inbuf, outbuf), store)
        times = replayed_event_times(store, EventLog(outbuf, 0))
        t = min(times, default=0.0) - 1.0
        proj = [(store.x[i], store.z[i] - t * store.y[i]) for i in range(32)]
        chain = lower_hull_2d(proj)
        crossing = [
            (a, b) for a, b in zip(chain, chain[1:]) if a < 16 <= b
        ]
        assert crossing == [(u, v)]


def test_merge_two_singletons_empty_movie(each_kernel):
    store = PointStore(np.array([[0.0, 1, 2], [1.0, -1, 0.5]]))
    A, B = MovieBuffer(2), MovieBuffer(2)
    init_base_logs(store, A)
    k = merge_movies(MergeJob(0, 1, 2, A, B), store)
    assert k == 0
    assert B.slots[0] == NIL
    assert store.next[0] == 1 and store.prev[1] == 0
    assert store.prev[0] == NIL and store.next[1] == NIL


def test_merged_4_points_match_snapshots(each_kernel):
    rng = np.random.default_rng(0)
    for seed in range(10):
        run_levels(generate(4, "gauss", seed), times_per_group=10, rng=rng)


def test_full_bottom_up_matches_brute_force_lower(each_kernel):
    points = np.asarray(sorted(map(tuple, generate(64, "ball", 123))))
    store, log, _ = run_levels(points)
    from hull3d.store import extract_faces

    got = {tuple(sorted(map(int, f))) for f in extract_faces(store, log)}
    assert got == brute_force_hull(points).lower


def test_merge_mutates_only_its_range(each_kernel):
    points = generate(32, "gauss", 9)
    store, A, B = merged_pairs(points)
    links_before = store.links.copy()
    out_before = A.slots.copy()
    merge_movies(MergeJob(8, 10, 12, B, A), store)  # middle 4 points only
    changed_links = np.flatnonzero((store.links != links_before).any(axis=1))
    assert changed_links.size and (changed_links >= 8).all() and (changed_links < 12).all()
    changed_slots = np.flatnonzero(A.slots != out_before)
    assert (changed_slots >= 16).all() and (changed_slots < 24).all()


def test_recorded_times_strictly_increase(each_kernel):
    for seed in range(8):
        points = generate(40, "ball", seed)
        store, log, _ = run_levels(points)
        times = replayed_event_times(store, log)
        assert all(a < b for a, b in zip(times, times[1:]))


def test_merged_count_bound(each_kernel):
    # k <= kL + kR + (vertices ever on the merged kinetic hull): every
    # merged event is a surviving sub-movie event or a bridge transition,
    # and the latter only involve points that show up on the merged hull
    for seed in range(8):
        points = generate(32, "gauss", 100 + seed)
        store, A, B = merged_pairs(points)
        inbuf, outbuf = B, A
        for level, size in ((2, 4), (3, 8), (4, 16)):
            for L in range(0, 32, size):
                kl = len(EventLog(inbuf, 2 * L))
                kr = len(EventLog(inbuf, 2 * L + size))
                k = merge_movies(
                    MergeJob(L, L + size // 2, L + size, inbuf, outbuf), store
                )
                log = EventLog(outbuf, 2 * L)
                hull_vertices = set(store.chain_from(L)) | set(map(int, log.events()))
                assert k <= kl + kr + len(hull_vertices)
                assert k < 2 * size  # hard capacity bound
            inbuf, outbuf = outbuf, inbuf


def test_merge_determinism(each_kernel):
    points = generate(16, "ball", 77)
    store1, A1, B1 = merged_pairs(points)
    store2, A2, B2 = merged_pairs(points)
    merge_movies(MergeJob(0, 2, 4, B1, A1), store1)
    merge_movies(MergeJob(0, 2, 4, B2, A2), store2)
    assert np.array_equal(store1.links, store2.links)
    assert np.array_equal(A1.slots, A2.slots)


def test_replay_reaches_end_of_time_state(each_kernel):
    # after a merge the chain is at start of time; replaying the whole log
    # must land on the end-of-time hull (checkable via the snapshot oracle
    # at probe times beyond every event)
    rng = np.random.default_rng(42)
    for seed in range(6):
        points = generate(24, "gauss", seed)
        store, log, _ = run_levels(points)
        times = replayed_event_times(store, log)
        lo = min(times, default=0.0) - 1.0
        hi = max(times, default=0.0) + 1.0
        from hull3d.oracle import snapshot_check

        assert snapshot_check(store, log, (0, store.n), lo)
        assert snapshot_check(store, log, (0, store.n), hi)
        k = len(log)
        before = store.links.copy()
        replay(store, log, k)
        rewind_replay(store, log, k)
        assert np.array_equal(store.links, before)


def test_merge_job_validation():
    buf = MovieBuffer(4)
    job = MergeJob(2, 1, 4, buf, buf)
    with pytest.raises(ValueError):
        job.validate(4)
    with pytest.raises(ValueError):
        MergeJob(0, 2, 8, buf, buf).validate(8)  # capacity 8 < 2R=16
