# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the kinetic hull engine.

Function-for-function mirror of hull3d._pykernels; see that module for the
semantics. All hot loops run without the GIL so the thread backend gets
real core-level parallelism. The build disables FMA contraction, keeping
event times bit-identical to the pure-Python twin.

Layout: ``pts`` rows of 3 doubles, ``links`` rows of (prev, next) int32;
internally both are walked through raw pointers (P[3*i+c], L[2*i+s]).
"""

from libc.math cimport INFINITY

import numpy as np

IMPL = "compiled"

NIL = -1
E_OVERFLOW = -1
E_BRIDGE = -2
E_CHAIN = -3
E_COUNT = -4
E_UNTERMINATED = -5

cdef int C_NIL = -1
cdef long long C_OVERFLOW = -1
cdef long long C_BRIDGE = -2
cdef long long C_CHAIN = -3
cdef long long C_COUNT = -4
cdef long long C_UNTERMINATED = -5


cdef inline double _evtime(const double* P, long p, long q, long r) noexcept nogil:
    cdef double px, py, pz, qpx, rpx, den
    if p == C_NIL or q == C_NIL or r == C_NIL:
        return INFINITY
    px = P[3 * p]
    py = P[3 * p + 1]
    qpx = P[3 * q] - px
    rpx = P[3 * r] - px
    den = qpx * (P[3 * r + 1] - py) - rpx * (P[3 * q + 1] - py)
    if den == 0.0:
        return INFINITY
    pz = P[3 * p + 2]
    return (qpx * (P[3 * r + 2] - pz) - rpx * (P[3 * q + 2] - pz)) / den


cdef inline int _act(int* L, long i) noexcept nogil:
    cdef long p = L[2 * i]
    cdef long n = L[2 * i + 1]
    if p == C_NIL or n == C_NIL:
        return -1
    if L[2 * p + 1] != i:
        L[2 * p + 1] = <int>i
        L[2 * n] = <int>i
    else:
        L[2 * p + 1] = <int>n
        L[2 * n] = <int>p
    return 0


cdef long long _find_bridge(const double* P, const int* L,
                            long* pu, long* pv, long limit) noexcept nogil:
    cdef long u = pu[0]
    cdef long v = pv[0]
    cdef long vn, up
    cdef long steps = 0
    while True:
        vn = L[2 * v + 1]
        if vn != C_NIL and (P[3 * v] - P[3 * u]) * (P[3 * vn + 1] - P[3 * u + 1]) - (P[3 * vn] - P[3 * u]) * (P[3 * v + 1] - P[3 * u + 1]) < 0.0:
            v = vn
        else:
            up = L[2 * u]
            if up != C_NIL and (P[3 * u] - P[3 * up]) * (P[3 * v + 1] - P[3 * up + 1]) - (P[3 * v] - P[3 * up]) * (P[3 * u + 1] - P[3 * up + 1]) < 0.0:
                u = up
            else:
                pu[0] = u
                pv[0] = v
                return 0
        steps += 1
        if steps > limit:
            return C_BRIDGE


cdef long long _merge_one(const double* P, int* L,
                          const int* in_slots, int* out_slots,
                          long lg, long mg, long rg) noexcept nogil:
    cdef long cap = 2 * (rg - lg)
    cdef long u = mg - 1
    cdef long v = mg
    cdef long i = 2 * lg
    cdef long j = 2 * mg
    cdef long iend = 2 * mg
    cdef long jend = 2 * rg
    cdef long out = 2 * lg
    cdef long k = 0
    cdef long ei, ej, e, idx
    cdef double oldt = -INFINITY
    cdef double newt, t0, t1, t2, t3, t4, t5
    cdef int case

    if _find_bridge(P, L, &u, &v, rg - lg) < 0:
        return C_BRIDGE

    while True:
        if i >= iend or j >= jend:
            return C_UNTERMINATED
        ei = in_slots[i]
        ej = in_slots[j]
        t0 = _evtime(P, L[2 * ei], ei, L[2 * ei + 1]) if ei != C_NIL else INFINITY
        t1 = _evtime(P, L[2 * ej], ej, L[2 * ej + 1]) if ej != C_NIL else INFINITY
        t2 = _evtime(P, u, L[2 * u + 1], v)
        t3 = _evtime(P, L[2 * u], u, v)
        t4 = _evtime(P, u, v, L[2 * v + 1])
        t5 = _evtime(P, u, L[2 * v], v)

        newt = INFINITY
        case = -1
        if t0 > oldt and t0 < newt:
            newt = t0
            case = 0
        if t1 > oldt and t1 < newt:
            newt = t1
            case = 1
        if t2 > oldt and t2 < newt:
            newt = t2
            case = 2
        if t3 > oldt and t3 < newt:
            newt = t3
            case = 3
        if t4 > oldt and t4 < newt:
            newt = t4
            case = 4
        if t5 > oldt and t5 < newt:
            newt = t5
            case = 5
        if case < 0:
            break

        if case == 0:
            if P[3 * ei] < P[3 * u]:
                if k >= cap - 1:
                    return C_OVERFLOW
                out_slots[out + k] = <int>ei
                k += 1
            if _act(L, ei) < 0:
                return C_CHAIN
            i += 1
        elif case == 1:
            if P[3 * ej] > P[3 * v]:
                if k >= cap - 1:
                    return C_OVERFLOW
                out_slots[out + k] = <int>ej
                k += 1
            if _act(L, ej) < 0:
                return C_CHAIN
            j += 1
        elif case == 2:
            u = L[2 * u + 1]
            if k >= cap - 1:
                return C_OVERFLOW
            out_slots[out + k] = <int>u
            k += 1
        elif case == 3:
            if k >= cap - 1:
                return C_OVERFLOW
            out_slots[out + k] = <int>u
            k += 1
            u = L[2 * u]
        elif case == 4:
            if k >= cap - 1:
                return C_OVERFLOW
            out_slots[out + k] = <int>v
            k += 1
            v = L[2 * v + 1]
        else:
            v = L[2 * v]
            if k >= cap - 1:
                return C_OVERFLOW
            out_slots[out + k] = <int>v
            k += 1
        oldt = newt

    out_slots[out + k] = C_NIL

    L[2 * u + 1] = <int>v
    L[2 * v] = <int>u

    for idx in range(k - 1, -1, -1):
        e = out_slots[out + idx]
        if P[3 * e] <= P[3 * u] or P[3 * e] >= P[3 * v]:
            if _act(L, e) < 0:
                return C_CHAIN
            if e == u:
                u = L[2 * u]
            elif e == v:
                v = L[2 * v + 1]
        else:
            L[2 * u + 1] = <int>e
            L[2 * e] = <int>u
            L[2 * v] = <int>e
            L[2 * e + 1] = <int>v
            if e < mg:
                u = e
            else:
                v = e
    return k


cdef long long _hull_rec(const double* P, int* L,
                         int* out_slots, int* scratch_slots,
                         long lo, long hi) noexcept nogil:
    cdef long mid
    cdef long long r
    if hi - lo == 1:
        L[2 * lo] = C_NIL
        L[2 * lo + 1] = C_NIL
        out_slots[2 * lo] = C_NIL
        return 0
    mid = lo + (hi - lo) // 2
    r = _hull_rec(P, L, scratch_slots, out_slots, lo, mid)
    if r < 0:
        return r
    r = _hull_rec(P, L, scratch_slots, out_slots, mid, hi)
    if r < 0:
        return r
    return _merge_one(P, L, scratch_slots, out_slots, lo, mid, hi)


def act(int[:, ::1] links, long i):
    if _act(&links[0, 0], i) < 0:
        return E_CHAIN
    return 0


def init_base_logs(int[:, ::1] links, int[::1] slots, long n):
    cdef long i
    cdef int* L = &links[0, 0]
    with nogil:
        for i in range(n):
            L[2 * i] = C_NIL
            L[2 * i + 1] = C_NIL
            slots[2 * i] = C_NIL
    return 0


def find_initial_bridge(const double[:, ::1] pts, int[:, ::1] links,
                        long u, long v, long limit):
    cdef long long r
    with nogil:
        r = _find_bridge(&pts[0, 0], &links[0, 0], &u, &v, limit)
    if r < 0:
        return NIL, NIL
    return u, v


def merge_movies(const double[:, ::1] pts, int[:, ::1] links,
                 const int[::1] in_slots, int[::1] out_slots,
                 long L, long M, long R):
    cdef long long r
    with nogil:
        r = _merge_one(&pts[0, 0], &links[0, 0], &in_slots[0], &out_slots[0], L, M, R)
    return r


def merge_range(const double[:, ::1] pts, int[:, ::1] links,
                const int[::1] in_slots, int[::1] out_slots,
                const long long[:, ::1] jobs, long lo, long hi):
    cdef long long r = 0
    cdef long idx
    with nogil:
        for idx in range(lo, hi):
            r = _merge_one(&pts[0, 0], &links[0, 0], &in_slots[0], &out_slots[0],
                           <long>jobs[idx, 0], <long>jobs[idx, 1], <long>jobs[idx, 2])
            if r < 0:
                break
    if r < 0:
        return r
    return 0


def hull_recursive(const double[:, ::1] pts, int[:, ::1] links,
                   int[::1] out_slots, int[::1] scratch_slots,
                   long lo, long hi):
    cdef long long r
    with nogil:
        r = _hull_rec(&pts[0, 0], &links[0, 0], &out_slots[0], &scratch_slots[0], lo, hi)
    return r


def replay(int[:, ::1] links, const int[::1] slots, long off, long count):
    cdef long idx, e
    cdef long long r = 0
    cdef int* L = &links[0, 0]
    with nogil:
        for idx in range(count):
            e = slots[off + idx]
            if e == C_NIL:
                r = C_COUNT
                break
            if _act(L, e) < 0:
                r = C_CHAIN
                break
    return r


def rewind_replay(int[:, ::1] links, const int[::1] slots, long off, long count):
    cdef long idx, e
    cdef long long r = 0
    cdef int* L = &links[0, 0]
    with nogil:
        for idx in range(count - 1, -1, -1):
            e = slots[off + idx]
            if e == C_NIL:
                r = C_COUNT
                break
            if _act(L, e) < 0:
                r = C_CHAIN
                break
    return r


def extract_faces(int[:, ::1] links, const int[::1] slots, long off,
                  int[:, ::1] faces):
    cdef long m = 0
    cdef long idx = off
    cdef long e
    cdef long limit = faces.shape[0]
    cdef int* L = &links[0, 0]
    cdef long long r = C_UNTERMINATED
    with nogil:
        while True:
            e = slots[idx]
            if e == C_NIL:
                r = m
                break
            if m >= limit:
                r = C_OVERFLOW
                break
            faces[m, 0] = L[2 * e]
            faces[m, 1] = <int>e
            faces[m, 2] = L[2 * e + 1]
            if _act(L, e) < 0:
                r = C_CHAIN
                break
            m += 1
            idx += 1
    return r


def log_length(const int[::1] slots, long off, long cap):
    cdef long idx
    cdef long long r = C_UNTERMINATED
    with nogil:
        for idx in range(cap):
            if slots[off + idx] == C_NIL:
                r = idx
                break
    return r


def copy_log(const int[::1] src, int[::1] dst, long off, long cap):
    cdef long idx = 0
    cdef long e
    cdef long long r = C_UNTERMINATED
    with nogil:
        while idx < cap:
            e = src[off + idx]
            dst[off + idx] = <int>e
            if e == C_NIL:
                r = idx
                break
            idx += 1
    return r
