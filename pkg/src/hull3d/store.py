"""Array-backed point store, flat event buffers, and movie playback.

The chain state of the kinetic hull lives in two int32 link arrays indexed
by point id; event logs are point indices in flat int32 buffers of 2n slots,
one NIL-terminated log per group at slot offset 2*L (L = the group's
leftmost point index). Two buffers alternate as input and output across
merge levels, so nothing ever copies point coordinates around.

``NIL`` (-1) is the reserved sentinel for both chain ends and log
terminators; any kinetic time computed over a sentinel is ``+inf``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

NIL = -1


class ChainError(RuntimeError):
    """act() reached a sentinel neighbor: the caller broke a chain
    precondition (or fed the engine degenerate input)."""


class LogError(RuntimeError):
    """A log slice was unterminated or a replay count overran it."""


def _check(code: int) -> int:
    if code >= 0:
        return code
    K = kernels.active()
    if code == K.E_CHAIN:
        raise ChainError("act() on a point with a sentinel neighbor")
    if code == K.E_COUNT:
        raise LogError("replay count exceeds the event log length")
    if code == K.E_UNTERMINATED:
        raise LogError("event log has no terminator inside its slice")
    raise RuntimeError(f"kernel error code {code}")


class PointStore:
    """n point records: coordinates plus prev/next chain links.

    Coordinates must be strictly increasing in x; the API layer owns
    sorting, tie perturbation, and degeneracy checks. Links start as NIL
    and are only ever mutated by the engine within a group's index range.
    Storage is one (n, 3) float64 row per point plus one (n, 2) int32
    (prev, next) row, so a point's whole record stays cache-local;
    ``x``/``y``/``z``/``prev``/``next`` are column views of those arrays.
    """

    __slots__ = ("n", "pts", "links")

    def __init__(self, coords):
        coords = np.ascontiguousarray(coords, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] != 3:
            raise ValueError("coords must have shape (n, 3)")
        n = coords.shape[0]
        if n < 1:
            raise ValueError("no points")
        if n > 2**30:
            raise ValueError("point count exceeds the int32 index space")
        if not np.isfinite(coords).all():
            raise ValueError("coordinates must be finite")
        if n > 1 and not (np.diff(coords[:, 0]) > 0).all():
            raise ValueError("x coordinates must be strictly increasing")
        self.n = n
        self.pts = coords  # may alias the caller's array; kernels never write it
        self.links = np.full((n, 2), NIL, dtype=np.int32)

    @property
    def x(self) -> np.ndarray:
        return self.pts[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.pts[:, 1]

    @property
    def z(self) -> np.ndarray:
        return self.pts[:, 2]

    @property
    def prev(self) -> np.ndarray:
        return self.links[:, 0]

    @property
    def next(self) -> np.ndarray:
        return self.links[:, 1]

    def chain_from(self, start: int) -> list[int]:
        """Walk next-links from ``start`` until NIL (debug/verify helper)."""
        out = []
        i = start
        while i != NIL:
            out.append(i)
            i = int(self.next[i])
            if len(out) > self.n:
                raise ChainError("chain walk exceeds the point count (cycle?)")
        return out


class MovieBuffer:
    """Flat buffer of 2n event slots, NIL-filled at construction."""

    __slots__ = ("slots",)

    def __init__(self, n: int):
        self.slots = np.full(2 * n, NIL, dtype=np.int32)

    @property
    def capacity(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class EventLog:
    """View of one group's log: the slice starting at ``offset``."""

    buffer: MovieBuffer
    offset: int = 0

    def __len__(self) -> int:
        slots = self.buffer.slots
        return _check(kernels.active().log_length(slots, self.offset, len(slots) - self.offset))

    def events(self) -> np.ndarray:
        """The event point indices, terminator excluded."""
        k = len(self)
        return self.buffer.slots[self.offset : self.offset + k].copy()


def act(store: PointStore, i: int) -> None:
    """Toggle point i: insert it between its recorded neighbors if they do
    not currently link through it, unlink it otherwise. i's own links are
    never modified, which is what makes the toggle self-inverse."""
    if i == NIL or not (0 <= i < store.n):
        raise ChainError(f"act() on invalid point index {i}")
    _check(kernels.active().act(store.links, i))


def init_base_logs(store: PointStore, out: MovieBuffer) -> None:
    """Reset every point to a one-point hull with an empty log at slot 2i."""
    if out.capacity < 2 * store.n:
        raise ValueError("buffer capacity below 2n")
    _check(kernels.active().init_base_logs(store.links, out.slots, store.n))


def replay(store: PointStore, log: EventLog, count: int) -> None:
    """Play the first ``count`` events forward through act()."""
    _check(kernels.active().replay(store.links, log.buffer.slots, log.offset, count))


def rewind_replay(store: PointStore, log: EventLog, count: int) -> None:
    """Play events count-1 .. 0 backward; undoes replay(store, log, count)."""
    if count > len(log):
        raise LogError("replay count exceeds the event log length")
    _check(
        kernels.active().rewind_replay(store.links, log.buffer.slots, log.offset, count)
    )


def extract_faces(store: PointStore, log: EventLog) -> np.ndarray:
    """Facets of the group's lower hull, one per event.

    The store must be at the log's start-of-time chain state. Emits
    (prev[e], e, next[e]) as read immediately before act(e) is applied, for
    every event in order; the chain ends at its end-of-time state. Raw
    triples carry no orientation convention; the API layer orients them.
    """
    k = len(log)
    faces = np.empty((k, 3), dtype=np.int32)
    m = _check(
        kernels.active().extract_faces(store.links, log.buffer.slots, log.offset, faces)
    )
    return faces[:m]
