"""Kernel selection: compiled extension when available, pure Python otherwise.

The two kernel modules export the same functions and constants; everything
above this layer calls ``kernels.active()`` and stays agnostic. Selection
order: the ``HULL3D_KERNEL`` environment variable (``compiled`` or
``python``) wins, else the compiled extension if it imported, else the
pure-Python fallback. ``use()`` switches at runtime, which the benchmark
harness relies on to compare both implementations.
"""

from __future__ import annotations

import os
import warnings
from contextlib import contextmanager

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built; pure-Python fallback
    _ckernels = None

_BY_NAME = {"python": _pykernels, "compiled": _ckernels}


def _initial():
    requested = os.environ.get("HULL3D_KERNEL", "").strip().lower()
    if requested == "python":
        return _pykernels
    if requested == "compiled":
        if _ckernels is None:
            warnings.warn(
                "HULL3D_KERNEL=compiled but hull3d._ckernels is not built; "
                "using the pure-Python kernels",
                RuntimeWarning,
            )
            return _pykernels
        return _ckernels
    if requested:
        warnings.warn(
            f"unknown HULL3D_KERNEL={requested!r}; expected 'compiled' or "
            "'python'",
            RuntimeWarning,
        )
    return _ckernels if _ckernels is not None else _pykernels


_active = _initial()


def active():
    """The kernel module every engine call site should use."""
    return _active


def active_name() -> str:
    return _active.IMPL


def available() -> list[str]:
    return [name for name, mod in _BY_NAME.items() if mod is not None]


def has_compiled() -> bool:
    return _ckernels is not None


def use(name: str) -> str:
    """Switch the active kernel; returns the previously active name."""
    global _active
    mod = _BY_NAME.get(name)
    if name not in _BY_NAME:
        raise ValueError(f"unknown kernel {name!r}; expected one of {sorted(_BY_NAME)}")
    if mod is None:
        raise RuntimeError("the compiled kernel extension is not built")
    previous = _active.IMPL
    _active = mod
    return previous


@contextmanager
def using(name: str):
    """Temporarily switch kernels (test and benchmark helper)."""
    previous = use(name)
    try:
        yield _active
    finally:
        use(previous)
