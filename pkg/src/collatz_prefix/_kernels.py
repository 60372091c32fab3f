"""Fixed-width sweep kernels for the reduced Collatz map.

The numba path is used when numba imports and ``CPX_DISABLE_NUMBA`` is unset;
otherwise a vectorized numpy loop runs.  Both work on int64 and flag any start
whose trajectory would overflow, so callers can redo those with Python ints.
"""

from __future__ import annotations

import os

import numpy as np

CAPPED = -1
OVERFLOW = -2

# 3x + 1 must stay below 2**63
_X_LIMIT = (2**63 - 2) // 3


def _numba_requested() -> bool:
    return os.environ.get("CPX_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes")


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def _steps_numpy(xs: np.ndarray, cap: int) -> np.ndarray:
    cur = xs.astype(np.int64).copy()
    out = np.full(cur.shape, CAPPED, dtype=np.int32)
    out[cur == 1] = 0
    active = cur != 1
    for n in range(1, cap + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        c = cur[idx]
        big = c > _X_LIMIT
        if big.any():
            out[idx[big]] = OVERFLOW
            active[idx[big]] = False
            idx, c = idx[~big], c[~big]
        y = 3 * c + 1
        c = y // (y & -y)
        cur[idx] = c
        done = c == 1
        out[idx[done]] = n
        active[idx[done]] = False
    return out


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _steps_numba(xs, cap):
        out = np.empty(xs.shape[0], dtype=np.int32)
        for k in range(xs.shape[0]):
            x = xs[k]
            n = 0
            res = CAPPED
            if x == 1:
                res = 0
            while x != 1 and n < cap:
                if x > _X_LIMIT:
                    res = OVERFLOW
                    break
                y = 3 * x + 1
                while y & 1 == 0:
                    y >>= 1
                x = y
                n += 1
                if x == 1:
                    res = n
            out[k] = res
        return out


def use_numba() -> bool:
    return HAVE_NUMBA and _numba_requested()


def stopping_steps(xs, cap: int, backend: str | None = None) -> np.ndarray:
    """Reduced steps to reach 1 for each odd start, CAPPED or OVERFLOW otherwise."""
    xs = np.ascontiguousarray(xs, dtype=np.int64)
    if xs.size and (xs.min() < 1 or (xs & 1).min() == 0):
        raise ValueError("starts must be odd positive integers")
    if backend is None:
        backend = "numba" if use_numba() else "numpy"
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba is not available")
        return _steps_numba(xs, cap)
    if backend == "numpy":
        return _steps_numpy(xs, cap)
    raise ValueError(f"unknown backend {backend!r}")
