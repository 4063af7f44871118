"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Set the environment variable ``MTFJE_NO_NUMBA=1`` to force the numpy path
(also used automatically when numba is not importable).  Both paths expose
the same signatures and produce the same results; ``benchmarks/
bench_kernels.py`` times them side by side.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("MTFJE_NO_NUMBA", "").strip() not in ("", "0")

if not _DISABLED:
    try:
        import numba
        from numba import njit, prange

        NUMBA_AVAILABLE = True
    except ImportError:  # pragma: no cover - exercised via MTFJE_NO_NUMBA instead
        NUMBA_AVAILABLE = False
else:
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE


def set_num_threads(n: int) -> None:
    """Limit kernel parallelism (no-op on the numpy path)."""
    if USE_NUMBA and n >= 1:
        numba.set_num_threads(n)


# -- complex tridiagonal Thomas solve ------------------------------------------
#
# The Galerkin systems are strictly diagonally dominant on the contour, so
# elimination without pivoting is safe; callers verify a residual anyway.


def tridiag_solve_numpy(dl, d, du, rhs):
    n = d.shape[0]
    cp = np.empty(n, dtype=np.complex128)
    xp = np.empty(n, dtype=np.complex128)
    cp[0] = du[0] / d[0]
    xp[0] = rhs[0] / d[0]
    for i in range(1, n):
        denom = d[i] - dl[i - 1] * cp[i - 1]
        cp[i] = du[i] / denom if i < n - 1 else 0.0
        xp[i] = (rhs[i] - dl[i - 1] * xp[i - 1]) / denom
    for i in range(n - 2, -1, -1):
        xp[i] -= cp[i] * xp[i + 1]
    return xp


def _ctrw_sq_displacements_numpy(waits, steps, t_query):
    n_particles = waits.shape[0]
    n_query = t_query.shape[0]
    event_times = np.cumsum(waits, axis=1)
    positions = np.cumsum(steps, axis=1)
    sq = np.sum(positions**2, axis=2)
    out = np.empty((n_particles, n_query))
    for p in range(n_particles):
        idx = np.searchsorted(event_times[p], t_query, side="right")
        row = np.concatenate(([0.0], sq[p]))
        out[p] = row[idx]
    return out


if USE_NUMBA:

    @njit(cache=True)
    def _tridiag_solve_numba(dl, d, du, rhs):
        n = d.shape[0]
        cp = np.empty(n, dtype=np.complex128)
        xp = np.empty(n, dtype=np.complex128)
        cp[0] = du[0] / d[0]
        xp[0] = rhs[0] / d[0]
        for i in range(1, n):
            denom = d[i] - dl[i - 1] * cp[i - 1]
            if i < n - 1:
                cp[i] = du[i] / denom
            else:
                cp[i] = 0.0
            xp[i] = (rhs[i] - dl[i - 1] * xp[i - 1]) / denom
        for i in range(n - 2, -1, -1):
            xp[i] -= cp[i] * xp[i + 1]
        return xp

    @njit(cache=True, parallel=True)
    def _ctrw_sq_displacements_numba(waits, steps, t_query):
        n_particles, n_steps = waits.shape
        dim = steps.shape[2]
        n_query = t_query.shape[0]
        out = np.empty((n_particles, n_query))
        for p in prange(n_particles):
            pos = np.zeros(dim)
            t_event = 0.0
            q = 0
            for s in range(n_steps):
                t_next = t_event + waits[p, s]
                while q < n_query and t_query[q] < t_next:
                    acc = 0.0
                    for dd in range(dim):
                        acc += pos[dd] * pos[dd]
                    out[p, q] = acc
                    q += 1
                if q == n_query:
                    break
                for dd in range(dim):
                    pos[dd] += steps[p, s, dd]
                t_event = t_next
            while q < n_query:
                acc = 0.0
                for dd in range(dim):
                    acc += pos[dd] * pos[dd]
                out[p, q] = acc
                q += 1
        return out

    tridiag_solve = _tridiag_solve_numba
    ctrw_sq_displacements = _ctrw_sq_displacements_numba
else:
    tridiag_solve = tridiag_solve_numpy
    ctrw_sq_displacements = _ctrw_sq_displacements_numpy


def ctrw_sq_displacements_numpy(waits, steps, t_query):
    """Numpy reference path (kept importable for benchmarks/tests)."""
    return _ctrw_sq_displacements_numpy(waits, steps, t_query)
