"""Numba-accelerated kernels with a pure-numpy fallback.

The fallback is selected by setting the environment variable
``SPHEREFIELD_NO_NUMBA=1`` before import (useful for debugging and for
machines without a working numba install). Both paths produce identical
matrices; ``benchmarks/bench_assembly.py`` compares their speed.
"""
from __future__ import annotations

import os

import numpy as np

USING_NUMBA = False
if not os.environ.get("SPHEREFIELD_NO_NUMBA"):
    try:
        from numba import njit

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
        USING_NUMBA = False

if not USING_NUMBA:
    def njit(*args, **kwargs):  # noqa: D103 - decorator stub
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def _fill_pq_rows(cent, areas, eta, sigma, tau0, inv_c, dt, k,
                  p_data, p_col, q_data, q_col):
    """Fill per-row interpolation weights for the delay matrices.

    Row j owns the flat slots [2*j*m, 2*(j+1)*m); each source column block
    gets at most two basis hits. Unused slots keep value 0 and a valid
    column index, removed later by eliminate_zeros().
    """
    m = cent.shape[0]
    for j in range(m):
        xj, yj, zj = cent[j, 0], cent[j, 1], cent[j, 2]
        for nu in range(m):
            dot = xj * cent[nu, 0] + yj * cent[nu, 1] + zj * cent[nu, 2]
            if dot > 1.0:
                dot = 1.0
            elif dot < -1.0:
                dot = -1.0
            dist = np.arccos(dot)
            tau = tau0 + dist * inv_c
            jw = eta * np.exp(-dist / sigma) * areas[nu]
            ell = int(np.floor(tau / dt + 1e-12))
            if ell > k:
                ell = k
            s = tau - ell * dt
            u = s / dt
            if ell >= 1:
                w0 = 2.0 * u ** 3 - 3.0 * u ** 2 + 1.0
                w1 = 2.0 * (1.0 - u) ** 3 - 3.0 * (1.0 - u) ** 2 + 1.0
                q0 = s * (1.0 - u) ** 2
                q1 = (s - dt) * u ** 2
            else:
                w0 = (1.0 - u) ** 2
                w1 = 1.0 - (1.0 - u) ** 2
                q0 = 0.0
                q1 = (s - dt) * u
            base = 2 * (j * m + nu)
            p_col[base] = nu * (k + 1) + ell
            p_data[base] = jw * w0
            if ell + 1 <= k:
                p_col[base + 1] = nu * (k + 1) + ell + 1
                p_data[base + 1] = jw * w1
            else:
                p_col[base + 1] = nu * (k + 1) + ell
                p_data[base + 1] = 0.0
            if ell >= 1:
                q_col[base] = nu * k + ell - 1
                q_data[base] = jw * q0
            else:
                q_col[base] = nu * k
                q_data[base] = 0.0
            if 1 <= ell + 1 <= k:
                q_col[base + 1] = nu * k + ell
                q_data[base + 1] = jw * q1
            else:
                q_col[base + 1] = nu * k
                q_data[base + 1] = 0.0


def _fill_pq_rows_numpy(cent, areas, eta, sigma, tau0, inv_c, dt, k,
                        p_data, p_col, q_data, q_col, block=256):
    """Vectorized fallback of :func:`_fill_pq_rows`, processed in row blocks."""
    m = cent.shape[0]
    cols_nu = np.arange(m)
    for j0 in range(0, m, block):
        j1 = min(j0 + block, m)
        dot = np.clip(cent[j0:j1] @ cent.T, -1.0, 1.0)
        dist = np.arccos(dot)
        tau = tau0 + dist * inv_c
        jw = eta * np.exp(-dist / sigma) * areas[None, :]
        ell = np.minimum(np.floor(tau / dt + 1e-12).astype(np.int64), k)
        s = tau - ell * dt
        u = s / dt
        cubic = ell >= 1
        w0 = np.where(cubic, 2 * u ** 3 - 3 * u ** 2 + 1, (1 - u) ** 2)
        w1 = np.where(cubic, 2 * (1 - u) ** 3 - 3 * (1 - u) ** 2 + 1,
                      1 - (1 - u) ** 2)
        q0 = np.where(cubic, s * (1 - u) ** 2, 0.0)
        q1 = (s - dt) * np.where(cubic, u ** 2, u)
        nb = j1 - j0
        base = 2 * (np.arange(j0, j1)[:, None] * m + cols_nu[None, :])
        has_next = ell + 1 <= k
        p_col.reshape(-1)[base] = cols_nu[None, :] * (k + 1) + ell
        p_data.reshape(-1)[base] = jw * w0
        p_col.reshape(-1)[base + 1] = cols_nu[None, :] * (k + 1) + np.where(has_next, ell + 1, ell)
        p_data.reshape(-1)[base + 1] = np.where(has_next, jw * w1, 0.0)
        q_col.reshape(-1)[base] = cols_nu[None, :] * k + np.where(cubic, ell - 1, 0)
        q_data.reshape(-1)[base] = np.where(cubic, jw * q0, 0.0)
        q_col.reshape(-1)[base + 1] = cols_nu[None, :] * k + np.where(has_next, ell, 0)
        q_data.reshape(-1)[base + 1] = np.where(has_next, jw * q1, 0.0)


def fill_pq(cent, areas, eta, sigma, tau0, c, dt, k, use_numba=None):
    """Compute flat CSR (data, col) arrays for one kernel's P and Q matrices.

    Returns (p_data, p_col, q_data, q_col); the caller builds CSR with
    indptr = 2*m*arange(m+1).
    """
    m = cent.shape[0]
    p_data = np.empty(2 * m * m)
    p_col = np.empty(2 * m * m, dtype=np.int64)
    q_data = np.empty(2 * m * m)
    q_col = np.empty(2 * m * m, dtype=np.int64)
    if use_numba is None:
        use_numba = USING_NUMBA
    fn = _fill_pq_rows if use_numba and USING_NUMBA else _fill_pq_rows_numpy
    fn(cent, areas, float(eta), float(sigma), float(tau0), 1.0 / float(c),
       float(dt), int(k), p_data, p_col, q_data, q_col)
    return p_data, p_col, q_data, q_col
