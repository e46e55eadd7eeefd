"""Interpolation helpers for off-lattice phase-space arguments."""
from __future__ import annotations

import numpy as np

HALF_STEP_ORDER = 12


def _lagrange_weights(t: np.ndarray, order: int) -> np.ndarray:
    """Lagrange basis weights at local positions ``t`` for nodes ``0..order-1``."""
    nodes = np.arange(order, dtype=float)
    w = np.ones((t.size, order))
    for m in range(order):
        for l in range(order):
            if l != m:
                w[:, m] *= (t - nodes[l]) / (m - l)
    return w


def half_step_rows(values: np.ndarray, order: int = HALF_STEP_ORDER) -> np.ndarray:
    """Values at ``q_i + dq/2`` for ``i = 0..n-2`` by local Lagrange interpolation.

    Stencils are centred in the interior and shifted inward at the edges, so
    polynomials of degree ``< order`` are reproduced exactly everywhere.
    """
    v = np.asarray(values)
    n = v.shape[0]
    order = min(order, n)
    i = np.arange(n - 1)
    start = np.clip(i - order // 2 + 1, 0, n - order)
    w = _lagrange_weights(i + 0.5 - start, order)
    idx = start[:, None] + np.arange(order)[None, :]
    return np.einsum("im,im...->i...", w, v[idx])


def sample_bilinear(values: np.ndarray, grid, q, p) -> np.ndarray:
    """Bilinear interpolation of a field at points ``(q, p)``; zero outside the grid."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    q, p = np.broadcast_arrays(q, p)
    n = grid.n
    tq = (q - grid.qgrid.x0) / grid.dq
    tp = p / grid.dp + n // 2
    # snap coordinates within rounding of a node so on-lattice sampling is exact
    rq = np.rint(tq)
    rp = np.rint(tp)
    tq = np.where(np.abs(tq - rq) < 1e-9, rq, tq)
    tp = np.where(np.abs(tp - rp) < 1e-9, rp, tp)
    i0 = np.floor(tq).astype(int)
    k0 = np.floor(tp).astype(int)
    fq = tq - i0
    fp = tp - k0
    out = np.zeros(q.shape)
    for di, wq in ((0, 1.0 - fq), (1, fq)):
        for dk, wp in ((0, 1.0 - fp), (1, fp)):
            ii = i0 + di
            kk = k0 + dk
            w = wq * wp
            ok = (ii >= 0) & (ii < n) & (kk >= 0) & (kk < n) & (w != 0)
            out[ok] += w[ok] * values[ii[ok], kk[ok]]
    return out
