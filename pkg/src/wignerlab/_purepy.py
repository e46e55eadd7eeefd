"""Numpy implementations of the kernels in ``_core.pyx``.

Same signatures and the same summation semantics; used when the extension
is not built or ``WIGNERLAB_PURE`` is set.
"""
import numpy as np


def wigner_quadrature(f, y, p, hbar, dy, num_threads=1):
    phase = np.exp(1j * np.outer(y, p) / hbar)
    return (np.asarray(f) @ phase) * dy


def cross_direct(U, V, q, y, p, p1, p2, x1, x2, eps, hbar, num_threads=1):
    U = np.asarray(U)
    V = np.asarray(V)
    nq = U.shape[0]
    p = np.asarray(p)
    P1 = np.asarray(p1)[None, :, None]
    P2 = np.asarray(p2)[None, None, :]
    Y = np.asarray(y)[:, None, None]
    out = np.empty((nq, p.size))
    for i in range(nq):
        prod = U[i][:, :, None] * V[i][:, None, :]
        base = (-(P1 + P2) * Y * 0.5 + (P1 - P2) * q[i] - P1 * x1 + P2 * x2) / hbar + eps
        for k, pk in enumerate(p):
            out[i, k] = np.sum(prod * np.cos(base + pk * Y / hbar))
    return out
