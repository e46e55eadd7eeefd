# cython: language_level=3
"""Compiled inner loops for the direct-quadrature (oracle) paths.

Each output sample is reduced by a single thread in a fixed order, so the
results do not depend on the thread count.  Trigonometric factors are
tabulated outside the innermost loops and combined by angle addition.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport parallel, prange
from libc.math cimport cos, sin
from libc.stdlib cimport free, malloc

cnp.import_array()


def wigner_quadrature(double complex[:, ::1] f, double[::1] y, double[::1] p,
                      double hbar, double dy, int num_threads=1):
    cdef Py_ssize_t nq = f.shape[0], ny = f.shape[1], np_ = p.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double re, im, fr, fi
    phase = np.outer(np.asarray(y), np.asarray(p)) / hbar
    cdef double[:, ::1] c = np.ascontiguousarray(np.cos(phase))
    cdef double[:, ::1] s = np.ascontiguousarray(np.sin(phase))
    out = np.empty((nq, np_), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    for i in prange(nq, nogil=True, num_threads=num_threads, schedule="static"):
        for k in range(np_):
            re = 0.0
            im = 0.0
            for j in range(ny):
                fr = f[i, j].real
                fi = f[i, j].imag
                if fr == 0.0 and fi == 0.0:
                    continue
                re = re + fr * c[j, k] - fi * s[j, k]
                im = im + fr * s[j, k] + fi * c[j, k]
            o[i, k] = (re + 1j * im) * dy
    return out


def cross_direct(double[:, :, ::1] U, double[:, :, ::1] V, double[::1] q,
                 double[::1] y, double[::1] p, double[::1] p1, double[::1] p2,
                 double x1, double x2, double eps, double hbar, int num_threads=1):
    """``sum_{j,a,b} U[i,j,a] V[i,j,b] cos(eps + p y_j/hbar + alpha_a + beta_b)``.

    ``alpha_a = p1_a (q_i - y_j/2 - x1)/hbar`` and
    ``beta_b = p2_b (x2 - q_i - y_j/2)/hbar``; this is the same phase as
    ``eps + [(2p - p1 - p2) y/2 + (p1 - p2) q - p1 x1 + p2 x2]/hbar``.
    """
    cdef Py_ssize_t nq = U.shape[0], ny = U.shape[1], n1 = U.shape[2], n2 = V.shape[2]
    cdef Py_ssize_t np_ = p.shape[0]
    cdef Py_ssize_t i, k, j, a, b
    cdef double u, w, cab, sab, ta, tb, tk
    cdef double *buf
    cdef double *ca
    cdef double *sa
    cdef double *cb
    cdef double *sb
    cdef double *ck
    cdef double *sk
    cdef double *acc
    out = np.empty((nq, np_), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil, parallel(num_threads=num_threads):
        buf = <double *> malloc(sizeof(double) * (2 * n1 + 2 * n2 + 3 * np_))
        ca = buf
        sa = ca + n1
        cb = sa + n1
        sb = cb + n2
        ck = sb + n2
        sk = ck + np_
        acc = sk + np_
        for i in prange(nq, schedule="static"):
            for k in range(np_):
                acc[k] = 0.0
            for j in range(ny):
                for a in range(n1):
                    ta = p1[a] * (q[i] - 0.5 * y[j] - x1) / hbar
                    ca[a] = cos(ta)
                    sa[a] = sin(ta)
                for b in range(n2):
                    tb = p2[b] * (x2 - q[i] - 0.5 * y[j]) / hbar
                    cb[b] = cos(tb)
                    sb[b] = sin(tb)
                for k in range(np_):
                    tk = eps + p[k] * y[j] / hbar
                    ck[k] = cos(tk)
                    sk[k] = sin(tk)
                for k in range(np_):
                    for a in range(n1):
                        u = U[i, j, a]
                        if u == 0.0:
                            continue
                        for b in range(n2):
                            w = u * V[i, j, b]
                            cab = ca[a] * cb[b] - sa[a] * sb[b]
                            sab = sa[a] * cb[b] + ca[a] * sb[b]
                            acc[k] = acc[k] + w * (ck[k] * cab - sk[k] * sab)
            for k in range(np_):
                o[i, k] = acc[k]
        free(buf)
    return out
