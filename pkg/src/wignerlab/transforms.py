"""Weyl-Wigner transform pair, pure-state Wigner functions and reconstruction.

Discretization
--------------
The relative coordinate ``y`` is sampled at ``y_j = 2*j*dx`` so that both
``q - y/2`` and ``q + y/2`` land on the coordinate grid; no interpolation
is needed in the forward direction and kernel values outside the grid are
zero.  With the conjugate momentum grid the ``y`` sum is a length-``n``
DFT.  The inverse direction needs the field at half-step coordinates
``(x + y)/2``; those rows come from :func:`interp.half_step_rows`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import DEFAULT_TOLERANCES
from .errors import AnchorError, GridMismatchError, ImpureStateError, NonHermitianError, ValidationError
from .grid import PhaseGrid, RealField2D, exact_sum, integrate_1d, integrate_2d
from .interp import half_step_rows
from .states import OperatorKernel, WaveFunction, check_decay

__all__ = [
    "WignerFunction",
    "weyl_wigner_forward",
    "weyl_wigner_forward_complex",
    "weyl_quantize",
    "wigner_from_wavefunction",
    "reconstruct_rank_one",
    "reconstruct_wavefunction",
    "marginal",
    "marginals",
    "anchor_index",
]


@dataclass(frozen=True, eq=False)
class WignerFunction(RealField2D):
    """Wigner function ``W(q, p)`` (normalized to unit integral)."""

    provenance: str = "constructed"
    normalized: bool = False

    def __post_init__(self):
        super().__post_init__()
        if self.provenance not in ("constructed", "superposed", "loaded"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.normalized:
            total = integrate_2d(self)
            if abs(total - 1.0) > 1e-6:
                raise ValidationError(f"Wigner function flagged normalized integrates to {total!r}")

    @classmethod
    def from_field(cls, field: RealField2D, provenance="constructed", normalized=False) -> "WignerFunction":
        return cls(field.grid, field.values, provenance, normalized)


def _relative_index(n: int):
    """Index arrays ``a = i - j``, ``b = i + j`` for ``j`` in ``[-n/2, n/2)``."""
    i = np.arange(n)[:, None]
    j = np.arange(-(n // 2), n - n // 2)[None, :]
    a = i - j
    b = i + j
    ok = (a >= 0) & (a < n) & (b >= 0) & (b < n)
    return np.where(ok, a, 0), np.where(ok, b, 0), ok


def _transform_rows(f: np.ndarray, pg: PhaseGrid, method: str) -> np.ndarray:
    """``sum_j f[i, j] exp(i p_k y_j / hbar) * 2dx`` for ``f`` indexed by ``j + n/2``."""
    n = pg.n
    dy = 2.0 * pg.dq
    if method == "fft":
        g = np.roll(f, -(n // 2), axis=1)
        return np.fft.fftshift(np.fft.ifft(g, axis=1), axes=1) * (n * dy)
    if method == "quadrature":
        y = 2.0 * np.arange(-(n // 2), n - n // 2) * pg.dq
        return kernels.wigner_quadrature(f, y, pg.p, pg.hbar, dy)
    raise ValueError(f"unknown method {method!r}; use 'fft' or 'quadrature'")


def _require_kernel_grid(A: OperatorKernel, pg: PhaseGrid) -> None:
    if A.grid != pg.qgrid or A.hbar != pg.hbar:
        raise GridMismatchError("kernel grid/hbar does not match the phase grid")


def weyl_wigner_forward_complex(A: OperatorKernel, pg: PhaseGrid, method: str = "fft") -> np.ndarray:
    """``int A_K(q - y/2, q + y/2) exp(i p y / hbar) dy`` as a complex array."""
    _require_kernel_grid(A, pg)
    a, b, ok = _relative_index(pg.n)
    f = np.where(ok, A.values[a, b], 0.0)
    return _transform_rows(f, pg, method)


def _real_part(w: np.ndarray, tol: float) -> np.ndarray:
    scale = float(np.abs(w).max())
    resid = float(np.abs(w.imag).max())
    if resid > tol * max(scale, 1e-300):
        raise NonHermitianError(f"transform has imaginary residual {resid:.3e} (max-abs {scale:.3e})")
    return w.real


def weyl_wigner_forward(A: OperatorKernel, pg: PhaseGrid, method: str = "fft") -> RealField2D:
    """Weyl symbol of a hermitian kernel (no ``1/(2 pi hbar)`` factor)."""
    w = weyl_wigner_forward_complex(A, pg, method)
    return RealField2D(pg, _real_part(w, DEFAULT_TOLERANCES.hermitian_residual))


def _offset_transform(rows: np.ndarray, pg: PhaseGrid, d: np.ndarray, srow: np.ndarray) -> np.ndarray:
    """``sum_m rows[srow, m] exp(i p_m d dx / hbar)`` for paired arrays ``srow``, ``d``."""
    n = pg.n
    # p_m d dx / hbar = pi (m - n/2) d / n
    pad = np.zeros((rows.shape[0], 2 * n))
    pad[:, :n] = rows
    H = np.fft.ifft(pad, axis=1) * (2 * n)
    dd = np.asarray(d)
    shift = np.exp(-0.5j * math.pi * (dd % 4))
    return H[srow, dd % (2 * n)] * shift


def _stacked_rows(values: np.ndarray) -> np.ndarray:
    """Rows at ``q_0, q_0 + dq/2, q_1, ...``: row ``s`` sits at ``(x_a + x_b)/2`` for ``a + b = s``."""
    n = values.shape[0]
    half = half_step_rows(values)
    out = np.empty((2 * n - 1, values.shape[1]))
    out[0::2] = values
    out[1::2] = half
    return out


def weyl_quantize(A: RealField2D) -> OperatorKernel:
    """Weyl quantization ``(1/2 pi hbar) int A((x+y)/2, p) exp(i p (x-y)/hbar) dp``.

    The momentum integral runs over the grid's window only, so a constant
    symbol quantizes to the band-limited identity (diagonal ``1/(2 dx)``).
    The result is hermitized exactly.
    """
    pg = A.grid
    n = pg.n
    rows = _stacked_rows(A.values)
    a = np.arange(n)[:, None]
    b = np.arange(n)[None, :]
    s = np.broadcast_to(a + b, (n, n))
    d = np.broadcast_to(a - b, (n, n))
    K = _offset_transform(rows, pg, d, s) * (pg.dp / (2 * math.pi * pg.hbar))
    K = 0.5 * (K + K.conj().T)
    return OperatorKernel(pg.qgrid, K, pg.hbar, hermitian=True)


def _require_conjugate(phi: WaveFunction, pg: PhaseGrid) -> None:
    if phi.grid != pg.qgrid or phi.hbar != pg.hbar:
        raise GridMismatchError("phase grid is not conjugate to the wavefunction grid")


def wigner_from_wavefunction(phi: WaveFunction, pg: PhaseGrid, method: str = "fft") -> WignerFunction:
    """Pure-state Wigner function ``(1/2 pi hbar) int phi(q-y/2) phi*(q+y/2) e^{ipy/hbar} dy``."""
    _require_conjugate(phi, pg)
    check_decay(phi.values)
    a, b, ok = _relative_index(pg.n)
    v = phi.values
    f = np.where(ok, v[a] * np.conj(v[b]), 0.0)
    w = _transform_rows(f, pg, method) / (2 * math.pi * pg.hbar)
    w = _real_part(w, DEFAULT_TOLERANCES.hermitian_residual)
    return WignerFunction(pg, w, "constructed", normalized=phi.normalized)


def marginals(W: RealField2D) -> np.ndarray:
    """Position density ``int W(q_i, p) dp`` for every grid row."""
    dp = W.grid.dp
    return np.array([exact_sum(row) * dp for row in W.values])


def marginal(W: RealField2D, x: float) -> float:
    """``int W(x, p) dp`` at the grid sample nearest ``x``."""
    i = W.grid.qgrid.index_of(x)
    return integrate_1d(W.values[i], W.grid.pgrid)


def anchor_index(W: RealField2D, min_marginal: float = DEFAULT_TOLERANCES.anchor_min_marginal) -> int:
    """Row of the largest marginal; near-ties go to the smallest index."""
    m = marginals(W)
    top = m.max()
    if not top >= min_marginal:
        raise AnchorError(f"no grid row has marginal above {min_marginal:g} (degenerate field)")
    return int(np.flatnonzero(m >= top - 1e-12 * abs(top))[0])


def _purity_defect(W: RealField2D) -> float:
    purity = exact_sum(W.values * W.values) * W.grid.dq * W.grid.dp
    return abs(purity * 2 * math.pi * W.grid.hbar - 1.0)


def reconstruct_rank_one(W: RealField2D, i0: int) -> np.ndarray:
    """``g(x) = int W((x + x0)/2, p) exp(i p (x - x0)/hbar) dp = phi(x) phi*(x0)``."""
    pg = W.grid
    n = pg.n
    rows = _stacked_rows(W.values)
    a = np.arange(n)
    return _offset_transform(rows, pg, a - i0, a + i0) * pg.dp


def _resolve_anchor(W: RealField2D, x0, tol) -> int:
    if x0 is None or (isinstance(x0, str) and x0.lower() == "auto"):
        return anchor_index(W, tol.anchor_min_marginal)
    i0 = W.grid.qgrid.index_of(float(x0))
    m = integrate_1d(W.values[i0], W.grid.pgrid)
    if not m >= tol.anchor_min_marginal:
        raise AnchorError(f"marginal at x0 = {float(x0)!r} is {m:.3e}, below {tol.anchor_min_marginal:g}")
    return i0


def reconstruct_wavefunction(W: RealField2D, x0="auto", *, tolerances=DEFAULT_TOLERANCES) -> WaveFunction:
    """Recover the state vector of a pure Wigner function.

    Returns ``phi(x) = g(x) / sqrt(g(x0))``, which fixes the global phase so
    that ``phi(x0)`` is real and positive.  ``x0='auto'`` picks the row with
    the largest marginal.
    """
    defect = _purity_defect(W)
    if defect >= tolerances.reconstruct_purity_rel:
        raise ImpureStateError(f"input is not a pure state (|2 pi hbar int W^2 - 1| = {defect:.3e})")
    i0 = _resolve_anchor(W, x0, tolerances)
    g = reconstruct_rank_one(W, i0)
    g0 = g[i0].real
    if g0 <= 0:
        raise ValidationError(f"g(x0) = {g0!r} is not positive; the Wigner function is corrupted")
    values = g / math.sqrt(g0)
    values[i0] = math.sqrt(g0)
    phi = WaveFunction(W.grid.qgrid, values, W.grid.hbar)
    return WaveFunction(phi.grid, values, phi.hbar, normalized=abs(phi.norm() - 1.0) <= 1e-9)
