"""Superposition of two orthogonal pure-state Wigner functions.

With anchors ``x1, x2`` and constants ``A, B >= 0`` and ``epsilon``,

    T = A^2 m1(x1) W1 + B^2 m2(x2) W2 + cross(q, p)

is proportional to the Wigner function of ``c1 phi1 + c2 phi2`` where
``m_i`` are the position marginals of ``W_i``.  ``T`` is the unnormalized
Wigner function of ``A g1 + B e^{-i eps} g2`` with ``g_i(x) = phi_i(x)
phi_i*(x_i)``, which is what the fast cross-term path exploits.  The
direct path evaluates the triple integral over ``(y, p1, p2)`` literally
and serves as an oracle on small grids.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .config import DEFAULT_TOLERANCES
from .errors import DegenerateError, GridTooLargeError, ValidationError
from .grid import PhaseGrid, RealField2D, SampleGrid1D, integrate_1d, integrate_2d, make_conjugate_grid
from .interp import sample_bilinear
from .states import OperatorKernel, WaveFunction
from .transforms import (
    WignerFunction,
    anchor_index,
    reconstruct_rank_one,
    weyl_wigner_forward_complex,
)
from .verify import CheckReport, check_norm, check_orthogonality, check_purity

__all__ = [
    "AUTO",
    "SuperpositionSpec",
    "SuperpositionResult",
    "validate_pair",
    "choose_anchors",
    "cross_term_direct",
    "cross_term_fast",
    "superpose_wigner",
    "recover_hilbert_superposition",
    "MAX_DIRECT_N",
    "oracle_grid",
    "restrict_to_grid",
]

AUTO = "auto"
MAX_DIRECT_N = 48
TWO_PI = 2 * math.pi


def _is_auto(x) -> bool:
    return x is None or (isinstance(x, str) and x.lower() == AUTO)


@dataclass(frozen=True)
class SuperpositionSpec:
    """Constants ``A``, ``B``, ``epsilon`` and anchors of a superposition.

    ``epsilon`` outside ``[0, 2 pi)`` is reduced with a warning.
    """

    A: float
    B: float
    epsilon: float = 0.0
    x1: float | str = AUTO
    x2: float | str = AUTO

    def __post_init__(self):
        if not (self.A >= 0 and self.B >= 0) or not (math.isfinite(self.A) and math.isfinite(self.B)):
            raise ValidationError("A and B must be finite and nonnegative")
        if self.A == 0 and self.B == 0:
            raise ValidationError("A and B cannot both be zero")
        if not math.isfinite(self.epsilon):
            raise ValidationError("epsilon must be finite")
        if not 0 <= self.epsilon < TWO_PI:
            reduced = math.fmod(self.epsilon, TWO_PI)
            if reduced < 0:
                reduced += TWO_PI
            if reduced >= TWO_PI:
                reduced = 0.0
            warnings.warn(f"epsilon {self.epsilon!r} reduced mod 2*pi to {reduced!r}", stacklevel=3)
            object.__setattr__(self, "epsilon", reduced)
        for name in ("x1", "x2"):
            v = getattr(self, name)
            if _is_auto(v):
                object.__setattr__(self, name, AUTO)
            else:
                object.__setattr__(self, name, float(v))

    @classmethod
    def from_weights(cls, w1: float, w2: float, epsilon: float = 0.0, m1: float = 1.0, m2: float = 1.0,
                     x1=AUTO, x2=AUTO) -> "SuperpositionSpec":
        """Constants giving ``|c1|^2 = w1`` and ``|c2|^2 = w2`` (``w1 + w2 = 1``).

        ``m1``, ``m2`` are the marginals at the anchors; then ``T_total = 1``.
        """
        return cls(math.sqrt(w1 / m1), math.sqrt(w2 / m2), epsilon, x1, x2)


@dataclass(frozen=True, eq=False)
class SuperpositionResult:
    """Output of :func:`superpose_wigner`.

    ``c1``, ``c2`` multiply the rank-one branches ``g_i(x) = phi_i(x) conj(phi_i(x_i))``;
    the weights of the normalized states are ``|c_i|^2 m_i`` (see :attr:`weights`).
    """

    W: WignerFunction
    T_total: float
    c1_abs: float
    c2_abs: float
    c1: complex
    c2: complex
    x1_used: float
    x2_used: float
    epsilon: float
    marginal1: float
    marginal2: float
    checks: list = field(default_factory=list)

    @property
    def weights(self) -> tuple[float, float]:
        """``(|a1|^2, |a2|^2)`` for the normalized, anchor-phased states."""
        return self.c1_abs ** 2 * self.marginal1, self.c2_abs ** 2 * self.marginal2

    def report(self) -> dict:
        w1, w2 = self.weights
        return {
            "c1_abs": self.c1_abs,
            "c2_abs": self.c2_abs,
            "weight1": w1,
            "weight2": w2,
            "epsilon": self.epsilon,
            "x1_used": self.x1_used,
            "x2_used": self.x2_used,
            "T_total": self.T_total,
            "checks": {c.name: c.to_dict() for c in self.checks},
        }


def validate_pair(W1: RealField2D, W2: RealField2D, tolerances=DEFAULT_TOLERANCES) -> list[CheckReport]:
    """Orthogonality, purity and normalization checks for a superposition pair."""
    W1.grid.require_same(W2.grid)
    out = [check_orthogonality(W1, W2, tolerances.orthogonality_abs)]
    for tag, W in (("1", W1), ("2", W2)):
        for rep in (check_purity(W, tolerances.purity_rel), check_norm(W, tolerances.norm_abs)):
            out.append(CheckReport(rep.name + tag, rep.measured, rep.expected, rep.tolerance, rep.mode, rep.passed))
    return out


def _require_valid(W1, W2, tolerances) -> None:
    reports = validate_pair(W1, W2, tolerances)
    bad = [r for r in reports if not r.passed]
    if bad:
        msg = "; ".join(f"{r.name}: measured {r.measured:.6g}, expected {r.expected:.6g}" for r in bad)
        raise ValidationError(f"pair fails superposition checks ({msg})", reports)


def choose_anchors(W1: RealField2D, W2: RealField2D, tolerances=DEFAULT_TOLERANCES) -> tuple[float, float]:
    """Grid coordinates of the largest marginal of each field."""
    q = W1.grid.q
    return (float(q[anchor_index(W1, tolerances.anchor_min_marginal)]),
            float(q[anchor_index(W2, tolerances.anchor_min_marginal)]))


def _anchor_rows(W1, W2, spec, tolerances) -> tuple[int, int]:
    rows = []
    for W, x in ((W1, spec.x1), (W2, spec.x2)):
        if _is_auto(x):
            i = anchor_index(W, tolerances.anchor_min_marginal)
        else:
            i = W.grid.qgrid.index_of(x)
            m = integrate_1d(W.values[i], W.grid.pgrid)
            if not m >= tolerances.anchor_min_marginal:
                raise DegenerateError(f"marginal at anchor {x!r} is {m:.3e}; choose another anchor")
        rows.append(i)
    return rows[0], rows[1]


def oracle_grid(pg: PhaseGrid, stride: int, n_oracle: int) -> PhaseGrid:
    """Coarse grid of ``n_oracle`` points at spacing ``stride*dq``, centred on row ``n/2``."""
    dxo = stride * pg.dq
    xc = pg.q[pg.n // 2]
    return make_conjugate_grid(SampleGrid1D(xc - (n_oracle // 2) * dxo, dxo, n_oracle), pg.hbar)


def _default_oracle_shape(n: int, n_oracle: int | None, stride: int | None) -> tuple[int, int]:
    if n_oracle is None:
        n_oracle = min(n, 32)
    if stride is None:
        stride = max(1, n // (2 * n_oracle))
    return stride, n_oracle


def cross_term_direct(W1: RealField2D, W2: RealField2D, spec: SuperpositionSpec, *,
                      stride: int | None = None, n_oracle: int | None = None,
                      tolerances=DEFAULT_TOLERANCES) -> RealField2D:
    """Cross term by literal summation of the triple integral (oracle path).

    The output lives on a coarse grid of ``n_oracle <= 48`` points per axis
    (spacing ``stride*dq``); the integration over ``(y, p1, p2)`` runs on
    the same coarse grid.  The fields are read at the half-step arguments
    ``(q -+ y/2 + x_i)/2`` by bilinear interpolation and are zero outside.
    Cost is ``O(n_oracle^5)``.
    """
    W1.grid.require_same(W2.grid)
    pg = W1.grid
    stride, n_oracle = _default_oracle_shape(pg.n, n_oracle, stride)
    if n_oracle > MAX_DIRECT_N:
        raise GridTooLargeError(f"direct cross term needs n <= {MAX_DIRECT_N}, got {n_oracle}")
    og = oracle_grid(pg, stride, n_oracle)
    ratio = og.dp / pg.dp
    if abs(ratio - round(ratio)) > 1e-9:
        raise ValidationError("oracle momentum spacing must be a multiple of the input spacing")
    i1, i2 = _anchor_rows(W1, W2, spec, tolerances)
    x1, x2 = pg.q[i1], pg.q[i2]
    q, p = og.q, og.p
    y = 2.0 * np.arange(-(n_oracle // 2), n_oracle - n_oracle // 2) * og.dq
    if spec.A == 0 or spec.B == 0:
        return RealField2D(og, np.zeros((n_oracle, n_oracle)))
    qa = (q[:, None] - y[None, :] / 2 + x1) / 2
    qb = (q[:, None] + y[None, :] / 2 + x2) / 2
    U = sample_bilinear(W1.values, pg, qa[:, :, None], p[None, None, :])
    V = sample_bilinear(W2.values, pg, qb[:, :, None], p[None, None, :])
    s = kernels.cross_direct(U, V, q, y, p, p, p, x1, x2, spec.epsilon, pg.hbar)
    scale = (2 * og.dq) * og.dp ** 2 * spec.A * spec.B / (math.pi * pg.hbar)
    return RealField2D(og, s * scale)


def _branches(W1, W2, i1, i2):
    return reconstruct_rank_one(W1, i1), reconstruct_rank_one(W2, i2)


def _cross_from_branches(g1, g2, pg, spec) -> np.ndarray:
    K = OperatorKernel(pg.qgrid, np.outer(g1, np.conj(g2)), pg.hbar)
    w = weyl_wigner_forward_complex(K, pg)
    return (2 * spec.A * spec.B / (TWO_PI * pg.hbar)) * (np.exp(1j * spec.epsilon) * w).real


def cross_term_fast(W1: RealField2D, W2: RealField2D, spec: SuperpositionSpec, *,
                    tolerances=DEFAULT_TOLERANCES) -> RealField2D:
    """Cross term via reconstruction of the branches and one forward transform.

    ``g_i`` are recovered from ``W_i`` at their anchors; the cross kernel
    ``A B e^{i eps} g1 g2^dagger`` plus its adjoint is forward transformed.
    """
    W1.grid.require_same(W2.grid)
    pg = W1.grid
    if spec.A == 0 or spec.B == 0:
        return RealField2D(pg, np.zeros((pg.n, pg.n)))
    i1, i2 = _anchor_rows(W1, W2, spec, tolerances)
    g1, g2 = _branches(W1, W2, i1, i2)
    return RealField2D(pg, _cross_from_branches(g1, g2, pg, spec))


def superpose_wigner(W1: RealField2D, W2: RealField2D, spec: SuperpositionSpec, *,
                     tolerances=DEFAULT_TOLERANCES, validate: bool = True) -> SuperpositionResult:
    """Normalized Wigner function of the superposition and its coefficients.

    ``c1 = A/sqrt(T_total)`` and ``c2 = B e^{-i eps}/sqrt(T_total)`` are the
    coefficients of the rank-one branches ``g_i``, which have norm ``sqrt(m_i)``.
    """
    W1.grid.require_same(W2.grid)
    if validate:
        _require_valid(W1, W2, tolerances)
    pg = W1.grid
    i1, i2 = _anchor_rows(W1, W2, spec, tolerances)
    m1 = integrate_1d(W1.values[i1], pg.pgrid)
    m2 = integrate_1d(W2.values[i2], pg.pgrid)
    T = spec.A ** 2 * m1 * W1.values + spec.B ** 2 * m2 * W2.values
    if spec.A > 0 and spec.B > 0:
        g1, g2 = _branches(W1, W2, i1, i2)
        T = T + _cross_from_branches(g1, g2, pg, spec)
    total = integrate_2d(RealField2D(pg, T))
    if not total > 1e-12:
        raise DegenerateError(f"superposition integrates to {total:.3e}; degenerate")
    W = WignerFunction(pg, T / total, "superposed")
    # the single-branch case reproduces the input exactly
    if spec.B == 0:
        W = WignerFunction(pg, W1.values, "superposed")
    elif spec.A == 0:
        W = WignerFunction(pg, W2.values, "superposed")
    c1_abs = spec.A / math.sqrt(total)
    c2_abs = spec.B / math.sqrt(total)
    checks = [check_purity(W, tolerances.purity_rel), check_norm(W, tolerances.norm_abs)]
    return SuperpositionResult(
        W=W, T_total=total, c1_abs=c1_abs, c2_abs=c2_abs,
        c1=complex(c1_abs), c2=c2_abs * complex(math.cos(spec.epsilon), -math.sin(spec.epsilon)),
        x1_used=float(pg.q[i1]), x2_used=float(pg.q[i2]), epsilon=spec.epsilon,
        marginal1=m1, marginal2=m2, checks=checks,
    )


def recover_hilbert_superposition(result: SuperpositionResult, W1: RealField2D, W2: RealField2D) -> WaveFunction:
    """``c1 g1 + c2 g2`` normalized; equals the superposed state up to a global phase."""
    pg = W1.grid
    i1 = pg.qgrid.index_of(result.x1_used)
    i2 = pg.qgrid.index_of(result.x2_used)
    v = np.zeros(pg.n, dtype=complex)
    if result.c1_abs > 0:
        v = v + result.c1 * reconstruct_rank_one(W1, i1)
    if result.c2_abs > 0:
        v = v + result.c2 * reconstruct_rank_one(W2, i2)
    phi = WaveFunction(pg.qgrid, v, pg.hbar)
    nrm = phi.norm()
    if not nrm > 0:
        raise DegenerateError("recovered state vanishes")
    return WaveFunction(pg.qgrid, v / math.sqrt(nrm), pg.hbar, normalized=True)


def restrict_to_grid(F: RealField2D, target: PhaseGrid) -> RealField2D:
    """Sample ``F`` at the points of a coarser grid (exact when they are lattice points)."""
    Q, P = np.meshgrid(target.q, target.p, indexing="ij")
    return RealField2D(target, sample_bilinear(F.values, F.grid, Q, P))
