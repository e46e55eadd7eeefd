"""Hilbert-space side: wavefunctions, operator kernels and superposition.

These objects are the oracle for every phase-space computation in the
package, so they are built directly from closed forms and recurrences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import DecayError, GridMismatchError, NonHermitianError, ValidationError
from .grid import SampleGrid1D, integrate_1d

__all__ = [
    "WaveFunction",
    "OperatorKernel",
    "MAX_HERMITE_ORDER",
    "harmonic_oscillator_state",
    "gaussian_state",
    "inner_product",
    "density_kernel",
    "superpose_wavefunctions",
    "fidelity",
    "check_decay",
]

MAX_HERMITE_ORDER = 30


@dataclass(frozen=True, eq=False)
class WaveFunction:
    grid: SampleGrid1D
    values: np.ndarray
    hbar: float = 1.0
    normalized: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=complex, copy=True)
        if v.shape != (self.grid.n,):
            raise GridMismatchError(f"expected {self.grid.n} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("wavefunction samples must be finite")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.normalized:
            nrm = self.norm()
            if abs(nrm - 1.0) > DEFAULT_TOLERANCES.wavefunction_norm:
                raise ValidationError(f"wavefunction flagged normalized but has norm {nrm!r}")

    def norm(self) -> float:
        return integrate_1d(np.abs(self.values) ** 2, self.grid)

    def conj(self) -> "WaveFunction":
        return WaveFunction(self.grid, np.conj(self.values), self.hbar, self.normalized)

    def with_phase(self, theta: float) -> "WaveFunction":
        return WaveFunction(self.grid, np.exp(1j * theta) * self.values, self.hbar, self.normalized)

    def _require_compatible(self, other: "WaveFunction") -> None:
        if self.grid != other.grid or self.hbar != other.hbar:
            raise GridMismatchError("wavefunctions live on different grids or hbar")


@dataclass(frozen=True, eq=False)
class OperatorKernel:
    """Kernel samples ``values[i, j] = A_K(x_i, x_j)``.

    The operator acts as ``(A psi)(x_i) = sum_j A_K(x_i, x_j) psi(x_j) dx``;
    :meth:`matrix` returns that weighted matrix.
    """

    grid: SampleGrid1D
    values: np.ndarray
    hbar: float = 1.0
    hermitian: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=complex, copy=True)
        n = self.grid.n
        if v.shape != (n, n):
            raise GridMismatchError(f"expected {n}x{n} kernel, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.hermitian:
            res = self.hermitian_residual()
            scale = max(1.0, float(np.abs(v).max()))
            if res > 1e-12 * scale:
                raise NonHermitianError(f"kernel flagged hermitian has residual {res:.3e}")

    def hermitian_residual(self) -> float:
        return float(np.abs(self.values - self.values.conj().T).max())

    def matrix(self) -> np.ndarray:
        return self.values * self.grid.dx

    @classmethod
    def from_matrix(cls, grid, matrix, hbar=1.0, hermitian=False) -> "OperatorKernel":
        return cls(grid, np.asarray(matrix) / grid.dx, hbar, hermitian)

    def apply(self, psi: WaveFunction) -> np.ndarray:
        if psi.grid != self.grid:
            raise GridMismatchError("operator and wavefunction grids differ")
        return self.values @ psi.values * self.grid.dx

    def compose(self, other: "OperatorKernel") -> "OperatorKernel":
        if other.grid != self.grid or other.hbar != self.hbar:
            raise GridMismatchError("kernels live on different grids or hbar")
        return OperatorKernel(self.grid, self.values @ other.values * self.grid.dx, self.hbar)

    def trace(self) -> complex:
        return integrate_1d(np.diag(self.values), self.grid)


def check_decay(values, ratio: float = DEFAULT_TOLERANCES.decay_ratio) -> None:
    """Raise :class:`DecayError` unless both boundary samples are negligible.

    The ratio applies to the density ``|phi|^2``: truncating the state at the
    grid edge perturbs every bilinear quantity (Wigner function, norms,
    overlaps) by an amount of that order.
    """
    a = np.abs(np.asarray(values)) ** 2
    peak = a.max()
    if peak == 0:
        raise DecayError("wavefunction is identically zero")
    edge = max(a[0], a[-1])
    if edge >= ratio * peak:
        raise DecayError(
            f"wavefunction does not decay at the grid boundary "
            f"(|phi_edge|^2/max|phi|^2 = {edge / peak:.3e} >= {ratio:g}); widen the grid"
        )


def harmonic_oscillator_state(k: int, grid: SampleGrid1D, hbar: float = 1.0) -> WaveFunction:
    """k-th harmonic-oscillator eigenfunction (unit mass and frequency).

    Uses the normalized three-term recurrence on ``s = x/sqrt(hbar)``, which
    avoids factorials; stable for ``k <= 30``.
    """
    if not (isinstance(k, (int, np.integer)) and 0 <= k <= MAX_HERMITE_ORDER):
        raise ValidationError(f"Hermite order must be an integer in [0, {MAX_HERMITE_ORDER}], got {k!r}")
    s = grid.points / math.sqrt(hbar)
    h_prev = np.zeros_like(s)
    h = math.pi ** -0.25 * np.exp(-0.5 * s * s)
    for j in range(k):
        h_prev, h = h, math.sqrt(2.0 / (j + 1)) * s * h - math.sqrt(j / (j + 1)) * h_prev
    values = h * hbar ** -0.25
    check_decay(values)
    return WaveFunction(grid, values, hbar, normalized=True)


def gaussian_state(q0: float, p0: float, sigma: float, grid: SampleGrid1D, hbar: float = 1.0) -> WaveFunction:
    """Gaussian packet centred at ``(q0, p0)``.

    ``phi(x) = (pi sigma^2)^(-1/4) exp(-(x-q0)^2 / (2 sigma^2) + i p0 (x-q0) / hbar)``;
    ``sigma = sqrt(hbar)`` gives a coherent state.
    """
    if not sigma > 0:
        raise ValidationError("sigma must be positive")
    x = grid.points
    values = (math.pi * sigma * sigma) ** -0.25 * np.exp(
        -((x - q0) ** 2) / (2 * sigma * sigma) + 1j * p0 * (x - q0) / hbar
    )
    check_decay(values)
    return WaveFunction(grid, values, hbar, normalized=True)


def inner_product(phi: WaveFunction, psi: WaveFunction) -> complex:
    """``<phi|psi> = int conj(phi) psi dx``."""
    phi._require_compatible(psi)
    return complex(integrate_1d(np.conj(phi.values) * psi.values, phi.grid))


def fidelity(phi: WaveFunction, psi: WaveFunction) -> float:
    """``|<phi|psi>|^2 / (<phi|phi><psi|psi>)``; blind to global phase."""
    return abs(inner_product(phi, psi)) ** 2 / (phi.norm() * psi.norm())


def density_kernel(phi: WaveFunction) -> OperatorKernel:
    """Rank-one kernel ``rho_K(x, y) = phi(x) conj(phi(y))``."""
    v = np.outer(phi.values, np.conj(phi.values))
    # enforce exact hermiticity against rounding in the outer product
    v = 0.5 * (v + v.conj().T)
    return OperatorKernel(phi.grid, v, phi.hbar, hermitian=True)


def superpose_wavefunctions(phi1: WaveFunction, phi2: WaveFunction, a1: complex, a2: complex) -> WaveFunction:
    """Normalized superposition ``a1*phi1 + a2*phi2`` of orthonormal states."""
    phi1._require_compatible(phi2)
    tol = DEFAULT_TOLERANCES
    weight = abs(a1) ** 2 + abs(a2) ** 2
    if abs(weight - 1.0) > 1e-12:
        raise ValidationError(f"|a1|^2 + |a2|^2 = {weight!r}, expected 1")
    overlap = abs(inner_product(phi1, phi2))
    if overlap > tol.superpose_orthogonality:
        raise ValidationError(f"states are not orthogonal (|<phi1|phi2>| = {overlap:.3e})")
    if a2 == 0:
        values = a1 * phi1.values if a1 != 1 else phi1.values
    elif a1 == 0:
        values = a2 * phi2.values if a2 != 1 else phi2.values
    else:
        values = a1 * phi1.values + a2 * phi2.values
    out = WaveFunction(phi1.grid, values, phi1.hbar)
    nrm = out.norm()
    if abs(nrm - 1.0) > tol.wavefunction_norm:
        raise ValidationError(f"superposition has norm {nrm!r}; inputs must be normalized")
    return WaveFunction(phi1.grid, values, phi1.hbar, normalized=True)
