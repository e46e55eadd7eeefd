"""Uniform grids, conjugate momentum grids and deterministic quadrature.

All integrals use the rectangle rule.  Sums go through :func:`math.fsum`, which
is exactly rounded and therefore independent of summation order.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError

__all__ = [
    "SampleGrid1D",
    "PhaseGrid",
    "RealField2D",
    "make_conjugate_grid",
    "integrate_1d",
    "integrate_2d",
    "exact_sum",
]


@dataclass(frozen=True)
class SampleGrid1D:
    """``n`` samples at ``x0 + i*dx``."""

    x0: float
    dx: float
    n: int

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 8 and self.n % 2 == 0):
            raise ValueError(f"grid size must be an even integer >= 8, got {self.n!r}")
        if not (self.dx > 0 and math.isfinite(self.dx)):
            raise ValueError(f"grid spacing must be positive, got {self.dx!r}")
        if not math.isfinite(self.x0):
            raise ValueError("grid origin must be finite")
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "dx", float(self.dx))
        object.__setattr__(self, "n", int(self.n))

    @property
    def points(self) -> np.ndarray:
        return self.x0 + np.arange(self.n) * self.dx

    @property
    def length(self) -> float:
        return self.n * self.dx

    def index_of(self, x: float, *, warn: bool = True) -> int:
        """Nearest sample index to ``x``, clipped to the grid.

        Warns when ``x`` is more than ``dx/100`` away from a sample.
        """
        t = (x - self.x0) / self.dx
        i = int(np.clip(np.rint(t), 0, self.n - 1))
        if warn and abs(self.x0 + i * self.dx - x) > self.dx / 100:
            warnings.warn(
                f"coordinate {x!r} is off-grid; snapped to {self.x0 + i * self.dx!r}",
                stacklevel=2,
            )
        return i

    def to_dict(self) -> dict:
        return {"x0": self.x0, "dx": self.dx, "n": self.n}


@dataclass(frozen=True)
class PhaseGrid:
    """Coordinate grid, its conjugate momentum grid, and hbar."""

    qgrid: SampleGrid1D
    pgrid: SampleGrid1D
    hbar: float

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")
        q, p = self.qgrid, self.pgrid
        if p.n != q.n:
            raise ValueError("momentum grid must have as many samples as the coordinate grid")
        if not math.isclose(p.dx * q.dx * q.n, math.pi * self.hbar, rel_tol=1e-12):
            raise ValueError("momentum grid is not conjugate to the coordinate grid")
        if not math.isclose(p.x0, -(p.n // 2) * p.dx, rel_tol=1e-12):
            raise ValueError("momentum grid must be centred with p = 0 on a sample")

    @property
    def n(self) -> int:
        return self.qgrid.n

    @property
    def dq(self) -> float:
        return self.qgrid.dx

    @property
    def dp(self) -> float:
        return self.pgrid.dx

    @property
    def q(self) -> np.ndarray:
        return self.qgrid.points

    @property
    def p(self) -> np.ndarray:
        # index form keeps p = 0 exact at k = n/2
        return (np.arange(self.n) - self.n // 2) * self.dp

    def same_as(self, other: "PhaseGrid") -> bool:
        return self.qgrid == other.qgrid and self.pgrid == other.pgrid and self.hbar == other.hbar

    def require_same(self, other: "PhaseGrid") -> None:
        if not self.same_as(other):
            raise GridMismatchError("phase grids (or hbar) differ")


def make_conjugate_grid(qgrid: SampleGrid1D, hbar: float) -> PhaseGrid:
    """Build the momentum grid conjugate to ``qgrid``.

    The spacing is ``pi*hbar/(n*dx)``, so the momentum window is
    ``[-pi*hbar/(2*dx), pi*hbar/(2*dx))`` with ``p = 0`` at index ``n/2``.
    The factor ``pi`` rather than ``2*pi`` comes from sampling the relative
    coordinate at ``2*dx`` in the Wigner transform.
    """
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar!r}")
    if qgrid.n % 2:
        raise ValueError("coordinate grid must have an even number of samples")
    dp = math.pi * hbar / (qgrid.n * qgrid.dx)
    pgrid = SampleGrid1D(-(qgrid.n // 2) * dp, dp, qgrid.n)
    return PhaseGrid(qgrid, pgrid, float(hbar))


def exact_sum(values) -> complex | float:
    """Order-independent, exactly rounded sum of a real or complex array."""
    a = np.asarray(values).ravel()
    if np.iscomplexobj(a):
        return complex(math.fsum(a.real.tolist()), math.fsum(a.imag.tolist()))
    return math.fsum(a.astype(float).tolist())


def integrate_1d(values, grid: SampleGrid1D):
    """Rectangle-rule integral ``sum(values) * dx``."""
    a = np.asarray(values)
    if a.shape != (grid.n,):
        raise GridMismatchError(f"expected {grid.n} samples, got shape {a.shape}")
    return exact_sum(a) * grid.dx


@dataclass(frozen=True, eq=False)
class RealField2D:
    """Real samples ``values[i, k] = F(q_i, p_k)`` on a phase grid."""

    grid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True)
        n = self.grid.n
        if v.shape != (n, n):
            if v.size == n * n:
                v = v.reshape(n, n)
            else:
                raise GridMismatchError(f"expected {n}x{n} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def hbar(self) -> float:
        return self.grid.hbar

    def with_values(self, values) -> "RealField2D":
        return RealField2D(self.grid, values)


def integrate_2d(field: RealField2D) -> float:
    """Rectangle-rule integral over phase space."""
    return exact_sum(field.values) * field.grid.dq * field.grid.dp
