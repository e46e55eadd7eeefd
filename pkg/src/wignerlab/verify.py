"""Check suite shared by every module: purity, normalization, orthogonality, hermiticity."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import GridMismatchError
from .grid import RealField2D, exact_sum, integrate_2d

__all__ = [
    "CheckReport",
    "check_purity",
    "check_norm",
    "check_orthogonality",
    "check_hermitian",
    "compare_fields",
    "FieldMetrics",
]


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one numerical check.

    ``mode`` is ``"abs"`` or ``"rel"``; in relative mode the tolerance is
    scaled by ``|expected|``.
    """

    name: str
    measured: float
    expected: float
    tolerance: float
    mode: str = "abs"
    passed: bool = False

    @classmethod
    def evaluate(cls, name, measured, expected, tolerance, mode="abs") -> "CheckReport":
        bound = tolerance * abs(expected) if mode == "rel" else tolerance
        ok = bool(abs(measured - expected) <= bound)
        return cls(name, float(measured), float(expected), float(tolerance), mode, ok)

    def to_json(self) -> str:
        d = {"name": self.name, "measured": self.measured, "expected": self.expected,
             "tol": self.tolerance, "mode": self.mode, "passed": self.passed}
        return json.dumps(d, sort_keys=False)

    def to_dict(self) -> dict:
        return asdict(self)


def _overlap(F1: RealField2D, F2: RealField2D) -> float:
    F1.grid.require_same(F2.grid)
    return exact_sum(F1.values * F2.values) * F1.grid.dq * F1.grid.dp


def check_purity(W: RealField2D, tolerance: float = DEFAULT_TOLERANCES.purity_rel) -> CheckReport:
    """``int W^2`` against ``1/(2 pi hbar)`` (relative)."""
    return CheckReport.evaluate("purity", _overlap(W, W), 1.0 / (2 * math.pi * W.hbar), tolerance, "rel")


def check_norm(W: RealField2D, tolerance: float = DEFAULT_TOLERANCES.norm_abs) -> CheckReport:
    """``int W`` against 1 (absolute)."""
    return CheckReport.evaluate("norm", integrate_2d(W), 1.0, tolerance, "abs")


def check_orthogonality(W1: RealField2D, W2: RealField2D,
                        tolerance: float = DEFAULT_TOLERANCES.orthogonality_abs) -> CheckReport:
    """``int W1 W2`` against 0 with absolute tolerance ``tolerance/(2 pi hbar)``.

    ``2 pi hbar`` times the measured value is ``|<phi1|phi2>|^2``.
    """
    scale = 1.0 / (2 * math.pi * W1.hbar)
    return CheckReport.evaluate("orthogonality", _overlap(W1, W2), 0.0, tolerance * scale, "abs")


def check_hermitian(K, tolerance: float = DEFAULT_TOLERANCES.hermitian_residual) -> CheckReport:
    """Max-abs of ``K - K^dagger`` relative to ``max |K|``."""
    v = np.asarray(K.values if hasattr(K, "values") else K)
    scale = max(float(np.abs(v).max()), 1e-300)
    return CheckReport.evaluate("hermitian", float(np.abs(v - v.conj().T).max()) / scale, 0.0, tolerance, "abs")


@dataclass(frozen=True)
class FieldMetrics:
    max_abs: float
    l2: float
    rel_l2: float

    def to_dict(self) -> dict:
        return asdict(self)


def compare_fields(F1: RealField2D, F2: RealField2D) -> FieldMetrics:
    """Max-abs, L2 (phase-space measure) and relative-L2 differences."""
    if not F1.grid.same_as(F2.grid):
        raise GridMismatchError("fields live on different phase grids")
    d = F1.values - F2.values
    area = F1.grid.dq * F1.grid.dp
    l2 = math.sqrt(exact_sum(d * d) * area)
    ref = math.sqrt(exact_sum(F2.values * F2.values) * area)
    return FieldMetrics(float(np.abs(d).max()), l2, l2 / ref if ref > 0 else math.inf)
