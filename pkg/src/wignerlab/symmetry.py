"""Phase-space group actions and factorization of one-parameter representations.

Generators are real integral operators on phase-space functions,

    (alpha F)(q, p) = sum alpha_K(q, p, q', p') F(q', p') dq dp,

stored as a sparse matrix over the flat index ``i*n + k``.  The kernel
absorbs no quadrature weights; ``dq*dp`` is applied where sums are taken.

Differential generators use central finite-difference stencils.  Neighbours
that fall outside the grid are dropped rather than replaced by one-sided
formulas, which keeps the kernel exactly antisymmetric.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.ndimage import map_coordinates

from .config import DEFAULT_TOLERANCES
from .errors import ValidationError
from .grid import PhaseGrid, RealField2D
from .interp import sample_bilinear
from .states import OperatorKernel
from .transforms import weyl_quantize

__all__ = [
    "GroupElementHW",
    "act_heisenberg_weyl",
    "act_time_reversal",
    "translation_unitary",
    "modulation_unitary",
    "conjugation_action",
    "PhaseSpaceGenerator",
    "derivative_generator",
    "rotation_generator",
    "random_skew_generator",
    "generator_from_entries",
    "apply_generator",
    "RKernel",
    "r_kernel",
    "factorizability_residual",
    "generator_symbol",
    "quantize_generator",
    "STENCILS",
]

# central first-derivative weights c_s, f'(x) ~ sum_s c_s f(x + s h) / h
STENCILS = {
    2: {1: 0.5, -1: -0.5},
    4: {1: 2.0 / 3, -1: -2.0 / 3, 2: -1.0 / 12, -2: 1.0 / 12},
    6: {1: 0.75, -1: -0.75, 2: -0.15, -2: 0.15, 3: 1.0 / 60, -3: -1.0 / 60},
}


@dataclass(frozen=True)
class GroupElementHW:
    """Phase-space translation ``F(q, p) -> F(q + a, p - b)``."""

    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("group parameters must be finite")

    def __mul__(self, other: "GroupElementHW") -> "GroupElementHW":
        return GroupElementHW(self.a + other.a, self.b + other.b)


def _lattice_steps(value: float, step: float) -> int | None:
    t = value / step
    r = round(t)
    return int(r) if abs(t - r) <= 1e-9 else None


def _shift(values: np.ndarray, di: int, dk: int) -> np.ndarray:
    """``out[i, k] = values[i + di, k + dk]``, zero outside."""
    n0, n1 = values.shape
    out = np.zeros_like(values)
    src_i = slice(max(di, 0), n0 + min(di, 0))
    dst_i = slice(max(-di, 0), n0 + min(-di, 0))
    src_k = slice(max(dk, 0), n1 + min(dk, 0))
    dst_k = slice(max(-dk, 0), n1 + min(-dk, 0))
    out[dst_i, dst_k] = values[src_i, src_k]
    return out


def act_heisenberg_weyl(F: RealField2D, g: GroupElementHW, order: int = 1) -> RealField2D:
    """``F(q + a, p - b)``, zero outside the grid.

    Lattice shifts are exact index moves.  Otherwise the field is
    interpolated: bilinear for ``order=1``, a spline of that order via
    ``scipy.ndimage.map_coordinates`` for ``order`` in 2..5.  Bilinear
    error is ``O(dp^2)`` and ``dp`` is fixed by the window length, so the
    spline orders are the choice when composing off-lattice shifts.
    """
    pg = F.grid
    if g.a == 0 and g.b == 0:
        return F.with_values(F.values)
    di = _lattice_steps(g.a, pg.dq)
    dk = _lattice_steps(-g.b, pg.dp)
    if di is not None and dk is not None:
        return F.with_values(_shift(F.values, di, dk))
    q = pg.q[:, None] + g.a
    p = pg.p[None, :] - g.b
    if order == 1:
        return F.with_values(sample_bilinear(F.values, pg, q, p))
    if order not in (2, 3, 4, 5):
        raise ValueError("interpolation order must be 1..5")
    tq, tp = np.broadcast_arrays((q - pg.qgrid.x0) / pg.dq, p / pg.dp + pg.n // 2)
    return F.with_values(map_coordinates(F.values, [tq, tp], order=order, mode="constant", cval=0.0))


def act_time_reversal(F: RealField2D) -> RealField2D:
    """``F(q, -p)``.  Column ``k = 0`` (``p = -p_max``) has no partner and maps to zero."""
    n = F.grid.n
    out = np.zeros_like(F.values)
    out[:, 1:] = F.values[:, n - 1:0:-1]
    return F.with_values(out)


def translation_unitary(grid, a: float) -> np.ndarray:
    """``(U phi)(x) = phi(x + a)`` for ``a`` a multiple of ``dx`` (cyclic at the edges)."""
    k = _lattice_steps(a, grid.dx)
    if k is None:
        raise ValidationError(f"translation {a!r} is not a multiple of dx")
    n = grid.n
    U = np.zeros((n, n), dtype=complex)
    U[np.arange(n), (np.arange(n) + k) % n] = 1.0
    return U


def modulation_unitary(grid, b: float, hbar: float = 1.0) -> np.ndarray:
    """``diag(exp(i b x / hbar))``."""
    return np.diag(np.exp(1j * b * grid.points / hbar))


def conjugation_action(U: np.ndarray, A: OperatorKernel, tol: float = 1e-10) -> OperatorKernel:
    """Kernel of ``U A U^dagger`` for a unitary matrix ``U`` on the coordinate grid."""
    U = np.asarray(U, dtype=complex)
    n = A.grid.n
    if U.shape != (n, n):
        raise ValidationError(f"U has shape {U.shape}, expected {(n, n)}")
    defect = float(np.abs(U @ U.conj().T - np.eye(n)).max())
    if defect > tol:
        raise ValidationError(f"U is not unitary (|U U^dagger - I| = {defect:.3e})")
    K = U @ A.values @ U.conj().T
    if A.hermitian:
        K = 0.5 * (K + K.conj().T)
    return OperatorKernel(A.grid, K, A.hbar, hermitian=A.hermitian)


@dataclass(frozen=True, eq=False)
class PhaseSpaceGenerator:
    """Real generator kernel on the flattened phase-space lattice."""

    grid: PhaseGrid
    kernel: sp.csr_matrix
    kind: str = "sparse"

    def __post_init__(self):
        n2 = self.grid.n ** 2
        K = sp.csr_matrix(self.kernel, dtype=float)
        if K.shape != (n2, n2):
            raise ValidationError(f"kernel shape {K.shape} does not match grid ({n2}, {n2})")
        K.sum_duplicates()
        object.__setattr__(self, "kernel", K)

    @property
    def skew_residual(self) -> float:
        d = self.kernel + self.kernel.T
        scale = max(1.0, float(abs(self.kernel).max())) if self.kernel.nnz else 1.0
        return float(abs(d).max()) / scale if d.nnz else 0.0

    @property
    def skew(self) -> bool:
        return self.skew_residual <= 1e-10

    def entries(self):
        """``(i, k, i2, k2, value)`` index arrays of the nonzero entries."""
        coo = self.kernel.tocoo()
        n = self.grid.n
        return coo.row // n, coo.row % n, coo.col // n, coo.col % n, coo.data


def generator_from_entries(pg: PhaseGrid, i, k, i2, k2, values, kind: str = "sparse") -> PhaseSpaceGenerator:
    n = pg.n
    i, k, i2, k2 = (np.asarray(v, dtype=np.int64) for v in (i, k, i2, k2))
    for v in (i, k, i2, k2):
        if v.size and (v.min() < 0 or v.max() >= n):
            raise ValidationError("generator entry index outside the grid")
    K = sp.coo_matrix((np.asarray(values, dtype=float), (i * n + k, i2 * n + k2)), shape=(n * n, n * n))
    return PhaseSpaceGenerator(pg, K.tocsr(), kind)


def _stencil_entries(pg: PhaseGrid, axis: str, coeff: np.ndarray, order: int):
    n = pg.n
    I, Kp = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    I, Kp = I.ravel(), Kp.ravel()
    out = []
    for s, c in sorted(STENCILS[order].items()):
        if axis == "q":
            i2, k2 = I + s, Kp
            val = coeff * c / (pg.dq ** 2 * pg.dp)
        else:
            i2, k2 = I, Kp + s
            val = -coeff * c / (pg.dp ** 2 * pg.dq)
        ok = (i2 >= 0) & (i2 < n) & (k2 >= 0) & (k2 < n)
        out.append((I[ok], Kp[ok], i2[ok], k2[ok], val[ok]))
    return out


def _from_parts(pg, parts, kind) -> PhaseSpaceGenerator:
    i, k, i2, k2, v = (np.concatenate(z) for z in zip(*parts))
    return generator_from_entries(pg, i, k, i2, k2, v, kind)


def _check_order(order: int) -> None:
    if order not in STENCILS:
        raise ValueError(f"stencil order must be one of {sorted(STENCILS)}")


def derivative_generator(pg: PhaseGrid, kind: str = "dq", order: int = 6) -> PhaseSpaceGenerator:
    """``d/dq`` (``kind='dq'``) or ``-d/dp`` (``kind='dp'``) as a sparse kernel."""
    _check_order(order)
    if kind not in ("dq", "dp"):
        raise ValueError("kind must be 'dq' or 'dp'")
    ones = np.ones(pg.n ** 2)
    return _from_parts(pg, _stencil_entries(pg, kind[1], ones, order), kind)


def rotation_generator(pg: PhaseGrid, order: int = 6) -> PhaseSpaceGenerator:
    """Harmonic flow ``p d/dq - q d/dp``."""
    _check_order(order)
    Q, P = np.meshgrid(pg.q, pg.p, indexing="ij")
    parts = _stencil_entries(pg, "q", P.ravel(), order) + _stencil_entries(pg, "p", Q.ravel(), order)
    return _from_parts(pg, parts, "rotation")


def random_skew_generator(pg: PhaseGrid, seed: int = 0, entries: int = 200) -> PhaseSpaceGenerator:
    """Seeded antisymmetric kernel with ``2*entries`` nonzeros in the central half of the lattice."""
    n = pg.n
    rng = np.random.default_rng(seed)
    a = rng.integers(n // 4, 3 * n // 4, size=(entries, 4))
    v = rng.normal(size=entries) / (pg.dq ** 2 * pg.dp)
    i = np.concatenate([a[:, 0], a[:, 2]])
    k = np.concatenate([a[:, 1], a[:, 3]])
    i2 = np.concatenate([a[:, 2], a[:, 0]])
    k2 = np.concatenate([a[:, 3], a[:, 1]])
    return generator_from_entries(pg, i, k, i2, k2, np.concatenate([v, -v]), "sparse")


def apply_generator(alpha: PhaseSpaceGenerator, F: RealField2D) -> RealField2D:
    """``alpha F`` with the ``dq*dp`` weight applied here."""
    alpha.grid.require_same(F.grid)
    out = alpha.kernel @ F.values.ravel() * (F.grid.dq * F.grid.dp)
    return F.with_values(out.reshape(F.values.shape))


@dataclass(frozen=True, eq=False)
class RKernel:
    """Generator entries pushed to ``R(q1, p1, u, v) = alpha_K((u-q1)/2, (v+p1)/2, (u+q1)/2, (v-p1)/2)``.

    Entry ``e`` sits at ``q1 = (i2 - i) dq``, ``p1 = (k - k2) dp``,
    ``u = 2 q_0 + su dq`` and ``v = sv dp`` with integer ``su = i + i2`` and
    ``sv = k + k2 - n``.  Entries are sorted into ``(su, sv)`` bins.
    """

    grid: PhaseGrid
    q1: np.ndarray
    p1: np.ndarray
    su: np.ndarray
    sv: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        keys = self._key(self.su, self.sv)
        order = np.argsort(keys, kind="stable")
        for name in ("q1", "p1", "su", "sv", "w"):
            object.__setattr__(self, name, np.asarray(getattr(self, name))[order])
        object.__setattr__(self, "_keys", keys[order])

    def _key(self, su, sv):
        return np.asarray(su, dtype=np.int64) * (4 * self.grid.n + 1) + np.asarray(sv, dtype=np.int64)

    @property
    def nnz(self) -> int:
        return int(self.w.size)

    def coordinates(self):
        """Physical ``(q1, p1, u, v, value)`` arrays."""
        pg = self.grid
        return (self.q1 * pg.dq, self.p1 * pg.dp, 2 * pg.qgrid.x0 + self.su * pg.dq, self.sv * pg.dp, self.w)

    def _bin(self, su: int, sv: int) -> slice:
        key = su * (4 * self.grid.n + 1) + sv
        lo = np.searchsorted(self._keys, key, "left")
        hi = np.searchsorted(self._keys, key, "right")
        return slice(lo, hi)

    def sine_transform(self, x: float, y: float, u: float, v: float) -> float:
        """``int sin((x p1 + y q1)/hbar) R(q1, p1, u, v) dq1 dp1``.

        The lattice delta in ``(u, v)`` is smoothed by a tent of half-width
        two lattice units, which integrates to one over the parity-split
        ``su``/``sv`` sublattices.
        """
        pg = self.grid
        tu = (u - 2 * pg.qgrid.x0) / pg.dq
        tv = v / pg.dp
        total = 0.0
        for su in range(math.floor(tu) - 1, math.floor(tu) + 3):
            wu = 0.5 * max(0.0, 1.0 - abs(tu - su) / 2)
            if wu == 0.0:
                continue
            for sv in range(math.floor(tv) - 1, math.floor(tv) + 3):
                wv = 0.5 * max(0.0, 1.0 - abs(tv - sv) / 2)
                if wv == 0.0:
                    continue
                s = self._bin(su, sv)
                if s.start == s.stop:
                    continue
                arg = (x * self.p1[s] * pg.dp + y * self.q1[s] * pg.dq) / pg.hbar
                total += wu * wv * math.fsum(self.w[s] * np.sin(arg))
        return total * (2 * pg.dq) * (2 * pg.dp)


def r_kernel(alpha: PhaseSpaceGenerator) -> RKernel:
    """Pushforward of the generator entries to the ``R`` coordinates."""
    i, k, i2, k2, w = alpha.entries()
    n = alpha.grid.n
    return RKernel(alpha.grid, i2 - i, k - k2, i + i2, k + k2 - n, w)


def _sample_box(pg: PhaseGrid, half_width):
    if half_width is None:
        cq = pg.qgrid.x0 + pg.n * pg.dq / 2
        return cq, pg.n * pg.dq / 4, pg.n * pg.dp / 4
    if np.ndim(half_width) == 0:
        return 0.0, float(half_width), float(half_width)
    hq, hp = half_width
    return 0.0, float(hq), float(hp)


def factorizability_residual(alpha: PhaseSpaceGenerator, samples: int = 200, seed: int = 42, *,
                             half_width=None, R: RKernel | None = None) -> float:
    """RMS defect of the factorizability condition at seeded random points.

    With ``S(x, y; u, v)`` the sine transform of ``R``, the condition reads

        S(q, p; q', p') = S(m+; m+) - S(m-; m-),
        m+- = ((q' +- q)/2, (p' +- p)/2),

    and the defect is scaled by ``hbar`` so it is measured in symbol units.
    Points are drawn from the central half of the domain, or from
    ``|q|, |p| <= half_width`` when given.
    """
    pg = alpha.grid
    R = r_kernel(alpha) if R is None else R
    cq, hq, hp = _sample_box(pg, half_width)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1.0, 1.0, size=(samples, 4)) * np.array([hq, hp, hq, hp])
    pts[:, 0] += cq
    pts[:, 2] += cq
    defects = np.empty(samples)
    for j, (q, p, qq, pp) in enumerate(pts):
        mp = ((qq + q) / 2, (pp + p) / 2)
        mm = ((qq - q) / 2, (pp - p) / 2)
        lhs = R.sine_transform(q, p, qq, pp)
        rhs = R.sine_transform(*mp, *mp) - R.sine_transform(*mm, *mm)
        defects[j] = pg.hbar * (lhs - rhs)
    return float(np.sqrt(np.mean(defects ** 2)))


def generator_symbol(alpha: PhaseSpaceGenerator, c: float = 0.0, *, check: bool = False,
                     threshold: float = DEFAULT_TOLERANCES.factorizable_residual) -> RealField2D:
    """Hermitian generator symbol ``A(q, p) = c + hbar S(q, p; q, p)`` on the grid.

    Grid point ``(q_i, p_k)`` sits at tent coordinates ``su = i + q_0/dq``
    and ``sv = k - n/2``; every entry feeds the grid points within two
    tent units, accumulated with ``bincount``.  ``check=True`` warns when
    the factorizability residual exceeds ``threshold``.
    """
    pg = alpha.grid
    n = pg.n
    if check:
        r = factorizability_residual(alpha)
        if r > threshold:
            warnings.warn(f"generator is not factorizable (residual {r:.3g} > {threshold:g})", stacklevel=2)
    R = r_kernel(alpha)
    off_q = pg.qgrid.x0 / pg.dq
    base_q = math.floor(off_q)
    off_p = -(n // 2)
    p1 = R.p1 * pg.dp
    q1 = R.q1 * pg.dq
    idx, contrib = [], []
    for jq in range(-2, 3):
        # su - (i - off_q) = jq + off_q - base_q
        wq = 0.5 * max(0.0, 1.0 - abs(jq + off_q - base_q) / 2)
        if wq == 0.0:
            continue
        i = R.su - jq + base_q
        for jp in range(-1, 2):
            wp = 0.5 * max(0.0, 1.0 - abs(jp) / 2)
            k = R.sv - jp - off_p
            ok = (i >= 0) & (i < n) & (k >= 0) & (k < n)
            ii, kk = i[ok], k[ok]
            arg = (pg.q[ii] * p1[ok] + pg.p[kk] * q1[ok]) / pg.hbar
            idx.append(ii * n + kk)
            contrib.append(R.w[ok] * np.sin(arg) * (wq * wp))
    idx = np.concatenate(idx)
    contrib = np.concatenate(contrib)
    S = np.bincount(idx, weights=contrib, minlength=n * n).reshape(n, n)
    A = c + pg.hbar * S * (2 * pg.dq) * (2 * pg.dp)
    return RealField2D(pg, A)


def quantize_generator(A: RealField2D) -> OperatorKernel:
    """Hilbert-space generator kernel of a symbol (Weyl quantization)."""
    return weyl_quantize(A)
