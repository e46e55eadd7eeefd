"""Timing comparison of the fast and oracle paths and of the two kernel backends.

Every pair is checked for agreement before it is timed; the speed numbers
are reported, not asserted.
"""
from __future__ import annotations

import csv
import io
import math
import time

import numpy as np

from . import kernels
from .grid import SampleGrid1D, make_conjugate_grid
from .states import harmonic_oscillator_state
from .superpose import SuperpositionSpec, cross_term_direct, cross_term_fast, restrict_to_grid
from .transforms import wigner_from_wavefunction

__all__ = ["run_benchmark", "format_csv"]

COLUMNS = ("n", "task", "variant", "seconds", "agreement")


def _time(fn, repeat: int) -> tuple[float, object]:
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _agree(a, b, tol, what):
    d = float(np.abs(np.asarray(a) - np.asarray(b)).max())
    if not d <= tol:
        raise AssertionError(f"{what}: paths disagree by {d:.3e} > {tol:g}")
    return d


def run_benchmark(sizes=(32, 64, 128), hbar: float = 1.0, repeat: int = 3, direct_max: int = 48) -> list[dict]:
    """Time transform and cross-term variants on ``x in [-8, 8)`` grids of each size."""
    rows = []
    backends = sorted(kernels.backends())
    for n in sizes:
        grid = SampleGrid1D(-8.0 * math.sqrt(hbar), 16.0 * math.sqrt(hbar) / n, n)
        pg = make_conjugate_grid(grid, hbar)
        phi0 = harmonic_oscillator_state(0, grid, hbar)
        phi1 = harmonic_oscillator_state(1, grid, hbar)

        t_fft, W_fft = _time(lambda: wigner_from_wavefunction(phi0, pg, "fft"), repeat)
        per_backend = {}
        for name in backends:
            with kernels.use_backend(name):
                per_backend[name] = _time(lambda: wigner_from_wavefunction(phi0, pg, "quadrature"), repeat)
        ref = per_backend[backends[0]][1].values
        for name, (t, W) in per_backend.items():
            d = _agree(W.values, W_fft.values, 1e-10, f"wigner n={n} {name}")
            _agree(W.values, ref, 1e-12, f"wigner backends n={n}")
            rows.append(dict(n=n, task="wigner", variant=f"quadrature-{name}", seconds=t, agreement=d))
        rows.append(dict(n=n, task="wigner", variant="fft", seconds=t_fft, agreement=0.0))

        W0 = wigner_from_wavefunction(phi0, pg)
        W1 = wigner_from_wavefunction(phi1, pg)
        spec = SuperpositionSpec(1.0, 1.0, 0.0)
        t_fast, F = _time(lambda: cross_term_fast(W0, W1, spec), repeat)
        rows.append(dict(n=n, task="cross", variant="fast", seconds=t_fast, agreement=0.0))
        if n <= direct_max:
            rows.extend(_bench_direct(n, hbar))
    return rows


def _bench_direct(n: int, hbar: float) -> list[dict]:
    """Direct cross term on an ``n``-point oracle grid read from an ``8n`` input grid."""
    n_in = 8 * n
    grid = SampleGrid1D(-8.0 * math.sqrt(hbar), 16.0 * math.sqrt(hbar) / n_in, n_in)
    pg = make_conjugate_grid(grid, hbar)
    W0 = wigner_from_wavefunction(harmonic_oscillator_state(0, grid, hbar), pg)
    W1 = wigner_from_wavefunction(harmonic_oscillator_state(1, grid, hbar), pg)
    spec = SuperpositionSpec(1.0, 1.0, 0.0)
    F = cross_term_fast(W0, W1, spec)
    rows, ref = [], None
    for name in sorted(kernels.backends()):
        with kernels.use_backend(name):
            t, D = _time(lambda: cross_term_direct(W0, W1, spec, stride=4, n_oracle=n), 1)
        if ref is None:
            ref = D.values
        _agree(D.values, ref, 1e-10, f"direct backends n={n}")
        d = _agree(D.values, restrict_to_grid(F, D.grid).values, 2e-3, f"cross n={n} {name}")
        rows.append(dict(n=n, task="cross", variant=f"direct-{name}", seconds=t, agreement=d))
    return rows


def format_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (f"{r[k]:.6g}" if isinstance(r[k], float) else r[k]) for k in COLUMNS})
    return buf.getvalue()
