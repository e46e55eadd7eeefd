import json
import math

import numpy as np
import pytest

from wignerlab.errors import GridMismatchError
from wignerlab.grid import RealField2D, SampleGrid1D, make_conjugate_grid
from wignerlab.states import density_kernel, superpose_wavefunctions
from wignerlab.symmetry import GroupElementHW, act_heisenberg_weyl, act_time_reversal
from wignerlab.transforms import wigner_from_wavefunction
from wignerlab.verify import (
    CheckReport,
    check_hermitian,
    check_norm,
    check_orthogonality,
    check_purity,
    compare_fields,
)

PURE = 1 / (2 * math.pi)


def field(W, values):
    return RealField2D(W.grid, values)


def test_purity_pure(hermite_wigner):
    r = check_purity(hermite_wigner[0])
    assert r.passed and r.mode == "rel"
    assert r.measured == pytest.approx(0.159155, abs=1e-6)
    assert r.expected == pytest.approx(PURE, rel=1e-15)


def test_purity_mixed_fails(hermite_wigner):
    W0, W1 = hermite_wigner[:2]
    r = check_purity(field(W0, 0.5 * (W0.values + W1.values)))
    assert not r.passed
    assert r.measured == pytest.approx(PURE / 2, rel=1e-6)


def test_purity_zero_fails(hermite_wigner):
    r = check_purity(field(hermite_wigner[0], np.zeros((256, 256))))
    assert r.measured == 0.0 and not r.passed


def test_norm(hermite_wigner):
    for W in hermite_wigner:
        assert check_norm(W).passed
    W = hermite_wigner[2]
    r = check_norm(field(W, 2 * W.values))
    assert not r.passed and r.measured == pytest.approx(2.0, abs=1e-10)
    r = check_norm(field(W, W.values - W.values.mean()))
    assert not r.passed and abs(r.measured) < 1e-12


def test_orthogonality(hermite, hermite_wigner):
    W0, W1 = hermite_wigner[:2]
    assert check_orthogonality(W0, W1).passed
    r = check_orthogonality(W0, W0)
    assert not r.passed and r.measured == pytest.approx(PURE, rel=1e-8)
    psi = superpose_wavefunctions(hermite[0], hermite[1], math.sqrt(0.6), math.sqrt(0.4))
    r = check_orthogonality(W0, wigner_from_wavefunction(psi, W0.grid))
    assert r.measured == pytest.approx(0.6 * PURE, abs=1e-4)


def test_orthogonality_symmetric(hermite_wigner):
    a = check_orthogonality(hermite_wigner[1], hermite_wigner[3]).measured
    b = check_orthogonality(hermite_wigner[3], hermite_wigner[1]).measured
    assert abs(a - b) <= 1e-16


def test_checks_invariant_under_symmetries(hermite_wigner, pgrid):
    W = hermite_wigner[4]
    for G in (act_time_reversal(W), act_heisenberg_weyl(W, GroupElementHW(7 * pgrid.dq, -5 * pgrid.dp))):
        assert check_purity(G).measured == pytest.approx(check_purity(W).measured, rel=1e-12)
        assert check_norm(G).measured == pytest.approx(check_norm(W).measured, abs=1e-12)


def test_report_json_keys():
    r = CheckReport.evaluate("norm", 1.00001, 1.0, 1e-4)
    d = json.loads(r.to_json())
    assert list(d) == ["name", "measured", "expected", "tol", "mode", "passed"]
    assert d["passed"] is True and d["tol"] == 1e-4


def test_report_relative_mode():
    assert CheckReport.evaluate("x", 10.5, 10.0, 0.06, "rel").passed
    assert not CheckReport.evaluate("x", 10.5, 10.0, 0.06, "abs").passed


def test_check_hermitian(hermite):
    assert check_hermitian(density_kernel(hermite[2])).passed
    assert not check_hermitian(np.array([[0, 1j], [1j, 0]])).passed


def test_compare_fields(hermite_wigner):
    W = hermite_wigner[1]
    m = compare_fields(W, W)
    assert (m.max_abs, m.l2, m.rel_l2) == (0.0, 0.0, 0.0)
    assert compare_fields(W, field(W, W.values + 0.001)).max_abs == pytest.approx(0.001, rel=1e-9)
    assert compare_fields(W, field(W, -W.values)).max_abs == pytest.approx(2 * np.abs(W.values).max(), rel=1e-15)


def test_compare_fields_grid_mismatch(hermite_wigner):
    other = make_conjugate_grid(SampleGrid1D(-8.0, 1 / 16, 256), 0.5)
    with pytest.raises(GridMismatchError):
        compare_fields(hermite_wigner[0], RealField2D(other, hermite_wigner[0].values))
