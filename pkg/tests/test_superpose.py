import math
import warnings

import numpy as np
import pytest

from wignerlab.errors import AnchorError, DegenerateError, GridMismatchError, GridTooLargeError, ValidationError
from wignerlab.grid import RealField2D, integrate_2d
from wignerlab.states import WaveFunction, fidelity
from wignerlab.superpose import (
    SuperpositionSpec,
    choose_anchors,
    cross_term_direct,
    cross_term_fast,
    recover_hilbert_superposition,
    restrict_to_grid,
    superpose_wigner,
    validate_pair,
)
from wignerlab.transforms import marginal, wigner_from_wavefunction

INV_2PI = 1 / (2 * math.pi)


def spec_for(W1, W2, w1, eps, x1="auto", x2="auto"):
    a1, a2 = choose_anchors(W1, W2)
    x1 = a1 if x1 == "auto" else x1
    x2 = a2 if x2 == "auto" else x2
    return SuperpositionSpec.from_weights(w1, 1 - w1, eps, marginal(W1, x1), marginal(W2, x2), x1, x2)


def hilbert_state(phi1, phi2, w1, eps, x1, x2):
    """``sqrt(w1) phi1 + sqrt(w2) e^{-i eps} phi2`` with each branch phased real-positive at its anchor."""
    g = phi1.grid
    i1, i2 = g.index_of(x1), g.index_of(x2)
    s1 = np.conj(phi1.values[i1]) / abs(phi1.values[i1])
    s2 = np.conj(phi2.values[i2]) / abs(phi2.values[i2])
    v = math.sqrt(w1) * s1 * phi1.values + math.sqrt(1 - w1) * np.exp(-1j * eps) * s2 * phi2.values
    return WaveFunction(g, v, phi1.hbar)


def test_validate_pair_passes(hermite_wigner):
    reports = validate_pair(hermite_wigner[0], hermite_wigner[1])
    assert all(r.passed for r in reports)
    assert {r.name for r in reports} == {"orthogonality", "purity1", "norm1", "purity2", "norm2"}


def test_validate_pair_self_overlap(hermite_wigner):
    rep = validate_pair(hermite_wigner[0], hermite_wigner[0])[0]
    assert not rep.passed
    assert rep.measured == pytest.approx(INV_2PI, rel=1e-10)
    assert rep.measured == pytest.approx(0.15915, abs=1e-5)


def test_validate_pair_scaled(hermite_wigner):
    half = RealField2D(hermite_wigner[0].grid, 0.5 * hermite_wigner[0].values)
    reports = {r.name: r for r in validate_pair(half, hermite_wigner[1])}
    assert not reports["norm1"].passed
    assert reports["norm1"].measured == pytest.approx(0.5, abs=1e-12)


def test_validate_pair_grid_mismatch(hermite_wigner):
    from wignerlab.grid import SampleGrid1D, make_conjugate_grid

    pg = make_conjugate_grid(SampleGrid1D(-8, 1 / 16, 256), 2.0)
    with pytest.raises(GridMismatchError):
        validate_pair(hermite_wigner[0], RealField2D(pg, hermite_wigner[1].values))


def test_choose_anchors(hermite_wigner):
    assert choose_anchors(hermite_wigner[0], hermite_wigner[1]) == (0.0, -1.0)


def test_choose_anchors_zero_field(hermite_wigner):
    zero = RealField2D(hermite_wigner[0].grid, np.zeros((256, 256)))
    with pytest.raises(AnchorError):
        choose_anchors(zero, hermite_wigner[1])


def test_spec_invariants():
    with pytest.raises(ValidationError):
        SuperpositionSpec(0.0, 0.0)
    with pytest.raises(ValidationError):
        SuperpositionSpec(-1.0, 1.0)
    with pytest.warns(UserWarning, match="0.71681469"):
        s = SuperpositionSpec(1.0, 1.0, 7.0)
    assert s.epsilon == pytest.approx(7.0 - 2 * math.pi, abs=1e-15)


def test_epsilon_periodicity(hermite_wigner):
    W1, W2 = hermite_wigner[0], hermite_wigner[1]
    a = superpose_wigner(W1, W2, SuperpositionSpec(1.0, 0.8, 1.0))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        b = superpose_wigner(W1, W2, SuperpositionSpec(1.0, 0.8, 1.0 + 2 * math.pi))
    assert b.epsilon == 1.0 or abs(b.epsilon - 1.0) < 1e-15
    spec_b = SuperpositionSpec(1.0, 0.8, b.epsilon)
    c = superpose_wigner(W1, W2, spec_b)
    assert np.array_equal(b.W.values, c.W.values)
    assert np.abs(a.W.values - b.W.values).max() < 1e-13


@pytest.mark.parametrize("eps", [0.0, math.pi / 2])
def test_matches_hilbert_path(hermite, hermite_wigner, pgrid, eps):
    W1, W2 = hermite_wigner[0], hermite_wigner[1]
    spec = spec_for(W1, W2, 0.6, eps)
    res = superpose_wigner(W1, W2, spec)
    psi = hilbert_state(hermite[0], hermite[1], 0.6, eps, res.x1_used, res.x2_used)
    Wh = wigner_from_wavefunction(psi, pgrid)
    assert np.abs(Wh.values - res.W.values).max() < 1e-5
    assert res.c1_abs ** 2 * res.marginal1 == pytest.approx(0.6, abs=1e-10)
    assert res.c2 == pytest.approx(res.c2_abs * np.exp(-1j * eps), abs=1e-15)
    assert all(c.passed for c in res.checks)


def test_coefficient_constraint(hermite_wigner):
    res = superpose_wigner(hermite_wigner[1], hermite_wigner[2], SuperpositionSpec(0.7, 1.9, 2.0))
    total = res.c1_abs ** 2 * res.marginal1 + res.c2_abs ** 2 * res.marginal2
    assert total == pytest.approx(1.0, abs=1e-6)


def test_single_branch_exact(hermite, hermite_wigner):
    res = superpose_wigner(hermite_wigner[0], hermite_wigner[1], SuperpositionSpec(1.0, 0.0))
    assert np.array_equal(res.W.values, hermite_wigner[0].values)
    psi = recover_hilbert_superposition(res, hermite_wigner[0], hermite_wigner[1])
    assert fidelity(psi, hermite[0]) >= 1 - 1e-8


@pytest.mark.parametrize("eps", [0.0, 1.0])
def test_recover_hilbert(hermite, hermite_wigner, eps):
    W1, W2 = hermite_wigner[0], hermite_wigner[1]
    res = superpose_wigner(W1, W2, spec_for(W1, W2, 0.6, eps))
    psi = recover_hilbert_superposition(res, W1, W2)
    oracle = hilbert_state(hermite[0], hermite[1], 0.6, eps, res.x1_used, res.x2_used)
    assert abs(psi.norm() - 1) < 1e-6
    assert fidelity(psi, oracle) >= 1 - 1e-6


def test_rejects_non_orthogonal(hermite_wigner):
    with pytest.raises(ValidationError) as info:
        superpose_wigner(hermite_wigner[0], hermite_wigner[0], SuperpositionSpec(1.0, 1.0))
    assert any(r.name == "orthogonality" and not r.passed for r in info.value.reports)


def test_explicit_anchor_with_zero_marginal(hermite_wigner):
    with pytest.raises(DegenerateError):
        superpose_wigner(hermite_wigner[0], hermite_wigner[1], SuperpositionSpec(1.0, 1.0, 0.0, 0.0, 0.0))


ANCHORS = [(0.0, -1.0), (0.5, -0.5), (-0.75, -1.5), (1.0, -0.75), (-1.25, -2.0)]


def test_anchor_invariance(hermite_wigner):
    # phi1 < 0 on x < 0, so every x2 keeps the anchor phase of the AUTO choice
    W1, W2 = hermite_wigner[0], hermite_wigner[1]
    outs = []
    for x1, x2 in ANCHORS:
        assert marginal(W1, x1) >= 1e-3 and marginal(W2, x2) >= 1e-3
        outs.append(superpose_wigner(W1, W2, spec_for(W1, W2, 0.6, 0.4, x1, x2)).W.values)
    for out in outs[1:]:
        assert np.abs(out - outs[0]).max() < 1e-5


def test_anchor_sign_flip_changes_state(hermite_wigner):
    W1, W2 = hermite_wigner[0], hermite_wigner[1]
    a = superpose_wigner(W1, W2, spec_for(W1, W2, 0.6, 0.4, 0.0, -1.0)).W.values
    b = superpose_wigner(W1, W2, spec_for(W1, W2, 0.6, 0.4 + math.pi, 0.0, 1.0)).W.values
    assert np.abs(a - b).max() < 1e-5


def test_nonlinearity_witness(hermite_wigner):
    W1, W2 = hermite_wigner[0], hermite_wigner[1]
    res = superpose_wigner(W1, W2, spec_for(W1, W2, 0.5, 0.0))
    assert np.abs(res.W.values - 0.5 * W1.values - 0.5 * W2.values).max() >= 0.01


def test_cross_fast_zero_when_branch_absent(hermite_wigner):
    F = cross_term_fast(hermite_wigner[0], hermite_wigner[1], SuperpositionSpec(0.0, 1.0))
    assert not F.values.any()


def test_cross_fast_relabel_symmetry(hermite_wigner):
    W1, W2 = hermite_wigner[0], hermite_wigner[1]
    a = cross_term_fast(W1, W2, SuperpositionSpec(0.7, 1.3, 1.0)).values
    b = cross_term_fast(W2, W1, SuperpositionSpec(1.3, 0.7, 2 * math.pi - 1.0)).values
    assert np.abs(a - b).max() < 1e-14


@pytest.mark.parametrize("eps", [0.0, math.pi / 2, 1.0])
def test_direct_matches_fast(backend, hermite_wigner, eps):
    W1, W2 = hermite_wigner[0], hermite_wigner[1]
    spec = SuperpositionSpec(1.0, 1.0, eps)
    D = cross_term_direct(W1, W2, spec, n_oracle=32)
    F = restrict_to_grid(cross_term_fast(W1, W2, spec), D.grid)
    assert D.grid.n == 32
    assert np.abs(D.values - F.values).max() < 2e-3


def test_direct_matches_hilbert_cross_term(hermite, hermite_wigner, pgrid):
    W1, W2 = hermite_wigner[0], hermite_wigner[1]
    spec = SuperpositionSpec(1.0, 1.0, 0.0)
    D = cross_term_direct(W1, W2, spec, n_oracle=32)
    x1, x2 = choose_anchors(W1, W2)
    m1, m2 = marginal(W1, x1), marginal(W2, x2)
    # T is the unnormalized Wigner function of g1 + g2 with g_i = phi_i phi_i*(x_i)
    i1, i2 = pgrid.qgrid.index_of(x1), pgrid.qgrid.index_of(x2)
    g1 = hermite[0].values * np.conj(hermite[0].values[i1])
    g2 = hermite[1].values * np.conj(hermite[1].values[i2])
    T = wigner_from_wavefunction(WaveFunction(pgrid.qgrid, g1 + g2), pgrid).values
    cross = RealField2D(pgrid, T - m1 * W1.values - m2 * W2.values)
    assert np.abs(D.values - restrict_to_grid(cross, D.grid).values).max() < 2e-3


def test_direct_eps_shift_negates(hermite_wigner):
    W1, W2 = hermite_wigner[0], hermite_wigner[1]
    a = cross_term_direct(W1, W2, SuperpositionSpec(1.0, 1.0, 0.3), n_oracle=16)
    b = cross_term_direct(W1, W2, SuperpositionSpec(1.0, 1.0, 0.3 + math.pi), n_oracle=16)
    assert np.abs(a.values + b.values).max() < 1e-12


def test_direct_zero_when_branch_absent(hermite_wigner):
    D = cross_term_direct(hermite_wigner[0], hermite_wigner[1], SuperpositionSpec(1.0, 0.0), n_oracle=16)
    assert not D.values.any()


def test_direct_size_limit(hermite_wigner):
    with pytest.raises(GridTooLargeError):
        cross_term_direct(hermite_wigner[0], hermite_wigner[1], SuperpositionSpec(1.0, 1.0), n_oracle=64, stride=1)


def test_degenerate_total(hermite_wigner):
    zero = RealField2D(hermite_wigner[0].grid, np.zeros((256, 256)))
    with pytest.raises(DegenerateError):
        superpose_wigner(zero, hermite_wigner[1], SuperpositionSpec(1.0, 1.0), validate=False)


def test_output_normalized(hermite_wigner):
    res = superpose_wigner(hermite_wigner[2], hermite_wigner[3], SuperpositionSpec(1.0, 2.0, 3.0))
    assert integrate_2d(res.W) == pytest.approx(1.0, abs=1e-12)
