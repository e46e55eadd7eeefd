import math

import numpy as np
import pytest

from wignerlab.errors import DecayError, GridMismatchError, NonHermitianError, ValidationError
from wignerlab.grid import SampleGrid1D
from wignerlab.states import (
    MAX_HERMITE_ORDER,
    OperatorKernel,
    WaveFunction,
    density_kernel,
    fidelity,
    gaussian_state,
    harmonic_oscillator_state,
    inner_product,
    superpose_wavefunctions,
)

PI_QUARTER = 0.7511255444649425  # pi^(-1/4)


def test_ground_state_peak(hermite):
    assert hermite[0].values[128] == pytest.approx(PI_QUARTER, abs=1e-14)


def test_first_excited_closed_form(grid, hermite):
    x = grid.points
    expected = math.sqrt(2) * PI_QUARTER * x * np.exp(-x * x / 2)
    assert np.abs(hermite[1].values - expected).max() < 1e-14


@pytest.mark.parametrize("j,k", [(0, 1), (0, 2), (1, 3), (2, 5), (4, 5)])
def test_orthogonal(hermite, j, k):
    assert abs(inner_product(hermite[j], hermite[k])) < 1e-10


@pytest.mark.parametrize("k", range(6))
def test_normalized(hermite, k):
    assert abs(hermite[k].norm() - 1.0) < 1e-12


def test_hbar_scaling():
    g = SampleGrid1D(-8 * math.sqrt(2), math.sqrt(2) / 16, 256)
    phi = harmonic_oscillator_state(0, g, 2.0)
    assert phi.values[128].real == pytest.approx((2 * math.pi) ** -0.25, abs=1e-14)


def test_order_bound(grid):
    with pytest.raises(ValidationError):
        harmonic_oscillator_state(MAX_HERMITE_ORDER + 1, grid)
    with pytest.raises(ValidationError):
        harmonic_oscillator_state(-1, grid)


def test_decay_violation():
    small = SampleGrid1D(-2.0, 1 / 16, 64)
    with pytest.raises(DecayError):
        harmonic_oscillator_state(3, small)


def test_gaussian_momentum(grid):
    phi = gaussian_state(1.0, 0.5, 1.0, grid)
    assert abs(phi.norm() - 1) < 1e-12
    # <p> = p0; spectral derivative
    kx = 2 * np.pi * np.fft.fftfreq(grid.n, grid.dx)
    dphi = np.fft.ifft(1j * kx * np.fft.fft(phi.values))
    mean_p = (np.sum(np.conj(phi.values) * -1j * dphi) * grid.dx).real
    assert mean_p == pytest.approx(0.5, abs=1e-10)


def test_fidelity_phase_blind(hermite):
    assert fidelity(hermite[2], hermite[2].with_phase(1.3)) == pytest.approx(1.0, abs=1e-14)


def test_normalized_flag_checked(grid):
    with pytest.raises(ValidationError):
        WaveFunction(grid, 2 * np.exp(-grid.points ** 2), normalized=True)


def test_grid_mismatch(hermite):
    other = WaveFunction(SampleGrid1D(-4, 1 / 32, 256), hermite[0].values)
    with pytest.raises(GridMismatchError):
        inner_product(hermite[0], other)


def test_density_kernel(hermite):
    K = density_kernel(hermite[1])
    assert K.hermitian_residual() == 0.0
    assert K.trace() == pytest.approx(1.0, abs=1e-12)
    # rank one projector: K o K = K
    assert np.abs(K.compose(K).values - K.values).max() < 1e-12


def test_kernel_hermitian_flag(grid):
    v = np.zeros((256, 256), dtype=complex)
    v[0, 1] = 1j
    with pytest.raises(NonHermitianError):
        OperatorKernel(grid, v, hermitian=True)


def test_superpose_wavefunctions(hermite):
    a1, a2 = math.sqrt(0.6), math.sqrt(0.4) * np.exp(-1j)
    psi = superpose_wavefunctions(hermite[0], hermite[1], a1, a2)
    assert abs(inner_product(hermite[0], psi) - a1) < 1e-12
    assert abs(inner_product(hermite[1], psi) - a2) < 1e-12


def test_superpose_single_branch_exact(hermite):
    psi = superpose_wavefunctions(hermite[0], hermite[1], 1.0, 0.0)
    assert np.array_equal(psi.values, hermite[0].values)


def test_superpose_rejects(hermite):
    with pytest.raises(ValidationError):
        superpose_wavefunctions(hermite[0], hermite[1], 1.0, 1.0)
    with pytest.raises(ValidationError):
        superpose_wavefunctions(hermite[0], hermite[0], math.sqrt(0.5), math.sqrt(0.5))
