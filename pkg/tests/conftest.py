import math

import pytest

from wignerlab import kernels
from wignerlab.grid import SampleGrid1D, make_conjugate_grid
from wignerlab.states import harmonic_oscillator_state
from wignerlab.transforms import wigner_from_wavefunction

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = mark.args
    ok = rep.passed
    prev = _ACCEPTANCE.get(number)
    _ACCEPTANCE[number] = (title, ok if prev is None else prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")


def scaled_grid(hbar=1.0, n=256):
    """``x in [-8, 8) * sqrt(hbar)``; the default grid at hbar = 1."""
    s = math.sqrt(hbar)
    return SampleGrid1D(-8.0 * s, 16.0 * s / n, n)


@pytest.fixture(scope="session")
def grid():
    return scaled_grid()


@pytest.fixture(scope="session")
def pgrid(grid):
    return make_conjugate_grid(grid, 1.0)


@pytest.fixture(scope="session")
def hermite(grid):
    return [harmonic_oscillator_state(k, grid) for k in range(6)]


@pytest.fixture(scope="session")
def hermite_wigner(hermite, pgrid):
    return [wigner_from_wavefunction(phi, pgrid) for phi in hermite]


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    with kernels.use_backend(request.param):
        yield request.param
