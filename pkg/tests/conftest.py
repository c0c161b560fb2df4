import numpy as np
import pytest

from spherefield.bifurcation import FixedParams, hopf_points_at_eta_e
from spherefield.kernels import PresynapticParams

# acceptance summary collected by tests/test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def make_params(eta_e, eta_i, d_e, d_i, gamma=8.0, delta=0.0):
    """Presynaptic parameter set used throughout the worked examples."""
    return PresynapticParams(eta_e, eta_i, sigma_e=2.0 / 9.0, sigma_i=1.0 / 6.0).expand(
        alpha_e=1.0, alpha_i=1.0, d_e=d_e, d_i=d_i, tau0=3.0, c=0.8,
        gamma=gamma, delta=delta)


def solve_hopf(l, d_e, d_i, eta_e, gamma=8.0, delta=0.0, omega_range=(0.4, 1.2)):
    fixed = FixedParams(d_e=d_e, d_i=d_i, gamma=gamma, delta=delta)
    pts = hopf_points_at_eta_e(fixed, l, eta_e, omega_range=omega_range)
    assert pts, f"no Hopf point at degree {l} with eta_e={eta_e}"
    return pts[0]


@pytest.fixture(scope="session")
def hopf_l0():
    return solve_hopf(0, 0.02, 0.2, 6.1)


@pytest.fixture(scope="session")
def hopf_l1():
    return solve_hopf(1, 1.0, 0.1, 2.9)


@pytest.fixture(scope="session")
def hopf_l2():
    return solve_hopf(2, 0.4, 0.04, 5.2, gamma=10.332, delta=0.1)


@pytest.fixture(scope="session")
def hopf_l3():
    return solve_hopf(3, 0.1, 0.01, 6.1)


@pytest.fixture(scope="session")
def mesh2():
    from spherefield.mesh import build_mesh
    return build_mesh(2)


@pytest.fixture(scope="session")
def mesh1():
    from spherefield.mesh import build_mesh
    return build_mesh(1)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[num]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"CRITERION {num:2d}: {status}  {detail}")
