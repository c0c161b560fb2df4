import numpy as np
import pytest

from spherefield.kernels import (ModelParams, PresynapticParams, kernel_matrix,
                                 sigmoid, sigmoid_deriv)
from conftest import make_params


@pytest.fixture
def params():
    return make_params(6.1, -14.134, 0.02, 0.2)


def central_fd(f, u, h):
    return (f(u + h) - f(u - h)) / (2 * h)


class TestSigmoid:
    def test_shift_forces_zero_at_rest(self, params):
        assert sigmoid_deriv(params, 0, 0.0) == 0.0

    def test_slope_at_rest_gamma8(self, params):
        # gamma/4 when delta = 0
        assert sigmoid_deriv(params, 1, 0.0) == pytest.approx(2.0, abs=1e-15)

    def test_odd_symmetry_kills_second_derivative(self, params):
        assert sigmoid_deriv(params, 2, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_second_derivative_nonzero_off_center(self):
        p = make_params(6.1, -14.134, 0.02, 0.2, gamma=10.332, delta=0.1)
        val = sigmoid_deriv(p, 2, 0.0)
        assert abs(val) > 1.0
        # central finite differences of S' with a step sweep as oracle
        best = None
        for h in (1e-4, 1e-5, 1e-6):
            fd = central_fd(lambda u: sigmoid_deriv(p, 1, u), 0.0, h)
            best = fd if best is None or abs(fd - val) < abs(best - val) else best
        assert val == pytest.approx(best, rel=1e-6)

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_matches_finite_differences(self, order, rng):
        for gamma in (4.0, 8.0, 16.0):
            for delta in (0.0, 0.1):
                p = make_params(1.0, -1.0, 0.0, 0.0, gamma=gamma, delta=delta)
                for u in rng.uniform(-1, 1, 5):
                    fd = central_fd(lambda x: sigmoid_deriv(p, order - 1, x), u, 1e-6)
                    val = sigmoid_deriv(p, order, u)
                    assert val == pytest.approx(fd, rel=1e-6, abs=1e-9)

    def test_bounded(self, params, rng):
        lo = -1.0 / (1.0 + np.exp(params.gamma * params.delta))
        u = rng.uniform(-50, 50, 200)
        vals = sigmoid(params, u)
        assert np.all(vals >= lo - 1e-15)
        assert np.all(vals <= 1.0 + lo + 1e-15)

    def test_bad_order_rejected(self, params):
        with pytest.raises(ValueError):
            sigmoid_deriv(params, 4, 0.0)


class TestKernelMatrix:
    def test_coincident_points(self, params):
        # arccos(1) = 0 leaves only the fixed-delay factor
        z = 0.7 + 1.3j
        got = kernel_matrix(params, 1.0, z)
        want = params.eta() * np.exp(-z * params.tau0)
        np.testing.assert_allclose(got, want, rtol=1e-14)

    def test_zero_rate_is_real_connectivity(self, params):
        got = kernel_matrix(params, 0.3, 0.0)
        assert np.all(np.isreal(got))
        want = params.eta() * np.exp(-np.arccos(0.3) / params.sigma())
        np.testing.assert_allclose(got, want, rtol=1e-14)

    def test_independent_reevaluation(self, params):
        # second implementation straight from arccos/exp calls
        import math
        import cmath
        s, z = 0.0, 1.0 + 1.0j
        got = kernel_matrix(params, s, z)
        th = math.acos(s)
        for (a, b), eta, sig in [((0, 0), params.eta_ee, params.sigma_ee),
                                 ((0, 1), params.eta_ei, params.sigma_ei),
                                 ((1, 0), params.eta_ie, params.sigma_ie),
                                 ((1, 1), params.eta_ii, params.sigma_ii)]:
            want = eta * math.exp(-th / sig) * cmath.exp(-z * (params.tau0 + th / params.c))
            assert got[a, b] == pytest.approx(want, rel=1e-14)

    def test_conjugation_symmetry(self, params, rng):
        for _ in range(20):
            s = rng.uniform(-1, 1)
            z = complex(rng.normal(), rng.normal())
            a = kernel_matrix(params, s, np.conj(z))
            b = np.conj(kernel_matrix(params, s, z))
            np.testing.assert_allclose(a, b, atol=1e-14)

    def test_clamp_within_tolerance(self, params):
        np.testing.assert_allclose(kernel_matrix(params, 1.0 + 1e-13, 0.0),
                                   kernel_matrix(params, 1.0, 0.0), rtol=1e-12)

    def test_domain_error_beyond_tolerance(self, params):
        with pytest.raises(ValueError):
            kernel_matrix(params, 1.0 + 1e-9, 0.0)


class TestParams:
    def test_presynaptic_expansion_lossless(self):
        pre = PresynapticParams(2.0, -3.0, 0.25, 0.5)
        p = pre.expand(alpha_e=1, alpha_i=2, d_e=0.1, d_i=0.2, tau0=3, c=0.8,
                       gamma=8, delta=0)
        assert (p.eta_ee, p.eta_ie) == (2.0, 2.0)
        assert (p.eta_ei, p.eta_ii) == (-3.0, -3.0)
        assert (p.sigma_ee, p.sigma_ie) == (0.25, 0.25)
        assert (p.sigma_ei, p.sigma_ii) == (0.5, 0.5)

    def test_max_delay(self):
        p = make_params(1.0, -1.0, 0.0, 0.0)
        assert p.max_delay == pytest.approx(3.0 + np.pi / 0.8)

    @pytest.mark.parametrize("bad", [
        dict(alpha_e=0.0), dict(d_e=-0.1), dict(sigma_ee=0.0),
        dict(tau0=0.0), dict(c=0.0), dict(gamma=0.0), dict(delta=-0.1)])
    def test_invariants_enforced(self, bad):
        good = dict(alpha_e=1, alpha_i=1, d_e=0.1, d_i=0.1,
                    eta_ee=1, eta_ei=-1, eta_ie=1, eta_ii=-1,
                    sigma_ee=0.2, sigma_ei=0.2, sigma_ie=0.2, sigma_ii=0.2,
                    tau0=3, c=0.8, gamma=8, delta=0)
        good.update(bad)
        with pytest.raises(ValueError):
            ModelParams(**good)
