import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss
from scipy.special import sph_harm_y

from spherefield.harmonics import (compute_transfer, gauss_legendre_rule,
                                   kernel_rule, legendre, sph_harm,
                                   transfer_entries)
from conftest import make_params


class TestLegendre:
    def test_degree_zero(self):
        assert legendre(0, 0.3) == 1.0

    def test_degree_one(self):
        assert legendre(1, -0.7) == -0.7

    def test_degree_three_closed_form(self):
        # (5 s^3 - 3 s)/2
        assert legendre(3, 0.5) == pytest.approx(-0.4375, abs=1e-15)

    def test_endpoint_exact(self):
        for l in range(12):
            assert legendre(l, 1.0) == pytest.approx(1.0, abs=1e-14)

    def test_recurrence_residual(self, rng):
        s = rng.uniform(-1, 1, 50)
        for l in range(1, 15):
            res = ((l + 1) * legendre(l + 1, s) - (2 * l + 1) * s * legendre(l, s)
                   + l * legendre(l - 1, s))
            assert np.abs(res).max() < 1e-12

    def test_domain_error(self):
        with pytest.raises(ValueError):
            legendre(2, 1.5)


class TestSphHarm:
    def test_constant_harmonic(self):
        assert sph_harm(0, 0, 1.234, 2.345) == pytest.approx(1 / (2 * np.sqrt(np.pi)))

    def test_polar_value_degree_one(self):
        assert sph_harm(1, 0, 0.0, 0.0) == pytest.approx(np.sqrt(3 / (4 * np.pi)))

    def test_against_scipy(self, rng):
        theta = rng.uniform(0, np.pi, 40)
        phi = rng.uniform(0, 2 * np.pi, 40)
        for l in range(6):
            for m in range(-l, l + 1):
                mine = sph_harm(l, m, theta, phi)
                ref = sph_harm_y(l, m, theta, phi)
                np.testing.assert_allclose(mine, ref, atol=1e-13)

    def test_orthonormality_quadrature(self, rng):
        # Gauss-Legendre in cos(theta) x trapezoid in phi as oracle
        nx, nphi = 64, 64
        x, w = leggauss(nx)
        phi = np.arange(nphi) * 2 * np.pi / nphi
        theta = np.arccos(x)
        TH, PH = np.meshgrid(theta, phi, indexing="ij")
        W = np.tile(w[:, None], (1, nphi)) * (2 * np.pi / nphi)
        pairs = [((2, 1), (2, 1)), ((3, -2), (3, -2)), ((3, -2), (2, 1)),
                 ((4, 0), (2, 0)), ((5, 3), (5, 3)), ((5, 3), (5, -3))]
        for (l1, m1), (l2, m2) in pairs:
            val = np.sum(W * sph_harm(l1, m1, TH, PH) * np.conj(sph_harm(l2, m2, TH, PH)))
            want = 1.0 if (l1, m1) == (l2, m2) else 0.0
            assert val == pytest.approx(want, abs=1e-10)

    def test_index_error(self):
        with pytest.raises(IndexError):
            sph_harm(2, 3, 0.5, 0.5)


class TestRules:
    def test_weights_sum_to_two(self):
        for rule in (gauss_legendre_rule(64), kernel_rule(128)):
            assert abs(rule.weights.sum() - 2.0) < 1e-13

    def test_nodes_increasing_inside_domain(self):
        rule = kernel_rule(128)
        assert np.all(np.diff(rule.nodes) > 0)
        assert rule.nodes[0] > -1.0 and rule.nodes[-1] < 1.0


class TestTransfer:
    def test_closed_form_degree_zero(self):
        # antiderivative of e^{-theta/sigma} sin(theta) on [0, pi] as oracle
        p = make_params(1.0, 1.0, 0.0, 0.0)
        hk = compute_transfer(p, 0, 0.0)
        for (a, b), sig in [((0, 0), p.sigma_ee), ((0, 1), p.sigma_ei)]:
            want = 2 * np.pi * (1 + np.exp(-np.pi / sig)) / (1 + 1 / sig ** 2)
            assert hk.transfer[a, b] == pytest.approx(want, rel=1e-13)

    def test_real_at_zero_rate(self):
        p = make_params(6.1, -14.1, 0.02, 0.2)
        for l in (0, 1, 5):
            hk = compute_transfer(p, l, 0.0)
            assert np.abs(hk.transfer.imag).max() == 0.0

    def test_derivative_against_finite_differences(self):
        p = make_params(6.1, -14.1, 0.02, 0.2)
        h = 1e-6
        for l in (0, 2):
            for z in (0.3 + 0.9j, 2j):
                hk = compute_transfer(p, l, z)
                fd = (compute_transfer(p, l, z + h).transfer
                      - compute_transfer(p, l, z - h).transfer) / (2 * h)
                np.testing.assert_allclose(hk.transfer_prime, fd, rtol=1e-8)

    def test_node_doubling_stability(self):
        p = make_params(6.1, -14.1, 0.02, 0.2)
        r1, r2 = kernel_rule(128), kernel_rule(256)
        for l in (0, 7, 15):
            for z in (0.0, 3j, -1 + 9j, 10j):
                a = transfer_entries(p, l, np.asarray(complex(z)), r1)
                b = transfer_entries(p, l, np.asarray(complex(z)), r2)
                denom = max(np.abs(b).max(), 1e-30)
                assert np.abs(a - b).max() / denom < 1e-12

    def test_conjugation_symmetry(self, rng):
        p = make_params(6.1, -14.1, 0.02, 0.2)
        for _ in range(10):
            z = complex(rng.normal(), rng.normal())
            a = compute_transfer(p, 2, np.conj(z)).transfer
            b = np.conj(compute_transfer(p, 2, z).transfer)
            np.testing.assert_allclose(a, b, atol=1e-13)

    def test_transfer_vectorized_matches_scalar(self):
        p = make_params(2.0, -3.0, 0.1, 0.2)
        zs = np.array([0.1 + 0.2j, 1j, -0.5 + 2j])
        batch = transfer_entries(p, 1, zs)
        for i, z in enumerate(zs):
            single = compute_transfer(p, 1, z).transfer
            np.testing.assert_allclose(batch[:, :, i], single, rtol=1e-14)
