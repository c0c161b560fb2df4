import warnings

import numpy as np
import pytest

from spherefield.linear import (ResonanceError, critical_eigensolution,
                                eigenvector, find_roots, resolvent_factor,
                                spectral_matrix, spectrum_csv, winding_number)
from conftest import make_params


@pytest.fixture(scope="module")
def fig4_params():
    return make_params(6.1, -14.134164, 0.02, 0.2)


class TestSpectralMatrix:
    def test_decoupled_when_silent(self):
        p = make_params(0.0, 0.0, 0.3, 0.7)
        z = 0.4 + 1.1j
        for l in (0, 2):
            sm = spectral_matrix(p, l, z)
            ll1 = l * (l + 1)
            want = np.diag([z + 1.0 + ll1 * 0.3, z + 1.0 + ll1 * 0.7])
            np.testing.assert_allclose(sm.matrix, want, atol=1e-14)

    def test_diffusion_shifts_diagonal(self, fig4_params):
        # the degree enters only through l(l+1)d on the diagonal
        z = 0.2 + 0.5j
        for l in (1, 3):
            a = spectral_matrix(fig4_params, l, z)
            b = spectral_matrix(fig4_params.replace(d_e=0.0, d_i=0.0), l, z)
            shift = a.matrix - b.matrix
            # off-diagonals unaffected
            assert abs(shift[0, 1]) == 0.0 and abs(shift[1, 0]) == 0.0
            assert shift[0, 0] == pytest.approx(l * (l + 1) * 0.02, rel=1e-12)
            assert shift[1, 1] == pytest.approx(l * (l + 1) * 0.2, rel=1e-12)

    def test_near_zero_determinant_at_reported_point(self, fig4_params):
        # frequency printed to 3 digits
        sm = spectral_matrix(fig4_params, 0, 0.802j)
        assert abs(sm.det) < 1e-2

    def test_det_matches_direct_determinant(self, fig4_params):
        sm = spectral_matrix(fig4_params, 1, 0.3 + 0.8j)
        assert sm.det == pytest.approx(np.linalg.det(sm.matrix), rel=1e-12)

    def test_adjugate_identity(self, fig4_params, rng):
        for _ in range(5):
            z = complex(rng.normal(), rng.normal())
            sm = spectral_matrix(fig4_params, 2, z)
            scale = max(abs(sm.det), 1.0)
            np.testing.assert_allclose(sm.matrix @ sm.adjugate,
                                       sm.det * np.eye(2), atol=1e-12 * scale)

    def test_det_prime_against_finite_differences(self, fig4_params):
        h = 1e-6
        for z in (0.1 + 0.7j, 0.802j):
            sm = spectral_matrix(fig4_params, 0, z)
            fd = (spectral_matrix(fig4_params, 0, z + h).det
                  - spectral_matrix(fig4_params, 0, z - h).det) / (2 * h)
            assert sm.det_prime == pytest.approx(fd, rel=1e-8)


class TestRoots:
    def test_silent_system_spectrum_exact(self):
        p = make_params(0.0, 0.0, 0.3, 0.7)
        for l in (0, 1, 2):
            roots = find_roots(p, l, region=(-12.0, 0.5, -1.0, 1.0), seeds=7)
            ll1 = l * (l + 1)
            want = sorted({-1.0 - ll1 * 0.3, -1.0 - ll1 * 0.7})
            got = sorted(r.lam.real for r in roots)
            assert len(got) == len(want)
            np.testing.assert_allclose(got, want, atol=1e-10)
            assert all(abs(r.lam.imag) < 1e-10 for r in roots)

    def test_fig4_critical_pair_found(self, fig4_params):
        roots = find_roots(fig4_params, 0, region=(-2.0, 1.0, -3.0, 3.0), seeds=9)
        ims = sorted(r.lam.imag for r in roots if abs(r.lam.real) < 1e-8)
        assert any(abs(i - 0.802) < 5e-3 for i in ims)
        assert any(abs(i + 0.802) < 5e-3 for i in ims)

    def test_roots_conjugate_closed(self, fig4_params):
        roots = find_roots(fig4_params, 0, region=(-2.0, 1.0, -3.0, 3.0), seeds=9)
        lams = np.array([r.lam for r in roots])
        for lam in lams:
            assert np.min(np.abs(lams - np.conj(lam))) < 1e-9

    def test_count_matches_argument_principle(self, fig4_params):
        region = (-2.0, 1.0, -3.0, 3.0)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            roots = find_roots(fig4_params, 0, region=region, seeds=9)
        assert not [w for w in caught if "winding" in str(w.message)]
        assert winding_number(fig4_params, 0, region) == len(roots)

    def test_seed_perturbation_stable(self, fig4_params, rng):
        region = (-1.5, 0.5, -2.0, 2.0)
        a = find_roots(fig4_params, 0, region=region, seeds=6, check_winding=False)
        b = find_roots(fig4_params, 0,
                       region=(region[0] + 1e-3, region[1] + 1e-3,
                               region[2] - 1e-3, region[3] + 1e-3),
                       seeds=7, check_winding=False)
        la = sorted((r.lam for r in a), key=lambda v: (v.real, v.imag))
        lb = sorted((r.lam for r in b), key=lambda v: (v.real, v.imag))
        assert len(la) == len(lb)
        np.testing.assert_allclose(la, lb, atol=1e-9)

    def test_residuals_certified(self, fig4_params):
        for r in find_roots(fig4_params, 1, region=(-1.5, 0.3, -2.0, 2.0), seeds=6):
            assert r.residual < 1e-10
            assert r.multiplicity == 3


class TestEigenvector:
    def test_fig4_components_equal_up_to_phase(self, hopf_l0):
        v = eigenvector(hopf_l0.params, 0, 1j * hopf_l0.omega)
        assert v[0] == pytest.approx(v[1], rel=1e-9)
        # reported magnitude |v_e| = |-0.652 + 0.275i|
        assert abs(v[0]) == pytest.approx(abs(-0.652 + 0.275j), abs=2e-3)

    def test_unit_norm_and_residual(self, hopf_l1):
        eig = critical_eigensolution(hopf_l1.params, 1, hopf_l1.omega)
        assert np.linalg.norm(eig.v) == pytest.approx(1.0, abs=1e-14)
        assert eig.residual < 1e-10

    def test_phase_convention(self, hopf_l1):
        eig = critical_eigensolution(hopf_l1.params, 1, hopf_l1.omega)
        i = np.argmax(np.abs(eig.v))
        assert eig.v[i].imag == pytest.approx(0.0, abs=1e-14)
        assert eig.v[i].real > 0

    def test_fig9_eigenvector_ratio(self, hopf_l1):
        # v_i/v_e is phase-free; reported (-0.235-0.342i, -0.719-0.557i)
        eig = critical_eigensolution(hopf_l1.params, 1, hopf_l1.omega)
        want = (-0.719 - 0.557j) / (-0.235 - 0.342j)
        assert eig.v[1] / eig.v[0] == pytest.approx(want, rel=5e-3)

    def test_error_when_not_singular(self, fig4_params):
        with pytest.raises(ResonanceError):
            eigenvector(fig4_params, 0, 0.3 + 0.9j)


class TestResolvent:
    def test_zero_when_silent(self):
        p = make_params(0.0, 0.0, 0.3, 0.7)
        np.testing.assert_allclose(resolvent_factor(p, 1, 0.5 + 0.5j),
                                   np.zeros((2, 2)), atol=1e-15)

    def test_roundtrip_identity(self, fig4_params):
        from spherefield.harmonics import compute_transfer
        z = 0.4 + 1.2j
        Q = resolvent_factor(fig4_params, 2, z)
        sm = spectral_matrix(fig4_params, 2, z)
        G = compute_transfer(fig4_params, 2, z).transfer
        np.testing.assert_allclose(sm.matrix @ Q, G, atol=1e-12)

    def test_direct_solve_oracle(self, fig4_params, hopf_l0):
        from spherefield.harmonics import compute_transfer
        z = 2j * hopf_l0.omega
        Q = resolvent_factor(fig4_params, 0, z)
        sm = spectral_matrix(fig4_params, 0, z)
        G = compute_transfer(fig4_params, 0, z).transfer
        np.testing.assert_allclose(Q, np.linalg.solve(sm.matrix, G), rtol=1e-12)

    def test_singularity_flagged(self, hopf_l0):
        with pytest.raises(ResonanceError):
            resolvent_factor(hopf_l0.params, 0, 1j * hopf_l0.omega)


def test_spectrum_csv_format(fig4_params):
    roots = find_roots(fig4_params, 0, region=(-1.0, 0.3, -1.5, 1.5), seeds=5,
                       check_winding=False)
    text = spectrum_csv(roots)
    lines = text.strip().split("\n")
    assert lines[0] == "l,re_lambda,im_lambda,residual"
    assert len(lines) == len(roots) + 1
    assert all(len(line.split(",")) == 4 for line in lines[1:])
