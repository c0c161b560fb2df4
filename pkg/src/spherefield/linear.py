"""Spectral linearization around the trivial equilibrium.

Per harmonic degree l the linearization reduces to a 2x2 characteristic
matrix whose determinant's roots are the eigenvalues in that degree's
subspace. Provides the matrix, its determinant and derivative, a
grid-seeded Newton root finder with an argument-principle cross-check,
null vectors, and the resolvent building block used by the normal-form
coefficient formulas.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from spherefield.harmonics import QuadratureRule, default_rule, transfer_entries
from spherefield.kernels import ModelParams, sigmoid_deriv


class ResonanceError(RuntimeError):
    """A resolvent or eigenvector was requested at a (near-)singular point."""


@dataclass
class SpectralMatrix:
    """Characteristic 2x2 matrix at degree l and rate z with derived data."""

    l: int
    z: complex
    matrix: np.ndarray
    det: complex
    det_prime: complex
    adjugate: np.ndarray


@dataclass
class EigenSolution:
    """Critical eigendata at degree l: rate, frequency, unit null vector."""

    l: int
    lam: complex
    omega: float
    v: np.ndarray
    residual: float

    @property
    def multiplicity(self) -> int:
        """Geometric multiplicity across orders m = -l..l."""
        return 2 * self.l + 1


def _char_entries(params: ModelParams, l: int, z, rule=None, derivative=False):
    """Characteristic matrix entries (or their z-derivative), vectorized."""
    z = np.asarray(z, dtype=complex)
    s1 = float(sigmoid_deriv(params, 1, 0.0))
    G = transfer_entries(params, l, z, rule, derivative=derivative)
    ll1 = l * (l + 1)
    out = -s1 * G
    if derivative:
        out[0, 0] += 1.0
        out[1, 1] += 1.0
    else:
        out[0, 0] += z + params.alpha_e + ll1 * params.d_e
        out[1, 1] += z + params.alpha_i + ll1 * params.d_i
    return out


def char_det(params: ModelParams, l: int, z, rule=None):
    """Determinant of the characteristic matrix, vectorized over z."""
    E = _char_entries(params, l, z, rule)
    return E[0, 0] * E[1, 1] - E[0, 1] * E[1, 0]


def char_det_prime(params: ModelParams, l: int, z, rule=None):
    """z-derivative of the characteristic determinant (product rule)."""
    E = _char_entries(params, l, z, rule)
    Ep = _char_entries(params, l, z, rule, derivative=True)
    return (Ep[0, 0] * E[1, 1] + E[0, 0] * Ep[1, 1]
            - Ep[0, 1] * E[1, 0] - E[0, 1] * Ep[1, 0])


def spectral_matrix(params: ModelParams, l: int, z: complex,
                    rule: QuadratureRule | None = None) -> SpectralMatrix:
    zz = np.asarray(complex(z))
    E = _char_entries(params, l, zz, rule).reshape(2, 2)
    Ep = _char_entries(params, l, zz, rule, derivative=True).reshape(2, 2)
    det = E[0, 0] * E[1, 1] - E[0, 1] * E[1, 0]
    det_prime = (Ep[0, 0] * E[1, 1] + E[0, 0] * Ep[1, 1]
                 - Ep[0, 1] * E[1, 0] - E[0, 1] * Ep[1, 0])
    adj = np.array([[E[1, 1], -E[0, 1]], [-E[1, 0], E[0, 0]]])
    return SpectralMatrix(l=l, z=complex(z), matrix=E, det=complex(det),
                          det_prime=complex(det_prime), adjugate=adj)


def eigenvector(params: ModelParams, l: int, lam: complex,
                rule: QuadratureRule | None = None) -> np.ndarray:
    """Unit null vector of the characteristic matrix at an eigenvalue.

    Phase convention: the largest-magnitude component is made real and
    positive. All downstream normal-form coefficients are invariant under
    this choice.
    """
    sm = spectral_matrix(params, l, lam, rule)
    if abs(sm.det) > 1e-8:
        raise ResonanceError(
            f"characteristic matrix not singular at z={lam} (|det|={abs(sm.det):.2e})")
    _, s, vh = np.linalg.svd(sm.matrix)
    v = vh[-1].conj()
    v = v / np.linalg.norm(v)
    i = int(np.argmax(np.abs(v)))
    v = v * np.exp(-1j * np.angle(v[i]))
    return v


def critical_eigensolution(params: ModelParams, l: int, omega: float,
                           rule: QuadratureRule | None = None,
                           refine: bool = True,
                           imag_tol: float = 1e-8) -> EigenSolution:
    """EigenSolution for a purely imaginary eigenvalue near i*omega.

    The supplied frequency is Newton-refined to the nearby determinant
    root; if that root strays off the imaginary axis by more than
    ``imag_tol`` the parameters are not at criticality and a
    ResonanceError is raised.
    """
    lam = 1j * float(omega)
    if refine:
        for _ in range(60):
            f = complex(char_det(params, l, np.asarray(lam), rule))
            if abs(f) < 1e-13:
                break
            fp = complex(char_det_prime(params, l, np.asarray(lam), rule))
            if abs(fp) < 1e-14:
                raise ResonanceError("determinant derivative vanished during refinement")
            lam = lam - f / fp
        if abs(lam.real) > imag_tol:
            raise ResonanceError(
                f"nearest eigenvalue {lam} is not on the imaginary axis")
        lam = 1j * lam.imag
    v = eigenvector(params, l, lam, rule)
    E = spectral_matrix(params, l, lam, rule).matrix
    res = float(np.linalg.norm(E @ v))
    return EigenSolution(l=l, lam=lam, omega=float(lam.imag), v=v, residual=res)


def resolvent_factor(params: ModelParams, l: int, z: complex,
                     rule: QuadratureRule | None = None) -> np.ndarray:
    """Resolvent building block: inverse characteristic matrix times transfer.

    Raises ResonanceError when z is (numerically) an eigenvalue, where the
    formula is invalid.
    """
    sm = spectral_matrix(params, l, z, rule)
    if abs(sm.det) <= 1e-12:
        raise ResonanceError(f"rate z={z} is an eigenvalue at degree {l}")
    G = transfer_entries(params, l, np.asarray(complex(z)), rule).reshape(2, 2)
    return (sm.adjugate @ G) / sm.det


def winding_number(params: ModelParams, l: int, region, rule=None,
                   samples_per_side: int = 400, max_doublings: int = 4) -> int:
    """Number of determinant roots inside a rectangle, by phase winding.

    ``region`` is (re_min, re_max, im_min, im_max). Sampling is doubled
    until adjacent phase increments stay below pi/2.
    """
    re0, re1, im0, im1 = region
    n = samples_per_side
    for _ in range(max_doublings + 1):
        t = np.linspace(0.0, 1.0, n, endpoint=False)
        bottom = re0 + (re1 - re0) * t + 1j * im0
        right = re1 + 1j * (im0 + (im1 - im0) * t)
        top = re1 - (re1 - re0) * t + 1j * im1
        left = re0 + 1j * (im1 - (im1 - im0) * t)
        path = np.concatenate([bottom, right, top, left])
        vals = char_det(params, l, path, rule)
        ang = np.angle(vals)
        d = np.diff(np.concatenate([ang, ang[:1]]))
        d = (d + np.pi) % (2 * np.pi) - np.pi
        if np.max(np.abs(d)) < np.pi / 2:
            return int(np.round(d.sum() / (2 * np.pi)))
        n *= 2
    return int(np.round(d.sum() / (2 * np.pi)))


def find_roots(params: ModelParams, l: int,
               region=(-2.0, 0.5, -3.0, 3.0),
               seeds: int = 8,
               rule: QuadratureRule | None = None,
               newton_steps: int = 60,
               dedup_tol: float = 1e-8,
               target: float = 1e-12,
               check_winding: bool = True) -> list[EigenSolution]:
    """All determinant roots in a rectangle, by grid-seeded Newton iteration.

    Every seed iterates simultaneously (vectorized); converged values are
    deduplicated (sorted first, so the result is deterministic), refined
    roots outside the rectangle are dropped, and the count is cross-checked
    against the boundary winding number.
    """
    rule = rule or default_rule()
    re0, re1, im0, im1 = region
    if seeds < 1:
        raise ValueError("seed density must be >= 1")
    xs = np.linspace(re0, re1, seeds)
    ys = np.linspace(im0, im1, seeds)
    z = (xs[:, None] + 1j * ys[None, :]).ravel()
    alive = np.ones(len(z), dtype=bool)
    done = np.zeros(len(z), dtype=bool)
    for _ in range(newton_steps):
        active = alive & ~done
        if not active.any():
            break
        f = char_det(params, l, z[active], rule)
        fp = char_det_prime(params, l, z[active], rule)
        converged = np.abs(f) < target
        ok = np.isfinite(f) & np.isfinite(fp) & (np.abs(fp) > 1e-14)
        with np.errstate(all="ignore"):
            step = np.where(ok & ~converged, f / np.where(ok, fp, 1.0), 0.0)
            mag = np.abs(step)
            step = np.where(mag > 1.0, step / np.where(mag > 0, mag, 1.0), step)
        z[active] = z[active] - step
        drift = np.abs(z[active].real - np.clip(z[active].real, re0 - 1, re1 + 1)) \
            + np.abs(z[active].imag - np.clip(z[active].imag, im0 - 1, im1 + 1))
        sub = active.nonzero()[0]
        done[sub[converged]] = True
        alive[sub[(~ok & ~converged) | (drift > 0)]] = False
    with np.errstate(all="ignore"):
        f = np.abs(char_det(params, l, z, rule))
    good = alive & np.isfinite(f) & (f < target) \
        & (z.real >= re0 - 1e-9) & (z.real <= re1 + 1e-9) \
        & (z.imag >= im0 - 1e-9) & (z.imag <= im1 + 1e-9)
    roots = z[good]
    order = np.lexsort((roots.imag, roots.real))
    roots = roots[order]
    unique: list[complex] = []
    for r in roots:
        if not unique or all(abs(r - u) > dedup_tol for u in unique):
            unique.append(complex(r))
    if check_winding:
        expect = winding_number(params, l, region, rule)
        if expect != len(unique):
            warnings.warn(
                f"degree {l}: found {len(unique)} roots but winding number "
                f"is {expect} in {region}", RuntimeWarning, stacklevel=2)
    out = []
    for r in unique:
        v = eigenvector(params, l, r, rule)
        E = spectral_matrix(params, l, r, rule).matrix
        out.append(EigenSolution(l=l, lam=r, omega=float(r.imag), v=v,
                                 residual=float(np.linalg.norm(E @ v))))
    return out


def spectrum_csv(solutions: list[EigenSolution]) -> str:
    """CSV dump: columns l, re_lambda, im_lambda, residual."""
    lines = ["l,re_lambda,im_lambda,residual"]
    for s in solutions:
        lines.append(f"{s.l},{s.lam.real:.17g},{s.lam.imag:.17g},{s.residual:.17g}")
    return "\n".join(lines) + "\n"
