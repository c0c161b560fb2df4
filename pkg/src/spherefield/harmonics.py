"""Legendre polynomials, spherical harmonics, and spectral kernel transfers.

The delayed connectivity acts diagonally on spherical harmonics; its
spectral transfer per degree l is a 2x2 matrix obtained by projecting the
delay-weighted kernel onto the Legendre polynomial of that degree. This
module provides the quadrature rules and the transfer (plus its
z-derivative, differentiated under the integral).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

import spherefield.kernels as kernels
from spherefield.kernels import ModelParams

DEFAULT_NODES = 128


def legendre(l: int, s):
    """Legendre polynomial P_l(s) by the three-term recurrence; P_l(1) = 1."""
    if l < 0:
        raise ValueError("degree must be nonnegative")
    s = np.asarray(s, dtype=float)
    if np.any(np.abs(s) > 1.0 + 1e-12):
        raise ValueError("argument outside [-1, 1]")
    return legendre_table(l, s)[l]


def legendre_table(lmax: int, s) -> np.ndarray:
    """All P_0..P_lmax at the given points, stacked along axis 0."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.empty((lmax + 1,) + s.shape)
    out[0] = 1.0
    if lmax >= 1:
        out[1] = s
    for l in range(1, lmax):
        out[l + 1] = ((2 * l + 1) * s * out[l] - l * out[l - 1]) / (l + 1)
    return out


def _norm_assoc_legendre(l: int, m: int, x: np.ndarray) -> np.ndarray:
    """Fully normalized associated Legendre, Condon-Shortley phase included.

    Normalized so that Y_l^m = N_l^m(x) e^{i m phi} is orthonormal on the
    sphere. Stable recurrence in l at fixed m.
    """
    x = np.asarray(x, dtype=float)
    sint = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    # seed: N_m^m
    pmm = np.full_like(x, 1.0 / np.sqrt(4.0 * np.pi))
    for k in range(1, m + 1):
        pmm = -np.sqrt((2 * k + 1) / (2.0 * k)) * sint * pmm
    if l == m:
        return pmm
    pm1 = np.sqrt(2 * m + 3.0) * x * pmm
    if l == m + 1:
        return pm1
    for ll in range(m + 2, l + 1):
        a = np.sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m))
        b = np.sqrt(((ll - 1.0) ** 2 - m * m) / (4.0 * (ll - 1.0) ** 2 - 1.0))
        pmm, pm1 = pm1, a * (x * pm1 - b * pmm)
    return pm1


def sph_harm(l: int, m: int, theta, phi):
    """Orthonormal complex spherical harmonic Y_l^m(theta, phi)."""
    if abs(m) > l:
        raise IndexError("order |m| exceeds degree l")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    am = abs(m)
    base = _norm_assoc_legendre(l, am, np.cos(theta)) * np.exp(1j * am * phi)
    if m >= 0:
        return base
    return (-1.0) ** am * np.conj(base)


def sph_harm_points(l: int, m: int, points: np.ndarray):
    """Y_l^m sampled at unit 3-vectors (rows of ``points``)."""
    points = np.asarray(points, dtype=float)
    theta = np.arccos(np.clip(points[..., 2], -1.0, 1.0))
    phi = np.arctan2(points[..., 1], points[..., 0])
    return sph_harm(l, m, theta, phi)


@dataclass
class QuadratureRule:
    """Nodes/weights for integrals of f(s) over s in [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    _legendre_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")

    def __len__(self):
        return len(self.nodes)

    def legendre_values(self, lmax: int) -> np.ndarray:
        """Cached table of P_0..P_lmax at the nodes."""
        have = self._legendre_cache.get("lmax", -1)
        if have < lmax:
            self._legendre_cache["table"] = legendre_table(lmax, self.nodes)
            self._legendre_cache["lmax"] = lmax
        return self._legendre_cache["table"][: lmax + 1]


def gauss_legendre_rule(n: int) -> QuadratureRule:
    """Plain Gauss-Legendre rule on [-1, 1]."""
    x, w = leggauss(n)
    return QuadratureRule(x, w)


def kernel_rule(n: int = DEFAULT_NODES) -> QuadratureRule:
    """Quadrature for the kernel transfers, built in the arc variable.

    Substituting s = cos(theta) turns the integrand's square-root endpoint
    behaviour into an entire function of theta, so Gauss-Legendre in theta
    converges at machine precision with the default node count. Expressed
    back in s the rule has nodes cos(theta_k) and weights w_k sin(theta_k),
    which still sum to 2.
    """
    x, w = leggauss(n)
    theta = (x + 1.0) * (np.pi / 2.0)
    nodes = np.cos(theta)[::-1]
    weights = (w * (np.pi / 2.0) * np.sin(theta))[::-1]
    return QuadratureRule(nodes, weights)


@dataclass
class HarmonicKernel:
    """Spectral transfer of the delayed connectivity at degree l.

    ``transfer`` is the 2x2 matrix of Legendre-projected kernel entries at
    the complex rate z; ``transfer_prime`` its derivative in z.
    """

    l: int
    z: complex
    transfer: np.ndarray
    transfer_prime: np.ndarray


_DEFAULT_RULE: QuadratureRule | None = None


def default_rule() -> QuadratureRule:
    global _DEFAULT_RULE
    if _DEFAULT_RULE is None:
        _DEFAULT_RULE = kernel_rule()
    return _DEFAULT_RULE


def transfer_entries(params: ModelParams, l: int, z, rule: QuadratureRule | None = None,
                     derivative: bool = False) -> np.ndarray:
    """Kernel transfer entries, vectorized over z.

    Returns shape (2, 2) + z.shape. With ``derivative`` the integrand picks
    up the factor -tau(s), giving the z-derivative exactly.
    """
    if l < 0:
        raise ValueError("degree must be nonnegative")
    rule = rule or default_rule()
    z = np.asarray(z, dtype=complex)
    pl = rule.legendre_values(l)[l]
    theta = np.arccos(np.clip(rule.nodes, -1.0, 1.0))
    tau = params.tau0 + theta / params.c
    eta = params.eta()
    sig = params.sigma()
    zt = z[..., None]
    base = np.exp(-zt * tau) * (rule.weights * pl)
    if derivative:
        base = base * (-tau)
    out = np.empty((2, 2) + z.shape, dtype=complex)
    for a in range(2):
        for b in range(2):
            radial = np.exp(-theta / sig[a, b])
            out[a, b] = 2.0 * np.pi * eta[a, b] * np.sum(base * radial, axis=-1)
    return out


def compute_transfer(params: ModelParams, l: int, z: complex,
                     rule: QuadratureRule | None = None) -> HarmonicKernel:
    """Spectral transfer and its z-derivative at a single rate z."""
    zz = np.asarray(complex(z))
    G = transfer_entries(params, l, zz, rule)
    Gp = transfer_entries(params, l, zz, rule, derivative=True)
    return HarmonicKernel(l=l, z=complex(z), transfer=G.reshape(2, 2),
                          transfer_prime=Gp.reshape(2, 2))
