"""Model parameters and pointwise model functions.

Holds the two-population parameter set (decay, diffusion, connectivity
strengths/ranges, delays, firing-rate sigmoid) and the scalar building
blocks: the shifted sigmoid with its analytic derivatives, the
distance-dependent connectivity, the transmission delay, and the combined
delay-weighted kernel matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Full parameter set of the two-population field.

    Connectivity strengths ``eta_xy`` and ranges ``sigma_xy`` are indexed
    target-source: ``eta_ei`` couples inhibitory sources into the
    excitatory population.
    """

    alpha_e: float
    alpha_i: float
    d_e: float
    d_i: float
    eta_ee: float
    eta_ei: float
    eta_ie: float
    eta_ii: float
    sigma_ee: float
    sigma_ei: float
    sigma_ie: float
    sigma_ii: float
    tau0: float
    c: float
    gamma: float
    delta: float

    def __post_init__(self):
        if self.alpha_e <= 0 or self.alpha_i <= 0:
            raise ValueError("decay rates must be positive")
        if self.d_e < 0 or self.d_i < 0:
            raise ValueError("diffusion coefficients must be nonnegative")
        for name in ("sigma_ee", "sigma_ei", "sigma_ie", "sigma_ii"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.tau0 <= 0:
            raise ValueError("fixed delay tau0 must be positive")
        if self.c <= 0:
            raise ValueError("propagation speed must be positive")
        if self.gamma <= 0:
            raise ValueError("sigmoid steepness must be positive")
        if self.delta < 0:
            raise ValueError("sigmoid threshold must be nonnegative")

    @property
    def max_delay(self) -> float:
        """Largest delay: fixed part plus one half great circle."""
        return self.tau0 + math.pi / self.c

    def eta(self) -> np.ndarray:
        return np.array([[self.eta_ee, self.eta_ei],
                         [self.eta_ie, self.eta_ii]])

    def sigma(self) -> np.ndarray:
        return np.array([[self.sigma_ee, self.sigma_ei],
                         [self.sigma_ie, self.sigma_ii]])

    def alpha(self) -> np.ndarray:
        return np.array([self.alpha_e, self.alpha_i])

    def diffusion(self) -> np.ndarray:
        return np.array([self.d_e, self.d_i])

    def replace(self, **kw) -> "ModelParams":
        return replace(self, **kw)


@dataclass(frozen=True)
class PresynapticParams:
    """Connectivity that depends only on the sending population.

    Expands losslessly into a full ModelParams whose eta/sigma columns are
    constant (eta_ee = eta_ie, eta_ei = eta_ii, same for sigma).
    """

    eta_e: float
    eta_i: float
    sigma_e: float
    sigma_i: float

    def expand(self, *, alpha_e: float, alpha_i: float, d_e: float, d_i: float,
               tau0: float, c: float, gamma: float, delta: float) -> ModelParams:
        return ModelParams(
            alpha_e=alpha_e, alpha_i=alpha_i, d_e=d_e, d_i=d_i,
            eta_ee=self.eta_e, eta_ei=self.eta_i,
            eta_ie=self.eta_e, eta_ii=self.eta_i,
            sigma_ee=self.sigma_e, sigma_ei=self.sigma_i,
            sigma_ie=self.sigma_e, sigma_ii=self.sigma_i,
            tau0=tau0, c=c, gamma=gamma, delta=delta)


def sigmoid(params: ModelParams, u):
    """Firing-rate sigmoid shifted so the resting state maps to exactly 0."""
    g, d = params.gamma, params.delta
    u = np.asarray(u, dtype=float)
    shift = 1.0 / (1.0 + np.exp(g * d))
    return 1.0 / (1.0 + np.exp(-g * (u - d))) - shift


def sigmoid_deriv(params: ModelParams, order: int, u):
    """Analytic derivative of the shifted sigmoid, orders 0 through 3.

    Closed forms are used (not finite differences) because the
    normal-form coefficients need the derivatives at u = 0 exactly.
    """
    if order not in (0, 1, 2, 3):
        raise ValueError("order must be in 0..3")
    if order == 0:
        return sigmoid(params, u)
    g = params.gamma
    u = np.asarray(u, dtype=float)
    f = 1.0 / (1.0 + np.exp(-g * (u - params.delta)))
    if order == 1:
        return g * f * (1.0 - f)
    if order == 2:
        return g ** 2 * f * (1.0 - f) * (1.0 - 2.0 * f)
    return g ** 3 * f * (1.0 - f) * (1.0 - 6.0 * f + 6.0 * f ** 2)


def connectivity(params: ModelParams, s):
    """Connectivity matrix J(s) for cos(distance) = s, entrywise 2x2."""
    theta = _arc(s)
    eta = params.eta()
    sig = params.sigma()
    return eta * np.exp(-theta / sig)


def delay(params: ModelParams, s):
    """Transmission delay for cos(distance) = s."""
    return params.tau0 + _arc(s) / params.c


def kernel_matrix(params: ModelParams, s, z) -> np.ndarray:
    """Delay-weighted connectivity g(s, z) = exp(-z tau(s)) J(s), 2x2."""
    theta = _arc(s)
    eta = params.eta()
    sig = params.sigma()
    tau = params.tau0 + theta / params.c
    return eta * np.exp(-theta / sig) * np.exp(-z * tau)


def _arc(s):
    """arccos with clamping for values within 1e-12 of the domain boundary."""
    s = np.asarray(s, dtype=float)
    if np.any(np.abs(s) > 1.0 + _CLAMP_TOL):
        raise ValueError("cosine argument outside [-1, 1]")
    return np.arccos(np.clip(s, -1.0, 1.0))
