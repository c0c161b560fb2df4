"""Degree-1 amplitude/phase reduction and its wave families.

In polar coordinates z_m = r_m exp(i psi_m) the cubic normal form closes
in the three amplitudes and the single phase combination
psi = 2 psi_0 - psi_{-1} - psi_1. Rotating and standing waves appear as
curves of fixed points of the reduced 4D system; their linearization
spectra are available in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_AXIS_TOL = 1e-14


@dataclass
class AmplitudeState:
    """Nonnegative amplitudes (r_{-1}, r_0, r_1) and phase difference psi."""

    r: np.ndarray
    psi: float

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float)
        if self.r.shape != (3,):
            raise ValueError("amplitude vector must have length 3")
        if np.any(self.r < 0):
            raise ValueError("amplitudes must be nonnegative")
        self.psi = float(self.psi) % (2.0 * math.pi)


def amplitude_rhs(state: AmplitudeState, mu: complex, g11: complex,
                  g12: complex) -> np.ndarray:
    """Right-hand side (r'_{-1}, r'_0, r'_1, psi').

    psi' divides by r_{-1} and r_1; on-axis states with r_0 != 0 are
    rejected because the phase difference is undefined there.
    """
    rm1, r0, r1 = state.r
    psi = state.psi
    rmu = mu.real
    a, b, c = g11.real, g12.real, g12.imag
    rho1 = rm1 ** 2 + r0 ** 2 + r1 ** 2
    cp, sp = math.cos(psi), math.sin(psi)
    dr_m1 = (rmu * rm1 + a * rm1 * rho1 + 2 * b * rm1 * r1 ** 2
             - b * r0 ** 2 * r1 * cp + c * r0 ** 2 * r1 * sp)
    dr_0 = (rmu * r0 + a * r0 * rho1 + b * r0 ** 3
            - 2 * b * rm1 * r0 * r1 * cp - 2 * c * rm1 * r0 * r1 * sp)
    dr_1 = (rmu * r1 + a * r1 * rho1 + 2 * b * rm1 ** 2 * r1
            - b * rm1 * r0 ** 2 * cp + c * rm1 * r0 ** 2 * sp)
    if rm1 < _AXIS_TOL or r1 < _AXIS_TOL:
        if r0 > _AXIS_TOL:
            raise ZeroDivisionError(
                "phase difference undefined when r_{+-1}=0 with r_0 != 0")
        dpsi = 0.0
    else:
        ratio = r0 ** 2 * (r1 / rm1 + rm1 / r1)
        dpsi = (-2 * c * (rm1 ** 2 - r0 ** 2 + r1 ** 2)
                + c * (-4 * rm1 * r1 + ratio) * cp
                + b * (4 * rm1 * r1 + ratio) * sp)
    return np.array([dr_m1, dr_0, dr_1, dpsi])


def rho_rhs(rho1: float, rho2: float, mu: complex, g11: complex,
            g12: complex) -> tuple[float, float]:
    """Reduced invariant coordinates rho1 = sum r^2, rho2 = r_0^2 - 2 r_{-1} r_1
    (valid on the psi = 0 slice)."""
    rmu, a, b = mu.real, g11.real, g12.real
    d1 = 2 * rho1 * (rmu + a * rho1) + 2 * b * rho2 ** 2
    d2 = 2 * rho2 * (rmu + (a + b) * rho1)
    return d1, d2


def rotating_wave_family(r1: float, mu: complex, g11: complex,
                         g12: complex) -> AmplitudeState:
    """Point on the rotating-wave fixed-point curve, parametrized by r_1.

    The curve satisfies rho2 = 0 and rho1 = Re(mu)/(-Re(g11)); the radius
    therefore involves g11 (the printed parametrization's g12 in the radius
    does not give fixed points and fails the residual check).
    """
    rmu = mu.real
    if rmu <= 0:
        raise ValueError("need Re(mu) > 0 past the bifurcation")
    if g11.real >= 0:
        raise ValueError("rotating family needs Re(g11) < 0")
    R = math.sqrt(rmu / (-g11.real))
    if not 0.0 <= r1 <= R:
        raise ValueError(f"r1 must lie in [0, {R}]")
    return AmplitudeState(r=np.array([R - r1, math.sqrt(2 * r1 * (R - r1)), r1]),
                          psi=0.0)


def standing_wave_family(r1: float, mu: complex, g11: complex,
                         g12: complex) -> AmplitudeState:
    """Point on the standing-wave fixed-point curve, parametrized by r_1."""
    rmu = mu.real
    if rmu <= 0:
        raise ValueError("need Re(mu) > 0 past the bifurcation")
    s = g11.real + g12.real
    if s >= 0:
        raise ValueError("standing family needs Re(g11) + Re(g12) < 0")
    r1max = math.sqrt(rmu / (-2.0 * s))
    if not 0.0 <= r1 <= r1max:
        raise ValueError(f"r1 must lie in [0, {r1max}]")
    return AmplitudeState(r=np.array([r1, math.sqrt(rmu / (-s) - 2 * r1 ** 2), r1]),
                          psi=math.pi)


def family_spectrum(kind: str, mu: complex, g11: complex,
                    g12: complex) -> np.ndarray:
    """Linearization eigenvalues along a wave family (identical all along it).

    One zero eigenvalue reflects the curve of fixed points.
    """
    rmu = mu.real
    a, b, c = g11.real, g12.real, g12.imag
    if kind == "rotating":
        if abs(a) < 1e-14:
            raise ArithmeticError("degenerate: Re(g11) = 0")
        lam = -2.0 * rmu * b / a
        return np.array([0.0, -2.0 * rmu, lam + 2j * rmu * c / a,
                         lam - 2j * rmu * c / a])
    if kind == "standing":
        if abs(a + b) < 1e-14:
            raise ArithmeticError("degenerate: Re(g11) + Re(g12) = 0")
        lam = 2.0 * rmu * b / (a + b)
        return np.array([0.0, -2.0 * rmu, lam, lam], dtype=complex)
    raise ValueError("kind must be 'rotating' or 'standing'")


def amplitude_jacobian(state: AmplitudeState, mu: complex, g11: complex,
                       g12: complex, step: float = 1e-5) -> np.ndarray:
    """5-point central finite-difference Jacobian of the reduced system."""
    x0 = np.concatenate([state.r, [state.psi]])

    def f(x):
        return amplitude_rhs(AmplitudeState(r=x[:3], psi=x[3]), mu, g11, g12)

    J = np.zeros((4, 4))
    for i in range(4):
        e = np.zeros(4)
        e[i] = 1.0
        J[:, i] = (-f(x0 + 2 * step * e) + 8 * f(x0 + step * e)
                   - 8 * f(x0 - step * e) + f(x0 - 2 * step * e)) / (12 * step)
    return J


def family_csv(mu: complex, g11: complex, g12: complex, samples: int = 50) -> str:
    """CSV of both wave families and their spectra, for plotting."""
    lines = ["family,r1,r_m1,r_0,r_1,psi"]
    rmu = mu.real
    rot_max = math.sqrt(rmu / (-g11.real)) if g11.real < 0 else None
    stand_max = (math.sqrt(rmu / (-2 * (g11.real + g12.real)))
                 if g11.real + g12.real < 0 else None)
    if rot_max:
        for r1 in np.linspace(0.0, rot_max, samples):
            st = rotating_wave_family(float(r1), mu, g11, g12)
            lines.append(f"rotating,{r1:.17g},{st.r[0]:.17g},{st.r[1]:.17g},"
                         f"{st.r[2]:.17g},{st.psi:.17g}")
    if stand_max:
        for r1 in np.linspace(0.0, stand_max, samples):
            st = standing_wave_family(float(r1), mu, g11, g12)
            lines.append(f"standing,{r1:.17g},{st.r[0]:.17g},{st.r[1]:.17g},"
                         f"{st.r[2]:.17g},{st.psi:.17g}")
    lines.append("family,eig1_re,eig1_im,eig2_re,eig2_im,eig3_re,eig3_im,eig4_re,eig4_im")
    for kind in ("rotating", "standing"):
        try:
            ev = family_spectrum(kind, mu, g11, g12)
        except ArithmeticError:
            continue
        flat = ",".join(f"{e.real:.17g},{e.imag:.17g}" for e in ev)
        lines.append(f"{kind},{flat}")
    return "\n".join(lines) + "\n"
