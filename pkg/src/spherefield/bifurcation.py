"""Fold and Hopf bifurcation curves in the connectivity-strength plane.

Under the presynaptic simplification the characteristic determinant is
affine in the two strengths (eta_e, eta_i), so fold points solve a linear
equation and Hopf points a real 2x2 linear system parametrized by the
frequency omega.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from spherefield.harmonics import QuadratureRule, default_rule
from spherefield.kernels import ModelParams, PresynapticParams, sigmoid_deriv
from spherefield.linear import char_det, find_roots


@dataclass(frozen=True)
class FixedParams:
    """Everything except the two bifurcation parameters (eta_e, eta_i)."""

    alpha_e: float = 1.0
    alpha_i: float = 1.0
    d_e: float = 0.0
    d_i: float = 0.0
    sigma_e: float = 2.0 / 9.0
    sigma_i: float = 1.0 / 6.0
    tau0: float = 3.0
    c: float = 0.8
    gamma: float = 8.0
    delta: float = 0.0

    def with_etas(self, eta_e: float, eta_i: float) -> ModelParams:
        return PresynapticParams(eta_e, eta_i, self.sigma_e, self.sigma_i).expand(
            alpha_e=self.alpha_e, alpha_i=self.alpha_i, d_e=self.d_e, d_i=self.d_i,
            tau0=self.tau0, c=self.c, gamma=self.gamma, delta=self.delta)


@dataclass
class HopfPoint:
    l: int
    omega: float
    eta_e: float
    eta_i: float
    fixed: FixedParams

    @property
    def params(self) -> ModelParams:
        return self.fixed.with_etas(self.eta_e, self.eta_i)


@dataclass
class BifurcationDiagram:
    """Fold and Hopf curves: list of dicts with kind, l and point arrays."""

    curves: list = field(default_factory=list)


def _unit_transfers(fixed: FixedParams, l: int, z, rule=None):
    """Per-population strength-stripped transfers (include the sigmoid slope)."""
    rule = rule or default_rule()
    probe = fixed.with_etas(1.0, 1.0)
    s1 = float(sigmoid_deriv(probe, 1, 0.0))
    pl = rule.legendre_values(l)[l]
    theta = np.arccos(np.clip(rule.nodes, -1.0, 1.0))
    tau = probe.tau0 + theta / probe.c
    z = np.asarray(z, dtype=complex)
    base = np.exp(-z[..., None] * tau) * (rule.weights * pl)
    ge = s1 * 2.0 * np.pi * np.sum(base * np.exp(-theta / fixed.sigma_e), axis=-1)
    gi = s1 * 2.0 * np.pi * np.sum(base * np.exp(-theta / fixed.sigma_i), axis=-1)
    return ge, gi


def fold_curve(fixed: FixedParams, l: int, eta_e_grid) -> dict:
    """Strengths solving det = 0 at rate zero, affine in eta_e.

    Grid points where the eta_i coefficient (nearly) vanishes are skipped.
    """
    ge, gi = _unit_transfers(fixed, l, np.asarray(0.0 + 0.0j))
    ge, gi = float(ge.real), float(gi.real)
    ae = fixed.alpha_e + l * (l + 1) * fixed.d_e
    ai = fixed.alpha_i + l * (l + 1) * fixed.d_i
    A = ae * ai
    B = ai * ge
    C = ae * gi
    pts = []
    for ee in np.asarray(eta_e_grid, dtype=float):
        if abs(C) < 1e-14:
            continue
        pts.append((float(ee), (A - ee * B) / C, 0.0))
    return {"kind": "fold", "l": l, "points": np.array(pts).reshape(-1, 3)}


def hopf_point(fixed: FixedParams, l: int, omega: float,
               rule: QuadratureRule | None = None) -> HopfPoint:
    """Strengths placing an eigenvalue pair at +/- i*omega at degree l.

    Splitting the determinant into real and imaginary parts gives a real
    2x2 linear system in (eta_e, eta_i).
    """
    if omega == 0:
        raise ValueError("omega must be nonzero; use fold_curve for rate zero")
    ge, gi = _unit_transfers(fixed, l, np.asarray(1j * omega), rule)
    ce = 1j * omega + fixed.alpha_e + l * (l + 1) * fixed.d_e
    ci = 1j * omega + fixed.alpha_i + l * (l + 1) * fixed.d_i
    A = np.array([[(ci * ge).real, (ce * gi).real],
                  [(ci * ge).imag, (ce * gi).imag]])
    b = np.array([(ce * ci).real, (ce * ci).imag])
    if abs(np.linalg.det(A)) < 1e-14 * max(1.0, np.abs(A).max() ** 2):
        raise ArithmeticError(f"Hopf system singular at omega={omega}")
    ee, ei = np.linalg.solve(A, b)
    return HopfPoint(l=l, omega=float(abs(omega)), eta_e=float(ee),
                     eta_i=float(ei), fixed=fixed)


def hopf_points_at_eta_e(fixed: FixedParams, l: int, eta_e: float,
                         omega_range=(0.05, 3.0), samples: int = 400,
                         rule: QuadratureRule | None = None) -> list[HopfPoint]:
    """All Hopf points with the given eta_e, found along the omega-curve."""
    lo, hi = omega_range
    oms = np.linspace(lo, hi, samples)
    vals = []
    for om in oms:
        try:
            vals.append(hopf_point(fixed, l, om, rule).eta_e - eta_e)
        except ArithmeticError:
            vals.append(np.nan)
    out = []
    for i in range(len(oms) - 1):
        a, b = vals[i], vals[i + 1]
        if np.isnan(a) or np.isnan(b) or a * b > 0:
            continue
        om = brentq(lambda o: hopf_point(fixed, l, o, rule).eta_e - eta_e,
                    oms[i], oms[i + 1], xtol=1e-13)
        out.append(hopf_point(fixed, l, om, rule))
    return out


def trace_diagram(fixed: FixedParams, l_max: int, omega_grid=None,
                  eta_e_grid=None, window=(0.0, 8.0, -16.0, 0.0),
                  rule: QuadratureRule | None = None) -> BifurcationDiagram:
    """Fold and Hopf curves for degrees 0..l_max, clipped to the window."""
    if omega_grid is None:
        omega_grid = np.linspace(0.05, 3.0, 400)
    if eta_e_grid is None:
        eta_e_grid = np.linspace(window[0], window[1], 200)
    diagram = BifurcationDiagram()
    e0, e1, i0, i1 = window
    for l in range(l_max + 1):
        fc = fold_curve(fixed, l, eta_e_grid)
        if len(fc["points"]):
            mask = (fc["points"][:, 1] >= i0 - 1e-9) & (fc["points"][:, 1] <= i1 + 1e-9)
            fc["points"] = fc["points"][mask]
        diagram.curves.append(fc)
        pts = []
        for om in omega_grid:
            try:
                hp = hopf_point(fixed, l, float(om), rule)
            except ArithmeticError:
                continue
            if e0 - 1e-9 <= hp.eta_e <= e1 + 1e-9 and i0 - 1e-9 <= hp.eta_i <= i1 + 1e-9:
                pts.append((hp.eta_e, hp.eta_i, hp.omega))
        diagram.curves.append({"kind": "hopf", "l": l,
                               "points": np.array(pts).reshape(-1, 3)})
    return diagram


def stability_grid(fixed: FixedParams, l_max: int,
                   window=(0.0, 8.0, -16.0, 0.0), resolution: int = 40,
                   search_region=(-0.05, 1.0, 0.0, 3.0),
                   rule: QuadratureRule | None = None):
    """Sampled map of where the trivial state is stable inside the window.

    At each grid sample the right half-plane is searched for determinant
    roots over all degrees up to l_max; a sample is stable when none are
    found. Resolution is configurable; this reconstruction is only as fine
    as its grid.
    """
    e0, e1, i0, i1 = window
    ee = np.linspace(e0, e1, resolution)
    ei = np.linspace(i0, i1, resolution)
    stable = np.ones((resolution, resolution), dtype=bool)
    for a, x in enumerate(ee):
        for b, y in enumerate(ei):
            params = fixed.with_etas(float(x), float(y))
            for l in range(l_max + 1):
                roots = find_roots(params, l, region=search_region, seeds=5,
                                   rule=rule, check_winding=False)
                if any(r.lam.real > 1e-9 for r in roots):
                    stable[a, b] = False
                    break
    return ee, ei, stable


def diagram_csv(diagram: BifurcationDiagram) -> str:
    """CSV dump: columns kind, l, eta_e, eta_i, omega."""
    lines = ["kind,l,eta_e,eta_i,omega"]
    for curve in diagram.curves:
        for ee, ei, om in curve["points"]:
            lines.append(f"{curve['kind']},{curve['l']},"
                         f"{ee:.17g},{ei:.17g},{om:.17g}")
    return "\n".join(lines) + "\n"


def hopf_residual(point: HopfPoint, rule: QuadratureRule | None = None) -> float:
    """|det| at the assembled parameters; small value certifies the point."""
    return float(abs(char_det(point.params, point.l,
                              np.asarray(1j * point.omega), rule)))


def curve_omega_monotone_window(fixed: FixedParams, l: int, window,
                                omega_range=(0.05, 3.0), coarse: int = 200,
                                refine_factor: int = 4,
                                rule: QuadratureRule | None = None) -> np.ndarray:
    """Hopf curve samples, refined where the curve crosses the window edge."""
    e0, e1, i0, i1 = window
    oms = list(np.linspace(omega_range[0], omega_range[1], coarse))

    def inside(hp):
        return e0 <= hp.eta_e <= e1 and i0 <= hp.eta_i <= i1

    pts = []
    prev = None
    for om in oms:
        try:
            hp = hopf_point(fixed, l, float(om), rule)
        except ArithmeticError:
            prev = None
            continue
        if prev is not None and inside(prev) != inside(hp):
            extra = np.linspace(prev.omega, hp.omega, refine_factor + 2)[1:-1]
            for om2 in extra:
                try:
                    hp2 = hopf_point(fixed, l, float(om2), rule)
                except ArithmeticError:
                    continue
                if inside(hp2):
                    pts.append((hp2.eta_e, hp2.eta_i, hp2.omega))
        if inside(hp):
            pts.append((hp.eta_e, hp.eta_i, hp.omega))
        prev = hp
    pts.sort(key=lambda p: p[2])
    return np.array(pts).reshape(-1, 3)
