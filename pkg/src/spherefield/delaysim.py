"""Full nonlinear time integration of the delayed field on the mesh.

The nonlocal term is discretized by centroid quadrature; history lookups
become sparse matrix products against spline-basis matrices (cubic Hermite
away from the newest interval, quadratic on it, where the current
derivative is not yet known). Time stepping is the
modified Crank-Nicolson/Adams-Bashforth IMEX scheme: diffusion implicit,
delayed reaction explicit, bootstrapped by one implicit-Euler step.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from spherefield import _accel
from spherefield.kernels import ModelParams, sigmoid, sigmoid_deriv
from spherefield.mesh import SphereMesh, build_mesh, discrete_laplacian
from spherefield.harmonics import sph_harm_points

CHECKPOINT_MAGIC = b"NFSPH1"


class SimulationUnstable(RuntimeError):
    """The trajectory blew past the instability bound."""


# --------------------------------------------------------------------------
# spline bases
# --------------------------------------------------------------------------

@dataclass
class SplineBases:
    """Hermite/quadratic history basis functions for a fixed time step.

    ``p3``/``q3`` are the cubic Hermite value/derivative bases supported on
    (-dt, dt); ``p30``/``p31``/``q31`` the quadratic bases used on the
    newest interval, where only one derivative sample exists. The
    interpolant is sum(p * values) - sum(q * derivatives).
    """

    dt: float

    def p3(self, s):
        u = np.abs(np.asarray(s, dtype=float)) / self.dt
        return np.where(u < 1.0, 2.0 * u ** 3 - 3.0 * u ** 2 + 1.0, 0.0)

    def q3(self, s):
        s = np.asarray(s, dtype=float)
        u = np.abs(s) / self.dt
        return np.where(u < 1.0, s * (1.0 - u) ** 2, 0.0)

    def p30(self, s):
        s = np.asarray(s, dtype=float)
        u = s / self.dt
        return np.where((0.0 <= u) & (u < 1.0), (1.0 - u) ** 2, 0.0)

    def p31(self, s):
        s = np.asarray(s, dtype=float)
        u = s / self.dt
        quad = 1.0 - u ** 2
        return np.where((-1.0 <= u) & (u < 0.0), quad,
                        np.where((0.0 <= u) & (u < 1.0), self.p3(s), 0.0))

    def q31(self, s):
        # on [-dt, 0) the quadratic fit through (u_i, u_{i-1}, du_{i-1})
        # requires s*(1 - |s|/dt); the cubic branch applies on [0, dt)
        s = np.asarray(s, dtype=float)
        u = s / self.dt
        quad = s * (1.0 - np.abs(u))
        return np.where((-1.0 <= u) & (u < 0.0), quad,
                        np.where((0.0 <= u) & (u < 1.0), self.q3(s), 0.0))

    def value_row(self, tau: float, k: int) -> np.ndarray:
        """Weights of the k+1 value frames for a lookback of tau."""
        ell = np.arange(k + 1)
        row = np.empty(k + 1)
        row[0] = self.p30(tau)
        if k >= 1:
            row[1] = self.p31(tau - self.dt)
            row[2:] = self.p3(tau - ell[2:] * self.dt)
        return row

    def deriv_row(self, tau: float, k: int) -> np.ndarray:
        """Weights of the k derivative frames (lags dt..k*dt)."""
        ell = np.arange(1, k + 1)
        row = np.empty(k)
        if k >= 1:
            row[0] = self.q31(tau - self.dt)
            row[1:] = self.q3(tau - ell[1:] * self.dt)
        return row


def spline_eval(bases: SplineBases, tau: float, frame_values, frame_derivs):
    """History value at lookback tau from stored frames.

    ``frame_values[l]`` holds the value at lag l*dt (l = 0..k);
    ``frame_derivs[l-1]`` the derivative at lag l*dt (l = 1..k).
    """
    frame_values = np.asarray(frame_values, dtype=float)
    frame_derivs = np.asarray(frame_derivs, dtype=float)
    k = len(frame_values) - 1
    if len(frame_derivs) != k:
        raise ValueError("need one fewer derivative frame than value frames")
    if not 0.0 <= tau <= k * bases.dt + 1e-12:
        raise ValueError("lookback outside the stored history")
    return (bases.value_row(tau, k) @ frame_values
            - bases.deriv_row(tau, k) @ frame_derivs)


# --------------------------------------------------------------------------
# delay matrices
# --------------------------------------------------------------------------

@dataclass
class DelayMatrices:
    """Spline-basis delay matrices for one connectivity kernel.

    ``P`` is m x m(k+1) against stacked value frames, ``Q`` is m x mk
    against stacked derivative frames; stacking is source-major (each
    source contributes a contiguous block of history slots). ``offset``
    shifts all lookbacks (used when stepping finer than the spline grid).
    """

    P: sp.csr_matrix
    Q: sp.csr_matrix
    k: int
    dt: float
    eta: float
    sigma: float
    offset: float = 0.0


def history_depth(params: ModelParams, dt: float) -> int:
    """Smallest frame count whose span covers the maximal delay."""
    return int(math.ceil(params.max_delay / dt - 1e-12))


def assemble_delay_matrices(mesh: SphereMesh, params: ModelParams,
                            kernel: tuple[str, str] | tuple[float, float],
                            dt: float, offset: float = 0.0,
                            use_numba: bool | None = None) -> DelayMatrices:
    """Build the P/Q pair for one connectivity kernel.

    ``kernel`` selects the (target, source) population pair, e.g.
    ("e", "i"), or passes (eta, sigma) directly.
    """
    if dt <= 0:
        raise ValueError("time step must be positive")
    if isinstance(kernel[0], str):
        idx = {"e": 0, "i": 1}
        a, b = idx[kernel[0]], idx[kernel[1]]
        eta = float(params.eta()[a, b])
        sigma = float(params.sigma()[a, b])
    else:
        eta, sigma = float(kernel[0]), float(kernel[1])
    k = history_depth(params, dt)
    if offset and params.tau0 - offset <= 0:
        raise ValueError("offset exceeds the fixed delay")
    m = mesh.m
    p_data, p_col, q_data, q_col = _accel.fill_pq(
        mesh.centroids, mesh.areas, eta, sigma, params.tau0 - offset,
        params.c, dt, k, use_numba=use_numba)
    indptr = 2 * m * np.arange(m + 1, dtype=np.int64)
    P = sp.csr_matrix((p_data, p_col, indptr), shape=(m, m * (k + 1)))
    Q = sp.csr_matrix((q_data, q_col, indptr.copy()), shape=(m, m * k))
    for M in (P, Q):
        M.eliminate_zeros()
        M.sum_duplicates()
    return DelayMatrices(P=P, Q=Q, k=k, dt=dt, eta=eta, sigma=sigma,
                         offset=offset)


# --------------------------------------------------------------------------
# history buffer
# --------------------------------------------------------------------------

class HistoryBuffer:
    """Value and derivative frames for both populations on the spline grid.

    Frame l holds the state at (current node) - l*dt_spline. The newest
    node's derivative is kept outside until the node retires, matching the
    interpolation's quadratic branch.
    """

    def __init__(self, k: int, m: int, params: ModelParams):
        self.k = k
        self.m = m
        self.params = params
        self.values = np.zeros((2, k + 1, m))
        self.derivs = np.zeros((2, k, m))
        self.svalues = np.zeros((2, k + 1, m))
        self.sderivs = np.zeros((2, k, m))
        self.index = 0

    def seed(self, value_fn, deriv_fn, dt: float):
        """Fill all frames from analytic initial functions of time."""
        for ell in range(self.k + 1):
            t = -ell * dt
            u = value_fn(t)
            self.values[:, ell] = u
            self.svalues[:, ell] = sigmoid(self.params, u)
            if ell >= 1:
                du = deriv_fn(t)
                self.derivs[:, ell - 1] = du
                self.sderivs[:, ell - 1] = sigmoid_deriv(self.params, 1, u) * du
        self.index = 0

    def push(self, new_values: np.ndarray, prev_node_deriv: np.ndarray):
        """Advance one node: new values enter, the previous node's
        derivative becomes frame 1."""
        self.values = np.roll(self.values, 1, axis=1)
        self.values[:, 0] = new_values
        self.svalues = np.roll(self.svalues, 1, axis=1)
        self.svalues[:, 0] = sigmoid(self.params, new_values)
        self.derivs = np.roll(self.derivs, 1, axis=1)
        self.derivs[:, 0] = prev_node_deriv
        self.sderivs = np.roll(self.sderivs, 1, axis=1)
        self.sderivs[:, 0] = (sigmoid_deriv(self.params, 1, self.values[:, 1])
                              * prev_node_deriv)
        self.index += 1

    def stacked_svalues(self, pop: int) -> np.ndarray:
        """Source-major flattening of the rate-transformed value frames."""
        return self.svalues[pop].T.ravel()

    def stacked_sderivs(self, pop: int) -> np.ndarray:
        return self.sderivs[pop].T.ravel()


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

@dataclass
class InitialMode:
    """One harmonic mode of the initial history: Re(amp e^{i w t} Y_l^m)."""

    pop: str          # "e", "i" or "both"
    l: int
    m: int
    amp: complex
    omega: float


@dataclass
class SimConfig:
    params: ModelParams
    refinement: int = 3
    dt: float = 0.05
    dt_spline: float | None = None
    t_end: float = 10.0
    modes: list = field(default_factory=list)
    snapshot_every: int = 20
    probe_count: int = 8
    instability_bound: float = 1e6

    def __post_init__(self):
        if self.dt_spline is None:
            self.dt_spline = self.dt
        ratio = self.dt_spline / self.dt
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ValueError("dt_spline must be a positive integer multiple of dt")
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")

    @property
    def substeps(self) -> int:
        return int(round(self.dt_spline / self.dt))


@dataclass
class SimResult:
    times: np.ndarray               # probe sample times
    probes: np.ndarray              # (nt, 2, n_probes)
    probe_indices: np.ndarray
    snapshot_times: np.ndarray
    snapshots: np.ndarray           # (ns, 2, m)
    mesh: SphereMesh
    steps: int


def default_probe_indices(mesh: SphereMesh, count: int = 8) -> np.ndarray:
    """Centroids nearest to well-spread fixed directions (cube corners)."""
    dirs = np.array([[sx, sy, sz] for sx in (-1.0, 1.0)
                     for sy in (-1.0, 1.0) for sz in (-1.0, 1.0)]) / math.sqrt(3.0)
    idx = []
    for d in dirs[:count]:
        j = int(np.argmax(mesh.centroids @ d))
        if j not in idx:
            idx.append(j)
    return np.array(idx, dtype=int)


def modes_value(modes, mesh: SphereMesh, t: float, deriv: bool = False) -> np.ndarray:
    """Initial-history value (or time derivative) for both populations."""
    out = np.zeros((2, mesh.m))
    for md in modes:
        y = sph_harm_points(md.l, md.m, mesh.centroids)
        factor = md.amp * np.exp(1j * md.omega * t)
        if deriv:
            factor = factor * 1j * md.omega
        contrib = np.real(factor * y)
        if md.pop in ("e", "both"):
            out[0] += contrib
        if md.pop in ("i", "both"):
            out[1] += contrib
    return out


# --------------------------------------------------------------------------
# stepping
# --------------------------------------------------------------------------

def mcnab_step(u, u_prev, F, F_prev, d: float, dt: float, lap: sp.spmatrix,
               solver) -> np.ndarray:
    """One IMEX step: explicit two-step reaction, implicit diffusion.

    ``solver`` solves (I - 9/16 d dt L) x = rhs; pass None when d = 0.
    """
    rhs = u + dt * (1.5 * F - 0.5 * F_prev)
    if d != 0.0:
        rhs = rhs + d * dt * (lap @ (0.375 * u + 0.0625 * u_prev))
    if solver is None:
        return rhs
    return solver(rhs)


class DelaySimulation:
    """Assembled mesh, delay matrices and MCNAB state for one model run."""

    def __init__(self, config: SimConfig, mesh: SphereMesh | None = None,
                 use_numba: bool | None = None):
        self.config = config
        p = config.params
        self.mesh = mesh if mesh is not None else build_mesh(config.refinement)
        self.lap = discrete_laplacian(self.mesh).matrix
        self.r = config.substeps
        if self.r > 1 and p.tau0 <= (self.r - 1) * config.dt:
            raise ValueError("fixed delay too short for the spline stride")
        # one P/Q pair per distinct kernel per stepping phase
        pairs = {}
        for tgt in "ei":
            for src in "ei":
                a, b = {"e": 0, "i": 1}[tgt], {"e": 0, "i": 1}[src]
                key = (p.eta()[a, b], p.sigma()[a, b])
                pairs.setdefault(key, []).append((tgt, src))
        self.kernel_of = {}
        self.matrices = []   # [phase][kernel_index] -> DelayMatrices
        keys = sorted(pairs)
        for ki, key in enumerate(keys):
            for tgt, src in pairs[key]:
                self.kernel_of[(tgt, src)] = ki
        for phase in range(self.r):
            row = [assemble_delay_matrices(self.mesh, p, key,
                                           config.dt_spline,
                                           offset=phase * config.dt,
                                           use_numba=use_numba)
                   for key in keys]
            self.matrices.append(row)
        self.k = self.matrices[0][0].k
        m = self.mesh.m
        eye = sp.identity(m, format="csc")
        self.solvers = []
        self.boot_solvers = []
        for d in (p.d_e, p.d_i):
            if d == 0.0:
                self.solvers.append(None)
                self.boot_solvers.append(None)
            else:
                self.solvers.append(
                    spla.splu((eye - (9.0 / 16.0) * d * config.dt * self.lap).tocsc()).solve)
                self.boot_solvers.append(
                    spla.splu((eye - d * config.dt * self.lap).tocsc()).solve)
        self.buffer = HistoryBuffer(self.k, m, p)
        self.buffer.seed(
            lambda t: modes_value(config.modes, self.mesh, t),
            lambda t: modes_value(config.modes, self.mesh, t, deriv=True),
            config.dt_spline)
        self.u = self.buffer.values[:, 0].copy()
        self.u_prev = None
        self.F_prev = None
        self.du_pending = np.zeros((2, m))
        self.n = 0
        self.alpha = p.alpha()
        self.dcoef = p.diffusion()

    def delay_input(self) -> np.ndarray:
        """Nonlocal input at the current time, same for each target that
        shares its source kernels."""
        phase = self.n % self.r
        mats = self.matrices[phase]
        cache = {}
        out = np.zeros((2, self.mesh.m))
        for ti, tgt in enumerate("ei"):
            for si, src in enumerate("ei"):
                ki = self.kernel_of[(tgt, src)]
                key = (ki, si)
                if key not in cache:
                    dm = mats[ki]
                    cache[key] = (dm.P @ self.buffer.stacked_svalues(si)
                                  - dm.Q @ self.buffer.stacked_sderivs(si))
                out[ti] += cache[key]
        return out

    def step(self):
        """Advance the solution by one time step."""
        cfg = self.config
        dt = cfg.dt
        inp = self.delay_input()
        F = -self.alpha[:, None] * self.u + inp
        du = F + self.dcoef[:, None] * np.asarray([self.lap @ self.u[0],
                                                   self.lap @ self.u[1]])
        if self.n % self.r == 0:
            self.du_pending = du
        unew = np.empty_like(self.u)
        if self.F_prev is None:
            for pop in (0, 1):
                rhs = self.u[pop] + dt * F[pop]
                unew[pop] = rhs if self.boot_solvers[pop] is None \
                    else self.boot_solvers[pop](rhs)
        else:
            for pop in (0, 1):
                unew[pop] = mcnab_step(self.u[pop], self.u_prev[pop], F[pop],
                                       self.F_prev[pop], self.dcoef[pop], dt,
                                       self.lap, self.solvers[pop])
        self.u_prev = self.u
        self.F_prev = F
        self.u = unew
        self.n += 1
        if self.n % self.r == 0:
            self.buffer.push(self.u, self.du_pending)
        amax = float(np.abs(self.u).max())
        if amax > cfg.instability_bound:
            raise SimulationUnstable(
                f"|u| reached {amax:.3e} at t={self.n * dt:.6g}")

    @property
    def t(self) -> float:
        return self.n * self.config.dt


def simulate(config: SimConfig, mesh: SphereMesh | None = None,
             probe_indices=None, use_numba: bool | None = None) -> SimResult:
    """Run the configured simulation, collecting probes and snapshots."""
    sim = DelaySimulation(config, mesh=mesh, use_numba=use_numba)
    if probe_indices is None:
        probe_indices = default_probe_indices(sim.mesh, config.probe_count)
    probe_indices = np.asarray(probe_indices, dtype=int)
    nsteps = int(round(config.t_end / config.dt))
    times = np.empty(nsteps)
    probes = np.empty((nsteps, 2, len(probe_indices)))
    snap_t = []
    snaps = []
    for i in range(nsteps):
        sim.step()
        times[i] = sim.t
        probes[i] = sim.u[:, probe_indices]
        if config.snapshot_every and (i + 1) % config.snapshot_every == 0:
            snap_t.append(sim.t)
            snaps.append(sim.u.copy())
    return SimResult(times=times, probes=probes, probe_indices=probe_indices,
                     snapshot_times=np.array(snap_t),
                     snapshots=(np.array(snaps) if snaps
                                else np.zeros((0, 2, sim.mesh.m))),
                     mesh=sim.mesh, steps=sim.n)


# --------------------------------------------------------------------------
# file formats
# --------------------------------------------------------------------------

def snapshot_csv(mesh: SphereMesh, t: float, u: np.ndarray) -> str:
    """Snapshot block: first line t, then m rows 'x y z u_e u_i'."""
    lines = [f"{t:.17g}"]
    for j in range(mesh.m):
        c = mesh.centroids[j]
        lines.append(f"{c[0]:.17g} {c[1]:.17g} {c[2]:.17g} "
                     f"{u[0, j]:.17g} {u[1, j]:.17g}")
    return "\n".join(lines) + "\n"


def probe_csv(result: SimResult) -> str:
    """Probe series: t, u_e at each probe, u_i at each probe."""
    npb = result.probes.shape[2]
    head = (["t"] + [f"u_e_p{i+1}" for i in range(npb)]
            + [f"u_i_p{i+1}" for i in range(npb)])
    lines = [",".join(head)]
    for i, t in enumerate(result.times):
        row = [f"{t:.17g}"]
        row += [f"{v:.17g}" for v in result.probes[i, 0]]
        row += [f"{v:.17g}" for v in result.probes[i, 1]]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def save_checkpoint(sim: DelaySimulation, path: str):
    """Binary dump of the full stepping state for bit-exact restart."""
    b = sim.buffer
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<IIIIId", 1, sim.mesh.m, b.k, sim.r, sim.n,
                             sim.config.dt))
        have_prev = sim.F_prev is not None
        fh.write(struct.pack("<I", 1 if have_prev else 0))
        for arr in (b.values, b.derivs, sim.u, sim.du_pending):
            fh.write(np.ascontiguousarray(arr).tobytes())
        if have_prev:
            for arr in (sim.u_prev, sim.F_prev):
                fh.write(np.ascontiguousarray(arr).tobytes())


def load_checkpoint(path: str, config: SimConfig,
                    mesh: SphereMesh | None = None) -> DelaySimulation:
    """Rebuild a simulation from a checkpoint written by save_checkpoint."""
    sim = DelaySimulation(config, mesh=mesh)
    with open(path, "rb") as fh:
        magic = fh.read(len(CHECKPOINT_MAGIC))
        if magic != CHECKPOINT_MAGIC:
            raise ValueError("not a spherefield checkpoint")
        version, m, k, r, n, dt = struct.unpack("<IIIIId", fh.read(28))
        if version != 1:
            raise ValueError(f"unsupported checkpoint version {version}")
        if (m, k, r) != (sim.mesh.m, sim.k, sim.r) or abs(dt - config.dt) > 1e-15:
            raise ValueError("checkpoint does not match this configuration")
        (have_prev,) = struct.unpack("<I", fh.read(4))

        def read(shape):
            count = int(np.prod(shape))
            return np.frombuffer(fh.read(8 * count), dtype=np.float64).reshape(shape).copy()

        b = sim.buffer
        b.values = read((2, k + 1, m))
        b.derivs = read((2, k, m))
        sim.u = read((2, m))
        sim.du_pending = read((2, m))
        if have_prev:
            sim.u_prev = read((2, m))
            sim.F_prev = read((2, m))
        else:
            sim.u_prev = None
            sim.F_prev = None
    b.svalues = sigmoid(config.params, b.values)
    b.sderivs = sigmoid_deriv(config.params, 1, b.values[:, 1:]) * b.derivs
    sim.n = n
    return sim
