"""Command-line front end.

One command per process; every run reads a JSON config (sections
``model`` / ``mesh`` / ``run``), applies ``--override`` assignments, writes
deterministic artifacts into ``--out``, and finishes with a manifest
holding the resolved config plus artifact checksums. Exit codes: 2 config
error, 3 numerical failure, 4 instability abort.
"""
from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import os
import sys
import tempfile

import numpy as np

from spherefield import __version__
from spherefield.amplitude import family_csv
from spherefield.bifurcation import (FixedParams, diagram_csv, hopf_point,
                                     hopf_points_at_eta_e, stability_grid,
                                     trace_diagram)
from spherefield.delaysim import (InitialMode, SimConfig, SimulationUnstable,
                                  probe_csv, save_checkpoint, simulate,
                                  snapshot_csv, DelaySimulation)
from spherefield.kernels import ModelParams, PresynapticParams
from spherefield.linear import ResonanceError, critical_eigensolution, find_roots, spectrum_csv
from spherefield.mesh import build_mesh, eigentest_csv, mesh_dump
from spherefield.normalform import normal_form_coefficients

COMMANDS = ("mesh", "laplace-test", "spectrum", "bifdiag", "hopf-point",
            "nfc", "amplitude", "simulate")


class ConfigError(ValueError):
    pass


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def parse_model(section: dict) -> ModelParams:
    try:
        if "eta_e" in section:
            pre = PresynapticParams(eta_e=section["eta_e"], eta_i=section["eta_i"],
                                    sigma_e=section["sigma_e"], sigma_i=section["sigma_i"])
            return pre.expand(
                alpha_e=section["alpha_e"], alpha_i=section["alpha_i"],
                d_e=section["d_e"], d_i=section["d_i"], tau0=section["tau0"],
                c=section["c"], gamma=section["gamma"], delta=section["delta"])
        keys = ("alpha_e", "alpha_i", "d_e", "d_i", "eta_ee", "eta_ei",
                "eta_ie", "eta_ii", "sigma_ee", "sigma_ei", "sigma_ie",
                "sigma_ii", "tau0", "c", "gamma", "delta")
        return ModelParams(**{k: section[k] for k in keys})
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad model section: {exc}") from exc


def _fixed_from_model(section: dict) -> FixedParams:
    if "eta_e" not in section:
        raise ConfigError("bifurcation commands need the presynaptic model form")
    return FixedParams(alpha_e=section["alpha_e"], alpha_i=section["alpha_i"],
                       d_e=section["d_e"], d_i=section["d_i"],
                       sigma_e=section["sigma_e"], sigma_i=section["sigma_i"],
                       tau0=section["tau0"], c=section["c"],
                       gamma=section["gamma"], delta=section["delta"])


def apply_override(config: dict, assignment: str):
    if "=" not in assignment:
        raise ConfigError(f"override '{assignment}' is not KEY=VALUE")
    key, raw = assignment.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = config
    parts = key.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override path '{key}' crosses a non-object")
    node[parts[-1]] = value


def atomic_write(path: str, data: str | bytes):
    mode = "wb" if isinstance(data, bytes) else "w"
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp_")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _critical_point(config: dict, rule=None):
    """Resolve (params, l, omega) from the run section.

    Either run.omega is given (the model etas must already sit on the
    bifurcation) or run.eta_e is given and the point is solved for.
    """
    run = config.get("run", {})
    model = config["model"]
    l = int(run["l"])
    if "omega" in run and "eta_e" not in run:
        params = parse_model(model)
        return params, l, float(run["omega"]), model.get("eta_e"), model.get("eta_i")
    fixed = _fixed_from_model(model)
    eta_e = float(run["eta_e"])
    rng = tuple(run.get("omega_range", (0.05, 3.0)))
    points = hopf_points_at_eta_e(fixed, l, eta_e, omega_range=rng)
    if not points:
        raise ResonanceError(f"no Hopf point with eta_e={eta_e} at degree {l}")
    want = run.get("omega_near")
    pt = (min(points, key=lambda p: abs(p.omega - want)) if want is not None
          else points[0])
    return pt.params, l, pt.omega, pt.eta_e, pt.eta_i


# --------------------------------------------------------------------------
# command implementations, each returning {artifact name: text}
# --------------------------------------------------------------------------

def cmd_mesh(config):
    n = int(config.get("mesh", {}).get("refinement", 3))
    return {"mesh.txt": mesh_dump(build_mesh(n))}

def cmd_laplace_test(config):
    run = config.get("run", {})
    refinements = run.get("refinements", [2, 3, 4, 5])
    degrees = run.get("degrees", [1, 2, 3])
    m_order = int(run.get("m_order", 0))
    return {"laplace_test.csv": eigentest_csv(refinements, degrees, m_order)}

def cmd_spectrum(config):
    run = config.get("run", {})
    params = parse_model(config["model"])
    region = tuple(run.get("region", (-2.0, 0.5, -3.0, 3.0)))
    seeds = int(run.get("seeds", 8))
    sols = []
    for l in range(int(run.get("l_max", 4)) + 1):
        sols.extend(find_roots(params, l, region=region, seeds=seeds))
    return {"spectrum.csv": spectrum_csv(sols)}

def cmd_bifdiag(config):
    run = config.get("run", {})
    fixed = _fixed_from_model(config["model"])
    window = tuple(run.get("window", (0.0, 8.0, -16.0, 0.0)))
    l_max = int(run.get("l_max", 4))
    om = np.linspace(float(run.get("omega_min", 0.05)),
                     float(run.get("omega_max", 3.0)),
                     int(run.get("omega_samples", 400)))
    ee = np.linspace(window[0], window[1], int(run.get("eta_samples", 200)))
    diagram = trace_diagram(fixed, l_max, omega_grid=om, eta_e_grid=ee,
                            window=window)
    out = {"bifdiag.csv": diagram_csv(diagram)}
    if run.get("shade"):
        res = int(run.get("resolution", 40))
        ge, gi, stable = stability_grid(fixed, l_max, window=window, resolution=res)
        lines = ["eta_e,eta_i,stable"]
        for a, x in enumerate(ge):
            for b, y in enumerate(gi):
                lines.append(f"{_fmt(x)},{_fmt(y)},{int(stable[a, b])}")
        out["stability.csv"] = "\n".join(lines) + "\n"
    return out

def cmd_hopf_point(config):
    run = config.get("run", {})
    fixed = _fixed_from_model(config["model"])
    l = int(run["l"])
    if "omega" in run:
        pt = hopf_point(fixed, l, float(run["omega"]))
        points = [pt]
    else:
        points = hopf_points_at_eta_e(fixed, l, float(run["eta_e"]),
                                      omega_range=tuple(run.get("omega_range", (0.05, 3.0))))
        if not points:
            raise ResonanceError("no Hopf point found in the omega range")
    payload = [{"l": p.l, "omega": p.omega, "eta_e": p.eta_e, "eta_i": p.eta_i}
               for p in points]
    return {"hopf_point.json": json.dumps(payload, indent=2) + "\n"}

def cmd_nfc(config):
    params, l, omega, eta_e, eta_i = _critical_point(config)
    eig = critical_eigensolution(params, l, omega)
    coeffs = normal_form_coefficients(params, eig)
    payload = {
        "l": l,
        "omega": omega,
        "eta_e": eta_e,
        "eta_i": eta_i,
        "v": [[eig.v[0].real, eig.v[0].imag], [eig.v[1].real, eig.v[1].imag]],
        "g": [[gg.real, gg.imag] for gg in coeffs.g],
        "l1": coeffs.lyapunov,
    }
    return {"nfc.json": json.dumps(payload, indent=2) + "\n"}

def cmd_amplitude(config):
    run = config.get("run", {})
    try:
        mu = complex(*run["mu"])
        g11 = complex(*run["g11"])
        g12 = complex(*run["g12"])
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"amplitude needs mu, g11, g12 as [re, im]: {exc}") from exc
    return {"amplitude.csv": family_csv(mu, g11, g12,
                                        samples=int(run.get("samples", 50)))}

def cmd_simulate(config):
    run = config.get("run", {})
    params = parse_model(config["model"])
    modes = [InitialMode(pop=m.get("pop", "both"), l=int(m["l"]), m=int(m["m"]),
                         amp=complex(*m["amp"]) if isinstance(m["amp"], list)
                         else complex(m["amp"]),
                         omega=float(m["omega"]))
             for m in run.get("modes", [])]
    cfg = SimConfig(params=params,
                    refinement=int(config.get("mesh", {}).get("refinement", 3)),
                    dt=float(run.get("dt", 0.05)),
                    dt_spline=run.get("dt_spline"),
                    t_end=float(run["t_end"]),
                    modes=modes,
                    snapshot_every=int(run.get("snapshot_every", 20)))
    result = simulate(cfg)
    out = {"probes.csv": probe_csv(result)}
    for i, t in enumerate(result.snapshot_times):
        out[f"snapshots/snap_{i:05d}.csv"] = snapshot_csv(
            result.mesh, float(t), result.snapshots[i])
    return out, cfg, result

# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spherefield",
                                 description=__doc__.splitlines()[0])
    ap.add_argument("command", help=f"one of: {', '.join(COMMANDS)}")
    ap.add_argument("--config", required=False, help="JSON config file")
    ap.add_argument("--override", action="append", default=[],
                    metavar="K=V", help="dotted-path config override, repeatable")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--threads", type=int, default=None,
                    help="worker thread cap for accelerated kernels")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command not in COMMANDS:
            raise ConfigError(f"unknown command '{args.command}'")
        config = {}
        if args.config:
            try:
                with open(args.config) as fh:
                    config = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config: {exc}") from exc
        for ov in args.override:
            apply_override(config, ov)
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError("--threads must be >= 1")
            try:
                import numba
                numba.set_num_threads(args.threads)
            except (ImportError, ValueError):
                pass
        handler = {
            "mesh": cmd_mesh,
            "laplace-test": cmd_laplace_test,
            "spectrum": cmd_spectrum,
            "bifdiag": cmd_bifdiag,
            "hopf-point": cmd_hopf_point,
            "nfc": cmd_nfc,
            "amplitude": cmd_amplitude,
        }
        if args.command == "simulate":
            artifacts, simcfg, result = cmd_simulate(config)
        else:
            artifacts = handler[args.command](config)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except (KeyError,) as exc:
        print(f"error: config: missing key {exc}", file=sys.stderr)
        return 2
    except SimulationUnstable as exc:
        print(f"error: instability: {exc}", file=sys.stderr)
        return 4
    except (ResonanceError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: numerical: {exc}", file=sys.stderr)
        return 3

    os.makedirs(args.out, exist_ok=True)
    paths = {}
    for name, text in artifacts.items():
        path = os.path.join(args.out, name)
        atomic_write(path, text)
        paths[name] = path
    manifest = {
        "tool": f"spherefield {__version__}",
        "command": args.command,
        "config": config,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "artifacts": {name: sha256_file(p) for name, p in sorted(paths.items())},
    }
    atomic_write(os.path.join(args.out, "manifest.json"),
                 json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {len(paths)} artifact(s) to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
