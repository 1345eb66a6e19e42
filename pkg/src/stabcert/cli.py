"""Command line driver: problem files in, report files out.

This is the only module with I/O.  Problem and report files are JSON with
complex numbers stored as two-element [re, im] arrays and a
``schema_version`` gate.  Reports embed the exact formula strings behind
every certified constant and the seed used for any randomized initial
data, so identical inputs produce byte-identical numeric fields.

Exit codes: 0 when every recorded verdict passes, 2 when any verdict
fails, 1 on malformed or invalid input (with a single-line JSON error on
stderr).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import certificate as cert_mod
from .errors import StabcertError
from .model import Tolerances, validate_system
from .normalize import map_state, normalize_system
from .helmholtz import decompose, decoupling_transforms, restricted_generator
from .certificate import FORMULAS, full_certificate
from .maxwell import GridSpec, build_maxwell_system
from .verify import (
    admissible_initial,
    assemble_generator,
    fit_decay_rate,
    gp_sweep,
    simulate,
    spectral_abscissa,
)

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# JSON (de)serialization


def matrix_to_json(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in M]


def matrix_from_json(data, name: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} is not a nested [re, im] array") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError(f"{name} must be a 2-D array of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _finite(x):
    """JSON has no infinities; represent non-finite values as None."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def load_problem(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("problem file must be a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version!r}")
    matrices = {}
    for name in ("alpha", "beta", "gamma", "C"):
        if name not in data:
            raise ValueError(f"problem file is missing {name!r}")
        matrices[name] = matrix_from_json(data[name], name)
    tol_data = data.get("tolerances")
    tol = Tolerances(**tol_data) if tol_data else None
    system = validate_system(
        matrices["alpha"], matrices["beta"], matrices["gamma"], matrices["C"], tol
    )
    return system, tol


def dump_problem(system, path: str) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "alpha": matrix_to_json(system.alpha),
        "beta": matrix_to_json(system.beta),
        "gamma": matrix_to_json(system.gamma),
        "C": matrix_to_json(system.C),
    }
    _write_json(payload, path)


def _write_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)
    if path is None:
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _sweep_summary(report) -> dict:
    return {
        "abscissa": report.abscissa,
        "lambdas": [float(x) for x in report.lambdas],
        "norms": [_finite(x) for x in report.norms],
        "max_norm": _finite(report.max_norm),
        "singular_points": [float(x) for x in report.singular_points],
    }


def _certificate_summary(cert) -> dict:
    inner = None
    if cert.inner is not None:
        inner = {
            "c": cert.inner.c,
            "gamma_norm": cert.inner.gamma_norm,
            "C_inv_norm": cert.inner.C_inv_norm,
            "delta_star": cert.inner.delta_star,
            "p_star": cert.inner.p_star,
            "c_tilde": cert.inner.c_tilde,
            "d": cert.inner.d,
            "M_inner": cert.inner.M_inner,
        }
    return {
        "delta_cert": cert.delta_cert,
        "M_total": cert.M_total,
        "working_abscissa": cert.working_abscissa,
        "c_eff": cert.c_eff,
        "gamma_eff": cert.gamma_eff,
        "kernel_bound": cert.kernel_bound,
        "transform_bound": cert.transform_bound,
        "kappa_norm": cert.kappa_norm,
        "c_gamma_tilde": cert.c_gamma_tilde,
        "gamma_tilde_norm": cert.gamma_tilde_norm,
        "sigma_min_pos": cert.sigma_min_pos,
        "rank": cert.rank,
        "n0": cert.n0,
        "n1": cert.n1,
        "inner": inner,
        "audit": {
            "passed": cert.audit.passed,
            "halvings": cert.audit.halvings,
            "max_resolvent_norm": _finite(cert.audit.max_resolvent_norm),
            "singular_hits": cert.audit.singular_hits,
            "re_range": list(cert.audit.re_range),
            "im_range": list(cert.audit.im_range),
            "grid_shape": list(cert.audit.grid_shape),
        },
    }


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_certify(args) -> int:
    system, tol = load_problem(args.problem)
    cert = full_certificate(system, tol=tol)
    ns = normalize_system(system, tol)
    frames = decompose(ns.D, tol)
    B_res = restricted_generator(ns.gamma_tilde, frames)

    abscissa = spectral_abscissa(B_res)
    sweep0 = gp_sweep(B_res, 0.0, args.lambda_max, args.points)
    sweep_half = gp_sweep(B_res, -cert.delta_cert / 2.0, args.lambda_max, args.points)

    rng = np.random.default_rng(args.seed)
    n0, n1 = system.n0, system.n1
    u0 = rng.standard_normal(n0) + 1j * rng.standard_normal(n0)
    v_raw = rng.standard_normal(n1) + 1j * rng.standard_normal(n1)
    frames_C = decompose(system.C, tol)
    v_adm, residual = admissible_initial(system.beta, frames_C, v_raw)
    U0 = map_state(ns, np.concatenate([u0, v_adm]), "forward")
    U0 = U0 / np.linalg.norm(U0)

    # Keep the fit window clear of underflow for fast-decaying systems.
    t_end = min(args.t_end, 50.0 / max(-abscissa, 0.25))
    B_norm = assemble_generator(ns.gamma_tilde, ns.D)
    trace = simulate(B_norm, U0, t_end, args.samples)
    fitted = fit_decay_rate(trace)

    bound = cert.M_total * (1.0 + 1e-6)
    verdicts = {
        "audit_passed": bool(cert.audit.passed),
        "spectral_abscissa_sound": bool(abscissa <= -cert.delta_cert + 1e-9),
        "sweep_at_zero_bounded": bool(
            sweep0.n_singular == 0 and sweep0.max_norm <= bound
        ),
        "sweep_at_half_bounded": bool(
            sweep_half.n_singular == 0 and sweep_half.max_norm <= bound
        ),
        "decay_at_least_certified": bool(fitted >= cert.delta_cert - 1e-6),
    }
    report = {
        "schema_version": SCHEMA_VERSION,
        "certificate": _certificate_summary(cert),
        "formulas": FORMULAS,
        "oracles": {
            "spectral_abscissa_restricted": abscissa,
            "fitted_decay_rate": fitted,
        },
        "sweeps": [_sweep_summary(sweep0), _sweep_summary(sweep_half)],
        "trajectory": {
            "t_end": t_end,
            "samples": args.samples,
            "seed": args.seed,
            "projection_residual": residual,
            "fitted_rate": fitted,
            "method": trace.method,
        },
        "verdicts": verdicts,
    }
    _write_json(report, args.output)
    return 0 if all(verdicts.values()) else 2


def _cmd_sweep(args) -> int:
    system, tol = load_problem(args.problem)
    ns = normalize_system(system, tol)
    frames = decompose(ns.D, tol)
    B_res = restricted_generator(ns.gamma_tilde, frames)
    report_data = gp_sweep(B_res, args.abscissa, args.lambda_max, args.points)
    report = {
        "schema_version": SCHEMA_VERSION,
        "operator": "normalized generator restricted to H0 x ran(coupling)",
        "sweep": _sweep_summary(report_data),
    }
    _write_json(report, args.output)
    return 0


def _cmd_simulate(args) -> int:
    system, tol = load_problem(args.problem)
    ns = normalize_system(system, tol)
    n0, n1 = system.n0, system.n1
    if args.u0 is not None:
        with open(args.u0, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        arr = np.asarray(raw, dtype=float)
        if arr.ndim != 2 or arr.shape != (n0 + n1, 2):
            raise ValueError(f"u0 must be a list of {n0 + n1} [re, im] pairs")
        U0_orig = arr[:, 0] + 1j * arr[:, 1]
        seed = None
    else:
        rng = np.random.default_rng(args.seed)
        U0_orig = rng.standard_normal(n0 + n1) + 1j * rng.standard_normal(n0 + n1)
        seed = args.seed
    frames_C = decompose(system.C, tol)
    v_adm, residual = admissible_initial(system.beta, frames_C, U0_orig[n0:])
    U0 = map_state(ns, np.concatenate([U0_orig[:n0], v_adm]), "forward")
    norm0 = np.linalg.norm(U0)
    if norm0 > 0:
        U0 = U0 / norm0

    B_norm = assemble_generator(ns.gamma_tilde, ns.D)
    trace = simulate(B_norm, U0, args.t_end, args.samples)
    try:
        fitted = fit_decay_rate(trace)
    except StabcertError:
        fitted = None
    report = {
        "schema_version": SCHEMA_VERSION,
        "variables": "normalized (unit weights)",
        "seed": seed,
        "projection_residual": residual,
        "times": [float(t) for t in trace.times],
        "state_norms": [float(x) for x in trace.state_norms],
        "fitted_rate": _finite(fitted) if fitted is not None else None,
        "method": trace.method,
    }
    _write_json(report, args.output)
    return 0


def _cmd_reduce(args) -> int:
    system, tol = load_problem(args.problem)
    ns = normalize_system(system, tol)
    frames = decompose(ns.D, tol)
    try:
        re_s, im_s = args.z.split(",")
        z = complex(float(re_s), float(im_s))
    except ValueError as exc:
        raise ValueError(f"--z must be RE,IM, got {args.z!r}") from exc
    blocks = decoupling_transforms(ns.gamma_tilde, frames, z, ns.c_gamma_tilde)
    report = {
        "schema_version": SCHEMA_VERSION,
        "z": [z.real, z.imag],
        "rank": frames.r,
        "sigma_min_pos": frames.sigma_min_pos,
        "frames": {
            "iota0": matrix_to_json(frames.iota0),
            "kappa0": matrix_to_json(frames.kappa0),
            "iota1": matrix_to_json(frames.iota1),
            "kappa1": matrix_to_json(frames.kappa1),
        },
        "C_tilde": matrix_to_json(frames.C_tilde),
        "T1": matrix_to_json(blocks.T1),
        "T2": matrix_to_json(blocks.T2),
        "schur_block": matrix_to_json(blocks.gamma1_z),
        "kernel_block": matrix_to_json(blocks.gamma2),
    }
    _write_json(report, args.output)
    return 0


def _cmd_maxwell_gen(args) -> int:
    spec = GridSpec(N=args.n, h=args.h)
    system = build_maxwell_system(spec, eps=args.eps, mu=args.mu, sigma=args.sigma)
    dump_problem(system, args.output)
    return 0


# ---------------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stabcert",
        description="Certify exponential decay of damped block systems and audit the constants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="run the full certificate plus oracle audits")
    p.add_argument("problem")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--lambda-max", type=float, default=50.0)
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--t-end", type=float, default=20.0)
    p.add_argument("--samples", type=int, default=801)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("sweep", help="resolvent norms along a vertical line")
    p.add_argument("problem")
    p.add_argument("--abscissa", type=float, required=True)
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("simulate", help="sample a semigroup trajectory")
    p.add_argument("problem")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--u0", default=None, help="JSON file with [re, im] pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("reduce", help="emit frames, transforms and the Schur block")
    p.add_argument("problem")
    p.add_argument("--z", required=True, help="frequency as RE,IM")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("maxwell-gen", help="write a damped periodic-grid problem file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_maxwell_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StabcertError, ValueError, OSError, json.JSONDecodeError) as exc:
        line = json.dumps({"error": type(exc).__name__, "detail": str(exc)})
        print(line, file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
