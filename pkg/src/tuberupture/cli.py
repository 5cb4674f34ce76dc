"""Command-line frontend: prediction, simulation, sweeps, sections, checks.

One binary with subcommands; every numeric output file is written
atomically (temp + rename) with floats in full round-trip precision, so
identical invocations produce byte-identical bodies.

Exit codes: 0 ok, 1 usage error, 2 analytic-domain error (rupture formulas
not applicable), 3 numeric failure during integration.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .errors import (
    NoPhysicalBranch,
    NoRealExtremum,
    SchemaMismatch,
    TubeRuptureError,
    ZeroForcing,
    ZeroInitialDisplacement,
)
from .experiments import (
    SweepSpec,
    rupture_surface,
    table1,
    tube_sections,
    validity_raster,
)
from .integrator import (
    BACKEND,
    DRIVER_EXACT,
    DRIVER_SECULAR,
    IntegratorConfig,
    TerminationKind,
    integrate,
)
from .invariant import drift_series
from .model import SystemParams
from .rupture import predict, validity_check

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_NUMERIC = 3

_DOMAIN_ERRORS = (NoRealExtremum, ZeroForcing, ZeroInitialDisplacement, NoPhysicalBranch)

#: Known CSV schemas, keyed by exact header line.
SCHEMAS = {
    "tau,z,p,y,I_sampled_drift,kind": "simulate",
    "eps,tau_analytic,tau_numeric,rel_dev,censored": "table1",
    "eps,z0,n_crit,valid": "sweep",
    "n,component_id,closed,z,p": "sections",
    "y0,z0,inside": "validity",
    "y0,z0": "boundary",
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # map argparse's default exit 2 onto exit 1
        raise _UsageError(message)


def _fmt(x) -> str:
    """Full round-trip decimal for floats; plain str otherwise."""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _write_csv(path: str | None, header: str, rows) -> None:
    body = header + "\n" + "".join(",".join(_fmt(v) for v in row) + "\n" for row in rows)
    if path is None:
        sys.stdout.write(body)
    else:
        _atomic_write(path, body)


def _emit_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        _atomic_write(path, text)


def _error_json(exc: Exception) -> dict:
    return {"error": type(exc).__name__, "message": str(exc)}


def _apply_json_config(args: argparse.Namespace) -> None:
    if getattr(args, "json_config", None):
        with open(args.json_config) as fh:
            overrides = json.load(fh)
        if not isinstance(overrides, dict):
            raise _UsageError("--json-config must contain a JSON object")
        for key, value in overrides.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                raise _UsageError(f"unknown config key {key!r}")
            setattr(args, attr, value)


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"range must be lo:hi:count, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _config_from_args(args) -> IntegratorConfig:
    return IntegratorConfig(
        rel_tol=args.rel_tol, abs_tol=args.abs_tol, driver=args.driver
    )


def _manifest(args, extra: dict) -> dict:
    out = {
        "version": __version__,
        "backend": BACKEND,
        "parameters": {
            k: getattr(args, k)
            for k in ("y0", "eps", "z0", "rel_tol", "abs_tol", "driver")
            if hasattr(args, k)
        },
    }
    out.update(extra)
    return out


def cmd_predict(args) -> int:
    params = SystemParams(y0=args.y0, eps=args.eps, z0=args.z0)
    report = predict(params)
    if not report.valid:
        print(
            f"warning: (y0, z0) = ({args.y0}, {args.z0}) is outside the "
            f"validity region (margin {report.margin!r} >= 1)",
            file=sys.stderr,
        )
    payload = {
        "c_const": report.c_const,
        "phi_crit": report.phi_crit,
        "n_crit": report.n_crit,
        "tau_rupt": report.tau_rupt,
        "r_star": report.r_star,
        "z_at_rupture": report.z_at_rupture,
        "branch": report.branch,
        "valid": report.valid,
        "validity_margin": report.margin,
        "candidates": [
            {
                "phi": c.phi,
                "n": c.n,
                "r_star": c.r_star,
                "accepted": c.accepted,
                "reason": c.reason,
            }
            for c in report.candidates
        ],
    }
    _emit_json(payload, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    params = SystemParams(y0=args.y0, eps=args.eps, z0=args.z0)
    config = _config_from_args(args)
    traj = integrate(params, config, tau_end=args.tau_end, dense_stride=args.stride)
    drifts = drift_series(traj, params)
    rows = []
    for sample, (_, state) in zip(drifts, traj.samples):
        rows.append(
            (state.tau, state.z, state.p, state.y, sample.rel_drift, "grid")
        )
    for dense_row in traj.dense:
        # Drift is defined on the sampling grid only; dense rows leave it blank.
        rows.append(
            (float(dense_row[0]), float(dense_row[4]), float(dense_row[5]),
             float(dense_row[1]), "", "dense")
        )
    rows.sort(key=lambda r: (r[0], r[5]))
    _write_csv(args.out, "tau,z,p,y,I_sampled_drift,kind", rows)
    summary = _manifest(
        args,
        {
            "termination": traj.termination.kind.value,
            "termination_tau": traj.termination.tau,
            "tau_num": traj.tau_num,
            "accepted_steps": traj.accepted_steps,
        },
    )
    _emit_json(summary, args.summary)
    if traj.termination.kind in (
        TerminationKind.STEP_COLLAPSE,
        TerminationKind.DRIVER_NON_POSITIVE,
    ):
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_table1(args) -> int:
    config = _config_from_args(args)
    rows = table1(y0=args.y0, z0=args.z0, eps_list=args.eps_list, config=config)
    out_rows = [
        (
            r.eps,
            r.tau_analytic,
            "" if r.tau_numeric is None else r.tau_numeric,
            "" if r.rel_deviation is None else r.rel_deviation,
            "true" if r.censored else "false",
        )
        for r in rows
    ]
    _write_csv(args.out, "eps,tau_analytic,tau_numeric,rel_dev,censored", out_rows)
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        y0=args.y0, eps_range=_parse_range(args.eps), z0_range=_parse_range(args.z0)
    )
    cells = rupture_surface(spec)
    rows = [
        (
            c.eps,
            c.z0,
            "" if c.n_crit is None else c.n_crit,
            "true" if c.valid else "false",
        )
        for c in cells
    ]
    _write_csv(args.out, "eps,z0,n_crit,valid", rows)
    return EXIT_OK


def cmd_sections(args) -> int:
    params = SystemParams(y0=args.y0, eps=args.eps, z0=args.z0)
    curves = tube_sections(
        params, args.n, window=args.window, grid=args.grid
    )
    rows = []
    for curve in curves:
        for comp_id, (line, closed) in enumerate(zip(curve.polylines, curve.closed)):
            flag = "true" if closed else "false"
            for z, p in line:
                rows.append((curve.n, comp_id, flag, float(z), float(p)))
    _write_csv(args.out, "n,component_id,closed,z,p", rows)
    return EXIT_OK


def cmd_validity(args) -> int:
    y0_vals, z0_vals, inside, boundary = validity_raster(
        _parse_range(args.y0), _parse_range(args.z0)
    )
    rows = [
        (float(y0), float(z0), "true" if inside[i, j] else "false")
        for i, y0 in enumerate(y0_vals)
        for j, z0 in enumerate(z0_vals)
    ]
    _write_csv(args.out, "y0,z0,inside", rows)
    boundary_rows = [(float(x), float(y)) for line in boundary for x, y in line]
    if args.out is not None:
        root, ext = os.path.splitext(args.out)
        boundary_path = f"{root}_boundary{ext or '.csv'}"
    else:
        boundary_path = None
    _write_csv(boundary_path, "y0,z0", boundary_rows)
    return EXIT_OK


def cmd_check(args) -> int:
    with open(args.file) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise SchemaMismatch(f"{args.file}: empty file")
    header = lines[0]
    if header not in SCHEMAS:
        raise SchemaMismatch(f"{args.file}: unknown header {header!r}")
    ncols = header.count(",") + 1
    for lineno, line in enumerate(lines[1:], start=2):
        if line.count(",") + 1 != ncols:
            raise SchemaMismatch(
                f"{args.file}:{lineno}: expected {ncols} columns"
            )
    print(f"{args.file}: ok ({SCHEMAS[header]}, {len(lines) - 1} rows)")
    return EXIT_OK


def _add_common(sub, integrator: bool = True):
    sub.add_argument("--json-config", help="JSON file overriding the flags")
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    if integrator:
        sub.add_argument("--rel-tol", type=float, default=1e-10)
        sub.add_argument("--abs-tol", type=float, default=1e-12)
        sub.add_argument(
            "--driver",
            choices=[DRIVER_SECULAR, DRIVER_EXACT],
            default=DRIVER_SECULAR,
            help="forcing construction: series-built g (default) or exact driver",
        )


def build_parser() -> _Parser:
    parser = _Parser(prog="tuberupture", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("predict", help="closed-form rupture prediction")
    p.add_argument("--y0", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--z0", type=float, required=True)
    _add_common(p, integrator=False)
    p.set_defaults(func=cmd_predict)

    p = subs.add_parser("simulate", help="integrate and export the time series")
    p.add_argument("--y0", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--z0", type=float, required=True)
    p.add_argument("--tau-end", type=float, required=True)
    p.add_argument("--stride", type=int, default=0, help="dense-row decimation (0 = grid only)")
    p.add_argument("--summary", default=None, help="summary JSON path (default stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("table1", help="analytic vs numeric rupture-time table")
    p.add_argument("--y0", type=float, default=1.0)
    p.add_argument("--z0", type=float, default=0.2)
    p.add_argument(
        "--eps-list", type=float, nargs="+",
        default=[0.025, 0.05, 0.10, 0.15, 0.20], dest="eps_list",
    )
    _add_common(p)
    p.set_defaults(func=cmd_table1)

    p = subs.add_parser("sweep", help="closed-form critical index over (eps, z0)")
    p.add_argument("--y0", type=float, default=1.0)
    p.add_argument("--eps", required=True, help="lo:hi:count")
    p.add_argument("--z0", required=True, help="lo:hi:count")
    _add_common(p, integrator=False)
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("sections", help="tube cross-section level sets")
    p.add_argument("--y0", type=float, default=1.0)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--z0", type=float, required=True)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--window", type=float, default=None)
    p.add_argument("--grid", type=int, default=800)
    _add_common(p, integrator=False)
    p.set_defaults(func=cmd_sections)

    p = subs.add_parser("validity", help="rasterize the validity region")
    p.add_argument("--y0", required=True, help="lo:hi:count")
    p.add_argument("--z0", required=True, help="lo:hi:count")
    _add_common(p, integrator=False)
    p.set_defaults(func=cmd_validity)

    p = subs.add_parser("check", help="validate a self-produced CSV file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check, json_config=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_json_config(args)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DOMAIN_ERRORS as exc:
        _emit_json(_error_json(exc), None)
        return EXIT_DOMAIN
    except SchemaMismatch as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TubeRuptureError as exc:
        _emit_json(_error_json(exc), None)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
