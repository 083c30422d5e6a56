"""Command-line interface.

Subcommands::

    kinetic-case dispersion --model cmfp --points 200
    kinetic-case xfunction  --model maxwell --c 0.5
    kinetic-case verify     --suite all
    kinetic-case solve      kramers --gv 1
    kinetic-case solve      diffusion --c 0.5 --gn 1 --oracle
    kinetic-case oracle     kramers --gv 1

Without ``--out`` the main table or report is written to stdout.  With
``--out DIR`` every table and report of the command is written into ``DIR``.
Tables are CSV with one header line and 17 significant digits; reports are
JSON with sorted keys.  A ``--config FILE`` of ``key = value`` lines supplies
defaults for any option; explicit flags win.

Exit status: 0 success, 1 numerical or verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .dispersion import KineticModel, build_theta
from .errors import DomainError, KineticCaseError
from .xfunction import CanonicalX, GammaWeight, default_samples

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- output -----------------------------------------------------------------
class Table:
    def __init__(self, columns, rows):
        self.columns = list(columns)
        self.rows = np.asarray(rows, dtype=float).reshape(-1, len(self.columns))

    def to_csv(self):
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
        return buf.getvalue()

    def to_json(self):
        return {"columns": self.columns, "rows": self.rows.tolist()}


def _json_text(obj):
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _render(item, fmt):
    if isinstance(item, Table):
        return item.to_csv() if fmt == "csv" else _json_text(item.to_json())
    return _json_text(item)


def _emit(args, artifacts, primary):
    """Write artifacts: all into ``--out DIR`` or the primary one to stdout."""
    if args.out is None:
        sys.stdout.write(_render(artifacts[primary], args.format))
        return
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, item in artifacts.items():
        ext = "csv" if isinstance(item, Table) and args.format == "csv" else "json"
        (out / f"{name}.{ext}").write_text(_render(item, args.format))


# -- argument handling -------------------------------------------------------
def _model_from(args):
    if args.model == "cmfp":
        return KineticModel.cmfp()
    return KineticModel.maxwell(args.c)


def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _finite_float(text):
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError("must be finite")
    return value


def _add_common(p, model=True, default_model="cmfp"):
    if model:
        p.add_argument("--model", choices=["maxwell", "cmfp"], default=default_model)
        p.add_argument("--c", type=_finite_float, default=1.0, help="Maxwell model parameter in (0, 1]")
    p.add_argument("--grid", type=_positive_int, default=None, help="spectral nodes per quadrature panel (>= 64)")
    p.add_argument("--tol", type=_finite_float, default=1e-10, help="source-iteration tolerance of the oracle")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None, help="output directory (default: primary artifact to stdout)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled test functions")
    p.add_argument("--config", default=None, help="file of key = value defaults")


def build_parser():
    parser = argparse.ArgumentParser(prog="kinetic-case", description="Singular-eigenfunction toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    parser.subcommands = sub.choices

    p = sub.add_parser("dispersion", help="tabulate lambda^+ and theta on the spectrum")
    _add_common(p)
    p.add_argument("--points", type=_positive_int, default=200)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("xfunction", help="tabulate theta, gamma and X; check the representation")
    _add_common(p)
    p.add_argument("--points", type=_positive_int, default=200)
    p.set_defaults(func=cmd_xfunction)

    p = sub.add_parser("verify", help="run verification suites")
    _add_common(p, default_model=None)
    p.add_argument("--suite", choices=["theorems", "canonical", "closure", "all"], default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="solve a half-space problem analytically")
    p.add_argument("problem", choices=["kramers", "diffusion"])
    _add_common(p, model=False)
    p.add_argument("--c", type=_finite_float, default=0.5)
    p.add_argument("--gv", type=_finite_float, default=1.0)
    p.add_argument("--gn", type=_finite_float, default=1.0)
    p.add_argument("--points", type=_positive_int, default=40, help="velocity points per h slice")
    p.add_argument("--oracle", action="store_true", default=False, help="also compare with the discrete-ordinates solver")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="run the discrete-ordinates solver")
    p.add_argument("problem", choices=["kramers", "diffusion"])
    _add_common(p, model=False)
    p.add_argument("--c", type=_finite_float, default=0.5)
    p.add_argument("--gv", type=_finite_float, default=1.0)
    p.add_argument("--gn", type=_finite_float, default=1.0)
    p.add_argument("--cells", type=_positive_int, default=2000)
    p.add_argument("--ordinates", type=_positive_int, default=64)
    p.add_argument("--length", type=_finite_float, default=25.0)
    p.add_argument("--study", action="store_true", default=False, help="add a three-level refinement study")
    p.set_defaults(func=cmd_oracle)
    return parser


def read_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is None:
        return parser, args
    config = read_config(args.config)
    # re-parse with the file values as defaults of the chosen subcommand
    subparser = parser.subcommands[args.command]
    known = {a.dest: a for a in subparser._actions}
    for key, value in config.items():
        if key not in known or key in ("help", "config", "problem"):
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        action = known[key]
        if action.nargs == 0:
            value = value.lower() in ("1", "true", "yes", "on")
        subparser.set_defaults(**{key: value})
    return parser, parser.parse_args(argv)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        parser, args = parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"kinetic-case: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"kinetic-case {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except KineticCaseError as exc:
        sys.stderr.write(f"kinetic-case {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_FAILURE


def _setup(fn):
    """Run argument validation; domain errors there are usage errors."""
    try:
        return fn()
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _check_grid(args):
    if args.grid is not None and args.grid < 64:
        raise UsageError("--grid must be at least 64")


# -- commands ---------------------------------------------------------------
def cmd_dispersion(args):
    model = _setup(lambda: _model_from(args))
    _check_grid(args)
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    table = build_theta(model, args.grid)
    hi = model.spectrum_end()
    mu = np.linspace(0.0, hi, args.points)
    theta = np.empty_like(mu)
    theta[1:-1] = table(mu[1:-1])
    theta[0], theta[-1] = table.endpoint_limits
    lam = model.lambda_plus(mu)
    rows = np.column_stack([mu, lam.real, lam.imag, theta])
    artifacts = {"dispersion": Table(["mu", "re_lambda_plus", "im_lambda_plus", "theta"], rows)}
    _emit(args, artifacts, "dispersion")
    return EXIT_OK


def cmd_xfunction(args):
    model = _setup(lambda: _model_from(args))
    _check_grid(args)
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    xfn = CanonicalX(model, build_theta(model, args.grid))
    hi = model.spectrum_end()
    # interior points only: gamma is defined on the open spectrum
    mu = np.linspace(0.0, hi, args.points + 2)[1:-1]
    theta_gamma = Table(["mu", "theta", "gamma"], np.column_stack([mu, xfn.theta(mu), xfn.gamma(mu)]))
    z = np.asarray(default_samples(model), dtype=complex)
    X = xfn.X(z)
    x_values = Table(["re_z", "im_z", "re_X", "im_X"], np.column_stack([z.real, z.imag, X.real, X.imag]))
    residual = xfn.identity_residual()
    report = {
        "model": model.name,
        "normalization": xfn.normalization.value,
        "winding": xfn.theta.kappa,
        "identity_residual": residual,
        "identity_tolerance": 1e-6,
        "gamma_max_imag_residue": GammaWeight(xfn).max_imag_residue(),
        "anchor": "x-representation",
    }
    if model.kind == "cmfp":
        m0, m1 = xfn.moments()
        report.update({"V1": xfn.v1(), "moment_zero": m0, "moment_one": m1})
    report["pass"] = bool(residual < 1e-6)
    artifacts = {"theta_gamma": theta_gamma, "x_values": x_values, "xfunction_report": report}
    _emit(args, artifacts, "theta_gamma" if args.format == "csv" else "xfunction_report")
    return EXIT_OK if report["pass"] else EXIT_FAILURE


def cmd_verify(args):
    from .verify import default_models, run_suites

    _check_grid(args)
    if args.model is None:
        models = default_models()
    else:
        models = [_setup(lambda: _model_from(args))]
    report = run_suites(args.suite, models, args.grid, args.seed)
    _emit(args, {"verify_report": report}, "verify_report")
    return EXIT_OK if report["pass"] else EXIT_FAILURE


def _problem_from(args):
    from .halfspace import DiffusionProblem, KramersProblem

    if args.problem == "kramers":
        return KineticModel.cmfp(), KramersProblem(args.gv)
    return KineticModel.maxwell(args.c), DiffusionProblem(args.c, args.gn)


def _velocity_slice(model, n):
    # an even count of symmetric points never lands on mu = 0
    n += n % 2
    end = 0.975 if model.kind == "cmfp" else 3.0
    return np.linspace(-end, end, n)


SLICE_X = (0.0, 0.5, 1.0, 2.0, 5.0)
PROFILE_X = (0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 7.5, 10.0, 15.0, 20.0, 30.0)


def cmd_solve(args):
    from .halfspace import solve_diffusion, solve_kramers

    model, problem = _setup(lambda: _problem_from(args))
    _check_grid(args)
    if args.problem == "kramers":
        sol = solve_kramers(problem, args.grid)
    else:
        sol = solve_diffusion(problem, args.grid)
    summary = sol.summary()
    if args.problem == "kramers":
        summary["U0"] = sol.constant
        summary["V1"] = sol.pairing.xfn.v1()
    eta = sol.coefficient.eta
    artifacts = {
        "summary": summary,
        "coefficient": Table(["eta", "a"], np.column_stack([eta, sol.coefficient.values])),
    }
    mu = _velocity_slice(model, args.points)
    rows = [np.column_stack([np.full(mu.shape, x), mu, sol.evaluate_h(x, mu)]) for x in SLICE_X]
    artifacts["h_slices"] = Table(["x", "mu", "h"], np.vstack(rows))
    prof = sol.moment_profile(np.array(PROFILE_X))
    artifacts["moment_profile"] = Table(
        ["x", "m", "m_as", "defect"], np.column_stack([prof["x"], prof["m"], prof["m_as"], prof["defect"]])
    )
    # wall residual relative to the driving gradient (G_v) or the background (G_n/(1-c))
    scale = abs(problem.G_v) if args.problem == "kramers" else abs(problem.background)
    ok = summary["residual_stats"]["boundary_max"] <= 1e-4 * scale
    summary["pass"] = bool(ok)
    if args.oracle:
        from .oracle import OracleConfig, compare, solve_transport

        cfg = _setup(lambda: OracleConfig(sweep_tol=args.tol))
        _setup(cfg.companion)
        report = compare(sol, solve_transport(model, problem, cfg))
        artifacts["comparison"] = report
        ok = ok and report["pass"]
    _emit(args, artifacts, "summary")
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_oracle(args):
    from .oracle import OracleConfig, extract_constant, refinement_study, solve_transport

    model, problem = _setup(lambda: _problem_from(args))
    cfg = _setup(lambda: OracleConfig(
        domain_length=args.length, cells=args.cells, ordinates=args.ordinates, sweep_tol=args.tol
    ))
    _setup(cfg.companion)
    if args.study:
        study, sol = refinement_study(model, problem, cfg)
    else:
        study, sol = None, solve_transport(model, problem, cfg)
    value, uncertainty = extract_constant(sol)
    report = {
        "problem": args.problem,
        "parameters": problem.parameters(),
        "model": model.name,
        "domain_length": cfg.domain_length,
        "cells": cfg.cells,
        "ordinates": cfg.ordinates,
        "sweeps": sol.sweeps,
        "last_delta": sol.last_delta,
        "spectral_radius": sol.spectral_radius,
        "far_field_constant": value,
        "uncertainty": uncertainty,
    }
    if args.problem == "kramers":
        report["U0"] = 0.5 * value
    if study is not None:
        report["refinement"] = study
    mu = sol.mu
    field = np.column_stack([np.repeat(sol.x, mu.size), np.tile(mu, sol.x.size), sol.h.ravel()])
    artifacts = {"oracle_report": report, "field": Table(["x", "mu", "h"], field)}
    _emit(args, artifacts, "oracle_report")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
