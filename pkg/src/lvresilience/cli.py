"""Command-line front end: ``lvres <command> [options]``.

Every command writes a single CSV or JSON document, to ``--output`` when
given (relative paths resolve against ``$LVRES_OUTPUT_DIR``) and to stdout
otherwise. Options may also come from a ``key = value`` file passed with
``--config``; flags on the command line win.

Exit codes: 0 success, 2 invalid input, 3 parameters outside the strong
competition regime, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .errors import InvalidParameters, LVError, NotStrongCompetition, OutOfDomain
from .integrator import BasinLabel, Direction, IntegrationConfig, integrate
from .io import csv_text, json_text, output_path, write_text
from .limits import DEFAULT_WINDOW, LimitDirection, limit_study
from .model import (DimensionalParams, NondimParams, classify_regime, equilibria,
                    nondimensionalize, require_strong, saddle_spectrum)
from .resilience import latitude, resilience_report
from .sensitivity import PARAM_NAMES, sensitivity_table
from .separatrix import (SeparatrixBuildConfig, compute_separatrix, eval_s, integral_residual,
                         model_separatrix)

EXIT_OK, EXIT_INPUT, EXIT_REGIME, EXIT_NUMERIC = 0, 2, 3, 4
DIMENSIONAL = ("rn", "ri", "kn", "ki", "a", "b")


class UsageError(Exception):
    pass


def float_list(text: str) -> list[float]:
    try:
        vals = [float(t) for t in str(text).replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def window_arg(text: str) -> tuple[float, float]:
    vals = float_list(text)
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise argparse.ArgumentTypeError(f"window must be 'lo,hi' with lo < hi, got {text!r}")
    return vals[0], vals[1]


def point_list(text: str) -> list[tuple[float, float]]:
    pts = []
    for chunk in str(text).split(";"):
        if not chunk.strip():
            continue
        parts = chunk.split(",")
        try:
            x, y = (float(p) for p in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(f"initial conditions must be 'x,y;x,y;...', got {text!r}")
        pts.append((x, y))
    if not pts:
        raise argparse.ArgumentTypeError("no initial conditions given")
    return pts


def parse_vary(spec: str) -> tuple[str, list[float]]:
    """``name=v1,v2,...`` or ``name=lo:hi:count`` (inclusive linspace)."""
    name, sep, values = str(spec).partition("=")
    name = name.strip()
    if not sep or name not in PARAM_NAMES:
        raise UsageError(f"grid spec must look like 'alpha=1.5,2,3', got {spec!r}")
    try:
        if ":" in values:
            lo, hi, n = values.split(":")
            n = int(n)
            if n < 1:
                raise ValueError
            vals = np.linspace(float(lo), float(hi), n).tolist()
        else:
            vals = [float(v) for v in values.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"malformed grid values in {spec!r}") from None
    if not vals:
        raise UsageError(f"no values in grid spec {spec!r}")
    return name, vals


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment. Dashes in keys become underscores."""
    out = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{n}: expected 'key = value'")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _add_params(p):
    g = p.add_argument_group("parameters (nondimensional or dimensional)")
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--delta", type=float)
    g.add_argument("--rn", type=float, help="native growth rate")
    g.add_argument("--ri", type=float, help="invader growth rate")
    g.add_argument("--kn", type=float, help="native carrying capacity")
    g.add_argument("--ki", type=float, help="invader carrying capacity")
    g.add_argument("--a", type=float, help="effect of the invader on the native")
    g.add_argument("--b", type=float, help="effect of the native on the invader")


def _add_common(p):
    _add_params(p)
    p.add_argument("--config", help="file of 'key = value' lines")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--rtol", type=float, default=1e-9, help="classification relative tolerance")
    p.add_argument("--atol", type=float, default=1e-11, help="classification absolute tolerance")
    p.add_argument("--max-time", type=float, default=1e4)
    p.add_argument("--workers", type=int, default=1)


def _add_curve(p):
    p.add_argument("--xmax", type=float, default=3.0, help="right end of the curve domain")
    p.add_argument("--eigen-offset", type=float, default=1e-7)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lvres", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="regime, equilibria and saddle spectrum (JSON)")
    _add_common(p)

    p = sub.add_parser("separatrix", help="separatrix on the knot grid (CSV)")
    _add_common(p)
    _add_curve(p)
    p.add_argument("--knots", type=int, default=512)
    p.add_argument("--with-model", action="store_true", help="add the power-law model column s_star")
    p.add_argument("--with-residual", action="store_true", help="add the integral-equation residual")

    p = sub.add_parser("resilience", help="precariousness and latitude (JSON)")
    _add_common(p)
    _add_curve(p)
    p.add_argument("--mc-n", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--x0", type=float_list, help="precariousness sample points")
    p.add_argument("--grid", type=int, help="basin grid resolution")
    p.add_argument("--grid-output", help="basin grid CSV (default: <output stem>_basin.csv)")

    p = sub.add_parser("sensitivity", help="ds/dalpha, ds/dbeta, ds/ddelta on a grid (CSV)")
    _add_common(p)
    _add_curve(p)
    p.add_argument("--x", type=float_list, help="grid points (default: 50 points in (0, 1])")

    p = sub.add_parser("sweep", help="curve heights, derivatives and latitude over a parameter grid (CSV)")
    _add_common(p)
    _add_curve(p)
    p.add_argument("--vary", action="append", default=None,
                   help="'name=v1,v2,...' or 'name=lo:hi:count'; at most two")
    p.add_argument("--x", type=float_list, default=[0.25, 0.5, 0.75])

    p = sub.add_parser("limits", help="deviation from the singular limits along a delta ladder (CSV)")
    _add_common(p)
    _add_curve(p)
    p.add_argument("--direction", choices=[d.value for d in LimitDirection] + ["both"],
                   default="both")
    p.add_argument("--ladder", type=float_list, help="delta values (single direction only)")
    p.add_argument("--window", type=window_arg, default=DEFAULT_WINDOW)

    p = sub.add_parser("phase-portrait", help="forward trajectories with basin labels (CSV)")
    _add_common(p)
    p.add_argument("--ic", type=point_list, help="initial conditions 'x,y;x,y;...'")
    p.add_argument("--ic-grid", type=int, help="n x n cell-centre initial conditions in [0,1]^2")
    p.add_argument("--stride", type=int, default=1, help="keep every k-th accepted step")
    return parser


def _apply_config(parser, argv):
    """Re-parse with defaults taken from the config file named on the command line."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    values = read_config(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in values.items():
        action = known.get(key)
        if action is None or key in ("config", "help"):
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
        elif isinstance(action, argparse._AppendAction):
            defaults[key] = [v.strip() for v in raw.split("|")]
        else:
            # argparse applies the option's type to string defaults
            defaults[key] = raw
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def resolve_params(args) -> NondimParams:
    nondim = [getattr(args, k) for k in ("alpha", "beta", "delta")]
    dim = [getattr(args, k) for k in DIMENSIONAL]
    has_nd = any(v is not None for v in nondim)
    has_d = any(v is not None for v in dim)
    if has_nd and has_d:
        raise UsageError("give either --alpha/--beta/--delta or the dimensional parameters, not both")
    if has_d:
        if any(v is None for v in dim):
            raise UsageError("dimensional parameters need all of --rn --ri --kn --ki --a --b")
        rn, ri, kn, ki, a, b = dim
        return nondimensionalize(DimensionalParams(r_N=rn, r_I=ri, K_N=kn, K_I=ki, a=a, b=b))
    if any(v is None for v in nondim):
        raise UsageError("missing --alpha, --beta or --delta")
    return NondimParams(*nondim)


def _icfg(args) -> IntegrationConfig:
    return IntegrationConfig(rel_tol=args.rtol, abs_tol=args.atol, max_time=args.max_time)


def _build_cfg(args, count=512) -> SeparatrixBuildConfig:
    return SeparatrixBuildConfig(eigen_offset=args.eigen_offset, x_max=args.xmax,
                                 resample_count=count)


def cmd_analyze(args, q):
    regime = classify_regime(q)
    eq = equilibria(q)
    out = {
        "params": q.as_dict(),
        "regime": regime.kind.value,
        "warning": regime.condition,
        "equilibria": {k: [p.x, p.y] for k, p in eq.points().items()},
        "labels": dict(eq.labels),
        "spectrum": None,
    }
    if regime.is_strong:
        out["spectrum"] = saddle_spectrum(q).as_dict()
    return json_text(out)


def cmd_separatrix(args, q):
    require_strong(q)
    if args.knots < 3:
        raise UsageError("--knots must be at least 3")
    c = compute_separatrix(q, _build_cfg(args, args.knots))
    xs = c.knots(args.knots)
    ys = eval_s(c, xs)
    header = ["x", "y"]
    cols = [xs, ys]
    if args.with_model:
        header.append("s_star")
        cols.append(model_separatrix(q, xs))
    if args.with_residual:
        header.append("residual")
        cols.append(np.array([integral_residual(c, x) if x > 0 else 0.0 for x in xs]))
    return csv_text(header, zip(*cols))


def cmd_resilience(args, q):
    require_strong(q)
    if args.mc_n < 100:
        raise UsageError("--mc-n must be at least 100")
    if args.grid is not None and args.grid < 2:
        raise UsageError("--grid must be at least 2")
    c = compute_separatrix(q, _build_cfg(args))
    rep = resilience_report(c, args.x0, args.mc_n, args.seed, args.grid, _icfg(args),
                            args.workers)
    extra = {}
    if rep.basin_grid is not None:
        if args.grid_output:
            gpath = args.grid_output
        elif args.output:
            stem = Path(args.output)
            gpath = str(stem.with_name(stem.stem + "_basin.csv"))
        else:
            gpath = "basin.csv"
        extra[output_path(gpath)] = rep.basin_csv()
    return rep.to_json(), extra


def cmd_sensitivity(args, q):
    require_strong(q)
    c = compute_separatrix(q, _build_cfg(args))
    xs = args.x if args.x is not None else np.linspace(0.0, min(1.0, c.x_max), 51)[1:]
    table = sensitivity_table(c, xs)
    return csv_text(("x", "dsda", "dsdb", "dsdd"), table)


def _sweep_point(q, xs, cfg):
    c = compute_separatrix(q, cfg)
    xs = [x for x in xs if x <= c.x_max]
    s = eval_s(c, np.asarray(xs, float)) if xs else np.empty(0)
    table = sensitivity_table(c, xs) if xs else np.empty((0, 4))
    lat = latitude(c)
    return [(q.alpha, q.beta, q.delta, x, s[i], *table[i, 1:], lat) for i, x in enumerate(xs)]


def cmd_sweep(args, q):
    specs = [parse_vary(v) for v in (args.vary or [])]
    if not 1 <= len(specs) <= 2:
        raise UsageError("sweep needs one or two --vary specs")
    if len(specs) == 2 and specs[0][0] == specs[1][0]:
        raise UsageError("the two --vary specs must name different parameters")
    if any(x <= 0 for x in args.x):
        raise UsageError("--x values must be positive")
    grid = [q.replace(**{specs[0][0]: v}) for v in specs[0][1]]
    if len(specs) == 2:
        grid = [p.replace(**{specs[1][0]: v}) for p in grid for v in specs[1][1]]
    for p in grid:
        require_strong(p)
    cfg = _build_cfg(args)
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        # map preserves grid order regardless of completion order
        blocks = list(pool.map(lambda p: _sweep_point(p, args.x, cfg), grid))
    header = ("alpha", "beta", "delta", "x", "s", "ds_dalpha", "ds_dbeta", "ds_ddelta", "latitude")
    return csv_text(header, [row for b in blocks for row in b])


def cmd_limits(args, q):
    require_strong(q)
    cfg = _build_cfg(args)
    if args.direction == "both":
        if args.ladder is not None:
            raise UsageError("--ladder needs a single --direction")
        rows = []
        for d in LimitDirection:
            study = limit_study(q, d, None, args.window, cfg)
            rows += [(d.value, a, b) for a, b in zip(study.ladder, study.deviations)]
        return csv_text(("direction", "delta", "deviation"), rows)
    try:
        study = limit_study(q, args.direction, args.ladder, args.window, cfg)
    except InvalidParameters as exc:
        raise UsageError(str(exc)) from None
    return study.to_csv()


def cmd_phase_portrait(args, q):
    if args.ic is None and args.ic_grid is None:
        raise UsageError("give --ic or --ic-grid")
    if args.stride < 1:
        raise UsageError("--stride must be at least 1")
    pts = list(args.ic or [])
    if args.ic_grid is not None:
        if args.ic_grid < 1:
            raise UsageError("--ic-grid must be positive")
        c = (np.arange(args.ic_grid) + 0.5) / args.ic_grid
        pts += [(x, y) for y in c for x in c]
    cfg = _icfg(args)
    rows = []
    for k, p in enumerate(pts):
        tr = integrate(p, q, Direction.FORWARD, cfg)
        r = tr.stop_reason
        label = BasinLabel.UNDECIDED.value
        if r.which == "PN":
            label = BasinLabel.NATIVE_WINS.value
        elif r.which == "PI":
            label = BasinLabel.INVADER_WINS.value
        idx = list(range(0, len(tr), args.stride))
        if idx[-1] != len(tr) - 1:
            idx.append(len(tr) - 1)
        rows += [(k, tr.t[i], tr.x[i], tr.y[i], label) for i in idx]
    return csv_text(("traj_id", "t", "x", "y", "label"), rows)


COMMANDS = {
    "analyze": cmd_analyze,
    "separatrix": cmd_separatrix,
    "resilience": cmd_resilience,
    "sensitivity": cmd_sensitivity,
    "sweep": cmd_sweep,
    "limits": cmd_limits,
    "phase-portrait": cmd_phase_portrait,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        q = resolve_params(args)
        result = COMMANDS[args.command](args, q)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, InvalidParameters, OutOfDomain) as exc:
        print(f"lvres: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotStrongCompetition as exc:
        print(f"lvres: error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (LVError, ArithmeticError, FloatingPointError) as exc:
        print(f"lvres: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text, extra = result if isinstance(result, tuple) else (result, {})
    try:
        if args.output:
            write_text(output_path(args.output), text)
        else:
            sys.stdout.write(text)
        for path, body in extra.items():
            write_text(path, body)
    except OSError as exc:
        print(f"lvres: error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
