"""Command-line front end.

    fracpq eigen    --s 0.5 --r 2 --n 32 --interval 0 1
    fracpq solve    --s1 0.7 --p 3 --s2 0.5 --q 2 --alpha 40 --beta 10
    fracpq curve    --s1 0.7 --p 3 --s2 0.5 --q 2 --theta-min -1 --theta-max 3 --steps 17
    fracpq region   --s1 0.7 --p 3 --s2 0.5 --q 2 --alpha-grid 20 40 --beta-grid 10 20
    fracpq proptest --seed 42 --cases 1000
    fracpq li-check --s1 0.8 --p 3 --s2 0.7 --q 2 --n 64

Every command accepts ``--config FILE`` (flat ``key = value`` lines, keys
named like the long flags) with flags taking precedence.  Exit codes: 0 ok,
1 invalid input, 2 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .eigen import SolverOptions, first_eigenpair, li_condition, li_distance
from .energy import assemble
from .grid import FractionalParams, Grid, Interval, PQConfig
from .inequalities import run_all_suites
from .pq import FOUND, INCONCLUSIVE, Functionals, PQOptions, solve
from .records import ResultRecord
from .threshold import (
    CurveOptions,
    NonConvergenceError,
    build_context,
    lambda_star,
    monotonicity_report,
    region_classify,
)

log = logging.getLogger("fracpq")

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(",", " ").split()]


def _interval(text: str) -> list[float]:
    vals = _floats(text)
    if len(vals) != 2:
        raise ValueError("interval needs two numbers")
    return vals


# key -> converter for config-file values
CONFIG_KEYS = {
    "s": float, "r": float, "s1": float, "p": float, "s2": float, "q": float,
    "n": int, "seed": int, "tol": float, "interval": _interval,
    "alpha": float, "beta": float, "theta_min": float, "theta_max": float, "steps": int,
    "alpha_grid": _floats, "beta_grid": _floats, "cases": int, "emit": str, "out": str,
}


def load_config(path) -> dict:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    out = {}
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return out


class Settings:
    """Flag values layered over config-file values layered over defaults."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = load_config(args.config) if getattr(args, "config", None) else {}

    def get(self, key, default=None, required=False):
        value = getattr(self.args, key, None)
        if value is None:
            value = self.config.get(key)
        if value is None:
            if required:
                raise UsageError(f"missing required option --{key.replace('_', '-')}")
            return default
        return value

    def interval(self) -> Interval:
        a, b = self.get("interval", [0.0, 1.0])
        return Interval(float(a), float(b))

    def grid(self) -> Grid:
        return Grid(self.interval(), int(self.get("n", 32)))

    def problem(self) -> PQConfig:
        return PQConfig(self.interval(), float(self.get("s1", required=True)), float(self.get("p", required=True)),
                        float(self.get("s2", required=True)), float(self.get("q", required=True)))

    def pq_options(self) -> PQOptions:
        tol = self.get("tol")
        seed = int(self.get("seed", 0))
        return PQOptions(seed=seed) if tol is None else PQOptions(residual_tol=float(tol), seed=seed)

    def curve_options(self) -> CurveOptions:
        return CurveOptions(tol=self.get("tol"), pq=PQOptions(seed=int(self.get("seed", 0))))


def _emit(settings: Settings, record: ResultRecord, summary: list[tuple]):
    fmt = settings.get("emit")
    out = settings.get("out")
    if fmt is None and out is not None:
        fmt = "json" if str(out).endswith(".json") else "csv"
    if fmt is None:
        for key, value in summary:
            print(f"{key}: {value}")
        return
    text = record.to_json() + "\n" if fmt == "json" else record.to_csv()
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _inputs(settings: Settings, keys) -> dict:
    out = {}
    for k in keys:
        v = settings.get(k)
        if v is not None:
            out[k] = list(v) if isinstance(v, (list, tuple)) else v
    return out


# ----------------------------------------------------------------------

def cmd_eigen(settings: Settings) -> int:
    params = FractionalParams(float(settings.get("s", required=True)), float(settings.get("r", required=True)))
    grid = settings.grid()
    tol = settings.get("tol")
    opts = SolverOptions(seed=int(settings.get("seed", 0)),
                         **({} if tol is None else {"residual_tol": float(tol)}))
    pair = first_eigenpair(assemble(grid, params), opts)
    record = ResultRecord(
        "eigen", _inputs(settings, ["s", "r", "n", "interval", "seed", "tol"]),
        {"lambda": pair.lam, "residual": pair.residual, "converged": pair.converged},
        {"iterations": pair.iterations},
        ["x", "phi"], [[float(x), float(v)] for x, v in zip(grid.nodes, pair.values)], __version__,
    )
    _emit(settings, record, [("lambda", f"{pair.lam:.12g}"), ("residual", f"{pair.residual:.3e}"),
                             ("iterations", pair.iterations), ("converged", pair.converged)])
    return EXIT_OK if pair.converged else EXIT_NONCONVERGED


def cmd_solve(settings: Settings) -> int:
    cfg = settings.problem()
    grid = settings.grid()
    alpha = float(settings.get("alpha", required=True))
    beta = float(settings.get("beta", required=True))
    F = Functionals.build(cfg, grid, alpha, beta)
    rep = solve(F, settings.pq_options())
    d = rep.diagnostics
    outputs = {
        "status": rep.status, "method": rep.method, "residual": rep.residual,
        "min_interior": rep.min_interior, "max_norm": rep.max_norm,
        "H": d.H, "G": d.G, "I": d.I, "t_scale": d.t_scale,
        "lambda1_p": F.eigenpair("p").lam, "lambda1_q": F.eigenpair("q").lam,
    }
    rows = [] if rep.u is None else [[float(x), float(v)] for x, v in zip(grid.nodes, rep.u.values)]
    record = ResultRecord("solve", _inputs(settings, ["s1", "p", "s2", "q", "n", "interval", "alpha", "beta",
                                                      "seed", "tol"]),
                          outputs, {"iterations": rep.iterations, "note": rep.note}, ["x", "u"], rows, __version__)
    _emit(settings, record, [(k, v) for k, v in outputs.items()])
    return EXIT_NONCONVERGED if rep.status == INCONCLUSIVE else EXIT_OK


def cmd_curve(settings: Settings) -> int:
    cfg = settings.problem()
    opts = settings.curve_options()
    ctx = build_context(cfg, settings.grid(), opts)
    tmin = settings.get("theta_min")
    tmax = settings.get("theta_max")
    tmin = ctx.theta_star - 2.0 if tmin is None else float(tmin)
    tmax = ctx.theta_star_plus + 2.0 if tmax is None else float(tmax)
    steps = int(settings.get("steps", 33))
    if not tmin < tmax or steps < 2:
        raise ValueError("need theta-min < theta-max and at least two steps")
    samples, rows, hint, interrupted = [], [], None, False
    try:
        for th in np.linspace(tmin, tmax, steps):
            s = lambda_star(ctx, float(th), opts, hint=hint)
            samples.append(s)
            rows.append([s.theta, s.lambda_star, s.alpha, s.lambda_star, s.bracket_width])
            hint = s.lambda_star if np.isfinite(s.lambda_star) else None
            log.info("theta=%.6g lambda*=%.10g (%s)", s.theta, s.lambda_star, s.status)
    except KeyboardInterrupt:
        interrupted = True
    mono = monotonicity_report(samples, ctx.tol(opts))
    outputs = {
        "lambda1_p": ctx.lambda1_p, "lambda1_q": ctx.lambda1_q, "alpha_star": ctx.alpha_star,
        "theta_star": ctx.theta_star, "theta_star_plus": ctx.theta_star_plus,
        "monotone": mono.passed, "lambda_violations": mono.lambda_violations,
        "shifted_violations": mono.shifted_violations, "tolerance": mono.tolerance,
        "complete": not interrupted,
    }
    statuses = [s.status for s in samples]
    record = ResultRecord("curve", _inputs(settings, ["s1", "p", "s2", "q", "n", "interval", "theta_min",
                                                      "theta_max", "steps", "seed", "tol"]),
                          outputs, {"sample_status": statuses, "notes": [s.note for s in samples]},
                          ["theta", "lambda_star", "alpha", "beta", "bracket"], rows, __version__)
    _emit(settings, record, [("samples", len(samples)), ("monotone", mono.passed)]
          + [(f"theta={r[0]:.6g}", f"lambda*={r[1]:.10g}") for r in rows])
    print(f"monotonicity: {'ok' if mono.passed else 'VIOLATED'} "
          f"({len(mono.lambda_violations)} lambda*, {len(mono.shifted_violations)} lambda*+theta)", file=sys.stderr)
    if interrupted:
        return 130
    return EXIT_NONCONVERGED if "inconclusive" in statuses else EXIT_OK


def cmd_region(settings: Settings) -> int:
    cfg = settings.problem()
    opts = settings.curve_options()
    ctx = build_context(cfg, settings.grid(), opts)
    alphas = settings.get("alpha_grid")
    betas = settings.get("beta_grid")
    if alphas is None or betas is None:
        d = 0.5 * min(ctx.lambda1_p, ctx.lambda1_q)
        alphas = alphas or [ctx.lambda1_p - d, ctx.lambda1_p + d]
        betas = betas or [ctx.lambda1_q - d, ctx.lambda1_q + d]
    rows, tags = [], []
    for a in alphas:
        for b in betas:
            v = region_classify(ctx, float(a), float(b), opts)
            rows.append([float(a), float(b), v.verdict])
            tags.append({"tag": v.theorem_ref, "consistent": v.consistent,
                         "solver": None if v.evidence is None else v.evidence.status})
    outputs = {"lambda1_p": ctx.lambda1_p, "lambda1_q": ctx.lambda1_q, "alpha_star": ctx.alpha_star,
               "li_distance": ctx.li_distance}
    record = ResultRecord("region", _inputs(settings, ["s1", "p", "s2", "q", "n", "interval", "alpha_grid",
                                                       "beta_grid", "seed", "tol"]),
                          outputs, {"points": tags}, ["alpha", "beta", "verdict"], rows, __version__)
    _emit(settings, record, [(f"({r[0]:.6g}, {r[1]:.6g})", r[2]) for r in rows])
    return EXIT_OK


def cmd_proptest(settings: Settings) -> int:
    seed = int(settings.get("seed", 0))
    cases = int(settings.get("cases", 1000))
    if cases < 1:
        raise ValueError("cases must be positive")
    results = run_all_suites(cases, seed)
    rows = [[r.family, r.variant, r.cases, r.cases - r.violations, r.violations] for r in results]
    record = ResultRecord("proptest", {"seed": seed, "cases": cases},
                          {"passed": all(r.passed for r in results)}, {},
                          ["family", "variant", "cases", "passed", "violations"], rows, __version__)
    _emit(settings, record, [(f"{r[0]} {r[1]}", f"{r[3]}/{r[2]} passed") for r in rows])
    return EXIT_OK


def cmd_li_check(settings: Settings) -> int:
    cfg = settings.problem()
    ctx = build_context(cfg, settings.grid())
    dist = ctx.li_distance
    window = li_condition(cfg)
    verdict = ("independent" if dist > 1e-3 else "dependent") if window else "no prediction"
    outputs = {"li_distance": dist, "in_window": window, "verdict": verdict,
               "lambda1_p": ctx.lambda1_p, "alpha_star": ctx.alpha_star,
               "gap": ctx.alpha_star - ctx.lambda1_p}
    record = ResultRecord("li-check", _inputs(settings, ["s1", "p", "s2", "q", "n", "interval"]),
                          outputs, {}, ["key", "value"], [[k, v] for k, v in outputs.items()], __version__)
    _emit(settings, record, list(outputs.items()))
    return EXIT_OK


COMMANDS = {
    "eigen": cmd_eigen, "solve": cmd_solve, "curve": cmd_curve,
    "region": cmd_region, "proptest": cmd_proptest, "li-check": cmd_li_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracpq", description="Fractional (p,q)-Laplacian toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="flat key = value file")
        p.add_argument("--n", type=int)
        p.add_argument("--interval", type=float, nargs=2, metavar=("A", "B"))
        p.add_argument("--seed", type=int)
        p.add_argument("--emit", choices=["csv", "json"])
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--tol", type=float)

    def problem(p):
        for name in ("s1", "p", "s2", "q"):
            p.add_argument(f"--{name}", type=float)

    p = sub.add_parser("eigen", help="first eigenpair of one operator")
    common(p)
    p.add_argument("--s", type=float)
    p.add_argument("--r", type=float)

    p = sub.add_parser("solve", help="positive solution at one (alpha, beta)")
    common(p)
    problem(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)

    p = sub.add_parser("curve", help="trace lambda*(theta)")
    common(p)
    problem(p)
    p.add_argument("--theta-min", type=float)
    p.add_argument("--theta-max", type=float)
    p.add_argument("--steps", type=int)

    p = sub.add_parser("region", help="classify a lattice of (alpha, beta) points")
    common(p)
    problem(p)
    p.add_argument("--alpha-grid", type=float, nargs="+")
    p.add_argument("--beta-grid", type=float, nargs="+")

    p = sub.add_parser("proptest", help="random inequality suites")
    common(p)
    p.add_argument("--cases", type=int)

    p = sub.add_parser("li-check", help="numerical independence of the two eigenfunctions")
    common(p)
    problem(p)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        settings = Settings(args)
        return COMMANDS[args.command](settings)
    except UsageError as exc:
        print(f"fracpq: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, OverflowError) as exc:
        print(f"fracpq: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NonConvergenceError as exc:
        print(f"fracpq: no convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
