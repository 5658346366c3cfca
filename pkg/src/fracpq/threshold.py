"""Threshold quantities of the (alpha, beta) plane and the curve lambda*(theta).

Along a ray theta = alpha - beta the problem has (alpha, beta) = (lam + theta, lam) and
lambda*(theta) is the supremum of lam with a positive solution.  It is
located by bisection on a numerical existence predicate, so every sample
carries its certificates: the solution found at the lower end and the failed
searches at the upper end.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from ._parallel import ordered_map
from .eigen import LI_THRESHOLD, Eigenpair, SolverOptions, first_eigenpair, li_distance
from .energy import _apply, _energy, assemble
from .grid import Grid, GridFunction, PQConfig, values_on
from .pq import FOUND, INCONCLUSIVE, Functionals, PQOptions, SolutionReport, solve

log = logging.getLogger(__name__)


class NonConvergenceError(RuntimeError):
    pass


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class CurveOptions:
    tol: float | None = None          # bracket width; default 1e-3 * max(1, lambda1_q)
    pq: PQOptions = field(default_factory=PQOptions)
    eigen: SolverOptions = field(default_factory=SolverOptions)
    max_bisections: int = 60
    li_threshold: float = LI_THRESHOLD
    eq_tol: float = 1e-9             # relative tolerance for "alpha == lambda1_p" etc.
    penalty_start: float = 1e2
    penalty_max: float = 1e10


@dataclass(frozen=True, eq=False)
class ThresholdContext:
    config: PQConfig
    grid: Grid
    lambda1_p: float
    lambda1_q: float
    phi_p: GridFunction
    phi_q: GridFunction
    alpha_star: float
    theta_star: float
    theta_star_plus: float
    functionals: Functionals
    pair_p: Eigenpair
    pair_q: Eigenpair

    def tol(self, opts: CurveOptions) -> float:
        return opts.tol if opts.tol is not None else 1e-3 * max(1.0, self.lambda1_q)

    def at(self, alpha: float, beta: float) -> Functionals:
        return self.functionals.with_parameters(alpha, beta)

    @property
    def li_distance(self) -> float:
        return li_distance(self.pair_p, self.pair_q)


def build_context(config: PQConfig, grid: Grid, opts: CurveOptions | None = None) -> ThresholdContext:
    opts = opts or CurveOptions()
    asm_p = assemble(grid, config.params_p)
    asm_q = assemble(grid, config.params_q)
    pair_p = first_eigenpair(asm_p, opts.eigen)
    pair_q = first_eigenpair(asm_q, opts.eigen)
    for name, pair in (("p", pair_p), ("q", pair_q)):
        if not pair.converged:
            raise NonConvergenceError(f"{name}-eigensolver stalled at residual {pair.residual:.3e}")
    phi_q = pair_q.values
    alpha_star = _energy(asm_p, phi_q) / float(np.sum(phi_q**config.p) * grid.h)
    F = Functionals(config, asm_p, asm_q, 0.0, 0.0, {"p": pair_p, "q": pair_q})
    return ThresholdContext(
        config, grid, pair_p.lam, pair_q.lam, pair_p.phi, pair_q.phi, alpha_star,
        pair_p.lam - pair_q.lam, alpha_star - pair_q.lam, F, pair_p, pair_q,
    )


def lambda_star_upper_bound(ctx: ThresholdContext, theta: float, v=None) -> float:
    """(E_p(v) + E_q(v^(p/q)) - min(0, theta ||v||_p^p)) / ||v||_p^p for positive v."""
    v = ctx.phi_q.values if v is None else values_on(ctx.grid, v)
    if np.any(v <= 0):
        raise ValueError("bound needs v > 0 at every node")
    p, q = ctx.config.p, ctx.config.q
    F = ctx.functionals
    norm = float(np.sum(v**p) * ctx.grid.h)
    num = _energy(F.asm_p, v) + _energy(F.asm_q, v ** (p / q)) - min(0.0, theta * norm)
    return num / norm


# ----------------------------------------------------------------------
# beta*(alpha): min of the q-quotient over {H_alpha <= 0}

def _quotient_and_grad(asm, u):
    r, h = asm.r, asm.grid.h
    e = _energy(asm, u)
    n = float(np.sum(np.abs(u) ** r) * h)
    R = e / n
    grad = r * (_apply(asm, u) - R * h * np.sign(u) * np.abs(u) ** (r - 1)) / n
    return R, grad


def beta_star_objective(ctx: ThresholdContext, alpha: float, rho: float, u):
    """Penalty objective R_q(u) + rho max(0, R_p(u) - alpha)^2 and its gradient.

    Both quotients are scale invariant, and R_p(u) <= alpha is H_alpha(u) <= 0.
    """
    u = values_on(ctx.grid, u)
    F = ctx.functionals
    rq, gq = _quotient_and_grad(F.asm_q, u)
    rp, gp = _quotient_and_grad(F.asm_p, u)
    viol = max(0.0, rp - alpha)
    return rq + rho * viol * viol, gq + 2.0 * rho * viol * gp


@dataclass
class BetaStarResult:
    value: float
    u: GridFunction
    H: float
    penalty: float
    starts: int


def _restore(ctx: ThresholdContext, alpha: float, u: np.ndarray) -> np.ndarray:
    """Blend towards phi_p until R_p <= alpha (phi_p itself has R_p = lambda1_p <= alpha)."""
    F = ctx.functionals
    phi = ctx.phi_p.values

    def quotient(s):
        w = (1 - s) * u / np.max(u) + s * phi / np.max(phi)
        return _energy(F.asm_p, w) / float(np.sum(w ** F.p) * ctx.grid.h), w

    if quotient(0.0)[0] <= alpha:
        return u
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if quotient(mid)[0] <= alpha:
            hi = mid
        else:
            lo = mid
    return quotient(hi)[1]


def beta_star(ctx: ThresholdContext, alpha: float, opts: CurveOptions | None = None) -> BetaStarResult:
    """inf of E_q(u)/||u||_q^q subject to H_alpha(u) <= 0, by penalty escalation."""
    opts = opts or CurveOptions()
    if alpha < ctx.lambda1_p * (1 - opts.eq_tol):
        raise InfeasibleError(f"alpha={alpha} is below lambda1_p={ctx.lambda1_p}: constraint set is empty")
    F = ctx.functionals
    phi_p, phi_q = ctx.phi_p.values, ctx.phi_q.values
    starts = [phi_q, 0.5 * (phi_p / phi_p.max() + phi_q / phi_q.max()), phi_p]
    bounds = [(1e-12, None)] * ctx.grid.n
    best = None
    for start in starts:
        u = start / np.max(start)
        rho = opts.penalty_start
        while True:
            res = scipy.optimize.minimize(
                lambda x: beta_star_objective(ctx, alpha, rho, x), u, jac=True,
                method="L-BFGS-B", bounds=bounds, options={"maxiter": 2000, "gtol": 1e-12, "ftol": 1e-15},
            )
            u = res.x / np.max(res.x)
            if rho >= opts.penalty_max:
                break
            rho *= 100.0
        u = _restore(ctx, alpha, u)
        value = _energy(F.asm_q, u) / float(np.sum(u**F.q) * ctx.grid.h)
        if best is None or value < best[0]:
            best = (value, u)
    value, u = best
    u = u / (float(np.sum(u**F.q) * ctx.grid.h)) ** (1.0 / F.q)
    H = _energy(F.asm_p, u) - alpha * float(np.sum(u**F.p) * ctx.grid.h)
    return BetaStarResult(float(value), GridFunction(ctx.grid, u), float(H), rho, len(starts))


# ----------------------------------------------------------------------
# lambda*(theta)

@dataclass
class CurveSample:
    theta: float
    lambda_star: float
    bracket_width: float
    existence_certificate: SolutionReport | None
    nonexistence_evidence: list
    lower: float = np.nan
    upper: float = np.nan
    status: str = "ok"
    note: str = ""

    @property
    def alpha(self) -> float:
        return self.lambda_star + self.theta


def _predicate(ctx: ThresholdContext, theta: float, lam: float, opts: CurveOptions, warm=None):
    F = ctx.at(lam + theta, lam)
    return solve(F, opts.pq, ctx.lambda1_p, ctx.lambda1_q, warm=warm)


def lambda_star(ctx: ThresholdContext, theta: float, opts: CurveOptions | None = None,
                hint: float | None = None) -> CurveSample:
    """Bisection for sup{lam : the problem at (lam + theta, lam) has a positive solution}.

    The lower end starts at lambda1_q + tol/4 or, failing that, lambda1_q -
    tol/4; the upper end is the a-priori bound.  ``hint`` (a nearby lambda*)
    only narrows the first bracket; each endpoint is still certified.
    """
    opts = opts or CurveOptions()
    tol = ctx.tol(opts)
    margin = 0.25 * tol
    evidence = []
    lo = lo_rep = None
    for cand in (ctx.lambda1_q + margin, ctx.lambda1_q - margin):
        rep = _predicate(ctx, theta, cand, opts)
        if rep.status == FOUND:
            lo, lo_rep = cand, rep
            break
        evidence.append((cand, rep))
    if lo is None:
        return CurveSample(theta, np.nan, np.inf, None, evidence, status="inconclusive",
                           note="no certified solution near lambda1_q")
    hi = lambda_star_upper_bound(ctx, theta)
    hi_rep = _predicate(ctx, theta, hi, opts, warm=lo_rep.u.values)
    if hi_rep.status == FOUND:
        return CurveSample(theta, np.nan, np.inf, lo_rep, evidence, lo, hi, "inconclusive",
                           "solution found above the a-priori bound")
    evidence.append((hi, hi_rep))
    inconclusive = hi_rep.status == INCONCLUSIVE

    def probe(lam):
        return _predicate(ctx, theta, lam, opts, warm=lo_rep.u.values)

    if hint is not None and lo < hint < hi:
        for cand in (hint + tol, hint - tol):
            if not lo < cand < hi:
                continue
            rep = probe(cand)
            if rep.status == FOUND:
                lo, lo_rep = cand, rep
            else:
                hi = cand
                evidence.append((cand, rep))
                inconclusive |= rep.status == INCONCLUSIVE
    for _ in range(opts.max_bisections):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        rep = probe(mid)
        if rep.status == FOUND:
            lo, lo_rep = mid, rep
        else:
            hi = mid
            evidence.append((mid, rep))
            inconclusive |= rep.status == INCONCLUSIVE
    # monotonicity probe: nothing should be found one tolerance above the bracket
    check = probe(hi + tol)
    status, note = "ok", ""
    if check.status == FOUND:
        status, note = "inconclusive", f"solution found at {hi + tol:.6g} above the bracket"
    elif inconclusive:
        # a stall near the fold leaves that end uncertified but the bracket intact
        note = "solver stalled at an upper probe"
    evidence.append((hi + tol, check))
    return CurveSample(theta, 0.5 * (lo + hi), hi - lo, lo_rep, evidence, lo, hi, status, note)


@dataclass
class MonotonicityReport:
    lambda_violations: list
    shifted_violations: list
    tolerance: float

    @property
    def passed(self) -> bool:
        return not self.lambda_violations and not self.shifted_violations


def monotonicity_report(samples, tol: float) -> MonotonicityReport:
    """Flag steps where lambda* rises or lambda* + theta falls by more than 2 tol."""
    lam_bad, sh_bad = [], []
    for a, b in zip(samples, samples[1:]):
        if b.lambda_star - a.lambda_star > 2 * tol:
            lam_bad.append((a.theta, b.theta))
        if (a.lambda_star + a.theta) - (b.lambda_star + b.theta) > 2 * tol:
            sh_bad.append((a.theta, b.theta))
    return MonotonicityReport(lam_bad, sh_bad, tol)


def trace_curve(ctx: ThresholdContext, theta_min: float, theta_max: float, steps: int,
                opts: CurveOptions | None = None, warm: bool = True):
    """Sample lambda* on an even theta grid; returns (samples, monotonicity report).

    With ``warm`` the samples run in order, each seeded by the previous
    lambda*; otherwise they are independent and may run concurrently.
    """
    if not theta_min < theta_max:
        raise ValueError("need theta_min < theta_max")
    if steps < 2:
        raise ValueError("need at least two steps")
    opts = opts or CurveOptions()
    thetas = np.linspace(theta_min, theta_max, steps)
    if warm:
        samples, hint = [], None
        for th in thetas:
            s = lambda_star(ctx, float(th), opts, hint=hint)
            samples.append(s)
            hint = s.lambda_star if np.isfinite(s.lambda_star) else None
    else:
        samples = ordered_map(lambda th: lambda_star(ctx, float(th), opts), thetas)
    return samples, monotonicity_report(samples, ctx.tol(opts))


# ----------------------------------------------------------------------
# classification of (alpha, beta)

EXISTS, NOT_EXISTS, BOUNDARY, UNKNOWN = "exists", "not_exists", "boundary", "unknown"


@dataclass
class RegionVerdict:
    alpha: float
    beta: float
    verdict: str
    theorem_ref: str
    evidence: SolutionReport | None = None
    sample: CurveSample | None = None
    consistent: bool = True


def _cmp(x: float, ref: float, eq_tol: float) -> int:
    if abs(x - ref) <= eq_tol * max(1.0, abs(ref)):
        return 0
    return -1 if x < ref else 1


def region_classify(ctx: ThresholdContext, alpha: float, beta: float,
                    opts: CurveOptions | None = None, solve_evidence: bool = True) -> RegionVerdict:
    """Classify (alpha, beta) by the existence theory, with numerical evidence attached.

    The theory decides the verdict; the attached solve is a cross-check and
    ``consistent`` records whether it agreed.
    """
    opts = opts or CurveOptions()
    a = _cmp(alpha, ctx.lambda1_p, opts.eq_tol)
    b = _cmp(beta, ctx.lambda1_q, opts.eq_tol)
    li_holds = ctx.li_distance > opts.li_threshold

    def attach(verdict, ref):
        rv = RegionVerdict(alpha, beta, verdict, ref)
        if solve_evidence:
            rep = solve(ctx.at(alpha, beta), opts.pq, ctx.lambda1_p, ctx.lambda1_q)
            rv.evidence = rep
            if verdict == EXISTS:
                rv.consistent = rep.status == FOUND
            elif verdict == NOT_EXISTS:
                rv.consistent = rep.status != FOUND
        return rv

    if (b < 0 and a <= 0) or (a < 0 and b == 0):
        return attach(NOT_EXISTS, "below-both-eigenvalues")
    if (a > 0 and b < 0) or (a < 0 and b > 0):
        return attach(EXISTS, "one-parameter-above")
    if a == 0 and b == 0:
        return attach(NOT_EXISTS if li_holds else EXISTS, "eigenvalue-corner")
    if b == 0:  # a > 0
        c = _cmp(alpha, ctx.alpha_star, opts.eq_tol)
        if c < 0 and li_holds:
            return attach(EXISTS, "q-edge-below-alpha-star")
        if c > 0:
            return attach(NOT_EXISTS, "q-edge-above-alpha-star")
        return RegionVerdict(alpha, beta, UNKNOWN, "q-edge-at-alpha-star")
    # a >= 0 and b > 0
    if not li_holds:
        return attach(NOT_EXISTS, "dependent-eigenfunctions")
    theta = alpha - beta
    sample = lambda_star(ctx, theta, opts)
    if sample.status != "ok":
        return RegionVerdict(alpha, beta, UNKNOWN, "curve-unresolved", sample=sample)
    tol = ctx.tol(opts)
    if beta < sample.lower:
        rv = attach(EXISTS, "below-curve")
    elif beta > sample.upper:
        rv = attach(NOT_EXISTS, "above-curve")
    elif theta > ctx.theta_star_plus + tol:
        rv = attach(NOT_EXISTS, "on-curve-flat-tail")
    elif abs(theta - ctx.theta_star_plus) <= tol:
        rv = RegionVerdict(alpha, beta, BOUNDARY, "on-curve-borderline")
    else:
        rv = RegionVerdict(alpha, beta, BOUNDARY, "on-curve")
    rv.sample = sample
    return rv
