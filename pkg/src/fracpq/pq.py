"""Variational solvers for the discrete (p,q) problem

    A_p(u) + B_q(u) = alpha |u|^(p-2) u + beta |u|^(q-2) u,   u = 0 outside.

Existence is certified numerically: a reported solution is a critical point
of I_+ (gradient max-norm below ``residual_tol``) with strictly positive
nodal values.  ``none_found`` only means the bounded search (starts times
iteration cap) produced nothing; it is not a proof of non-existence.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .eigen import Eigenpair, SolverOptions, first_eigenpair
from .energy import EnergyAssembly, _apply, _energy, _hessian, assemble
from .grid import Grid, GridFunction, PQConfig, values_on

log = logging.getLogger(__name__)

FOUND, NONE_FOUND, INCONCLUSIVE = "found", "none_found", "inconclusive"
_STATUS_RANK = {FOUND: 0, INCONCLUSIVE: 1, NONE_FOUND: 2}
# sup-norm below which a computed critical point is the trivial solution
ZERO_FLOOR = 1e-8


class UndefinedScaleError(ValueError):
    """H and G do not have opposite signs, so no Nehari rescaling exists."""


class OrderingError(ValueError):
    pass


class SupersolutionError(ValueError):
    pass


@dataclass(frozen=True)
class PQOptions:
    max_iterations: int = 4000
    residual_tol: float = 1e-8
    positivity_tol: float = 1e-8
    descent_tol: float = 1e-13
    contraction: float = 0.5
    sufficient_decrease: float = 1e-4
    multistart: int = 3
    seed: int = 0
    newton_iterations: int = 60

    def __post_init__(self):
        if min(self.residual_tol, self.positivity_tol, self.descent_tol) <= 0:
            raise ValueError("tolerances must be positive")
        if self.multistart < 1:
            raise ValueError("multistart must be at least 1")


@dataclass
class NehariDiagnostics:
    H: float
    G: float
    I: float
    t_scale: float | None = None


@dataclass
class SolutionReport:
    status: str
    u: GridFunction | None
    residual: float
    min_interior: float
    diagnostics: NehariDiagnostics
    method: str
    max_norm: float = 0.0
    iterations: int = 0
    note: str = ""

    @property
    def found(self) -> bool:
        return self.status == FOUND


def _pos(u):
    return np.maximum(u, 0.0)


class Functionals:
    """I_+, H_alpha, G_beta and their derivatives for one (alpha, beta)."""

    def __init__(self, config: PQConfig, asm_p: EnergyAssembly, asm_q: EnergyAssembly,
                 alpha: float, beta: float, eigen_cache: dict | None = None):
        if asm_p.grid != asm_q.grid:
            raise ValueError("assemblies must share one grid")
        self.config = config
        self.asm_p = asm_p
        self.asm_q = asm_q
        self.alpha = float(alpha)
        self.beta = float(beta)
        self._eigen = eigen_cache if eigen_cache is not None else {}

    @classmethod
    def build(cls, config: PQConfig, grid: Grid, alpha: float, beta: float):
        return cls(config, assemble(grid, config.params_p), assemble(grid, config.params_q), alpha, beta)

    def with_parameters(self, alpha: float, beta: float) -> "Functionals":
        return Functionals(self.config, self.asm_p, self.asm_q, alpha, beta, self._eigen)

    @property
    def grid(self) -> Grid:
        return self.asm_p.grid

    @property
    def p(self) -> float:
        return self.config.p

    @property
    def q(self) -> float:
        return self.config.q

    def eigenpair(self, which: str) -> Eigenpair:
        """Cached first eigenpair of the p- or q-operator."""
        if which not in self._eigen:
            asm = self.asm_p if which == "p" else self.asm_q
            self._eigen[which] = first_eigenpair(asm, SolverOptions(multistart=1))
        return self._eigen[which]

    # pieces -------------------------------------------------------------
    def _norms(self, u):
        h = self.grid.h
        up = _pos(u)
        return float(np.sum(up**self.p) * h), float(np.sum(up**self.q) * h)

    def parts(self, u):
        """(E_p, E_q, ||u+||_p^p, ||u+||_q^q)."""
        u = values_on(self.grid, u)
        np_, nq = self._norms(u)
        return _energy(self.asm_p, u), _energy(self.asm_q, u), np_, nq

    def H(self, u) -> float:
        ep, _, np_, _ = self.parts(u)
        return ep - self.alpha * np_

    def G(self, u) -> float:
        _, eq, _, nq = self.parts(u)
        return eq - self.beta * nq

    def I(self, u) -> float:
        ep, eq, np_, nq = self.parts(u)
        p, q = self.p, self.q
        return ep / p + eq / q - self.alpha * np_ / p - self.beta * nq / q

    def grad(self, u) -> np.ndarray:
        u = values_on(self.grid, u)
        h, up = self.grid.h, _pos(u)
        return (_apply(self.asm_p, u) + _apply(self.asm_q, u)
                - h * (self.alpha * up ** (self.p - 1) + self.beta * up ** (self.q - 1)))

    def precond(self, u) -> np.ndarray:
        """Positive definite Hessian of E_p/p + E_q/q (regularized when q < 2)."""
        u = values_on(self.grid, u)
        return _hessian(self.asm_p, u) + _hessian(self.asm_q, u)

    def hess(self, u) -> np.ndarray:
        u = values_on(self.grid, u)
        h, up = self.grid.h, _pos(u)
        pos = u > 0
        dq = np.zeros_like(u)
        dq[pos] = up[pos] ** (self.q - 2)
        dp = np.zeros_like(u)
        dp[pos] = up[pos] ** (self.p - 2)
        diag = h * (self.alpha * (self.p - 1) * dp + self.beta * (self.q - 1) * dq)
        return self.precond(u) - np.diag(diag)

    def diagnostics(self, u, t_scale=None) -> NehariDiagnostics:
        return NehariDiagnostics(self.H(u), self.G(u), self.I(u), t_scale)


def I_plus(F: Functionals, u) -> float:
    return F.I(u)


def H_alpha(F: Functionals, u) -> float:
    return F.H(u)


def G_beta(F: Functionals, u) -> float:
    return F.G(u)


def _scale_from(H: float, G: float, p: float, q: float) -> float:
    if H == 0 or G == 0 or (H > 0) == (G > 0):
        raise UndefinedScaleError(f"need H and G of opposite sign, got H={H:.3e}, G={G:.3e}")
    return (-G / H) ** (1.0 / (p - q))


def nehari_scale(F: Functionals, u) -> float:
    """The t > 0 with t u on the Nehari manifold: (-G/H)^(1/(p-q))."""
    return _scale_from(F.H(u), F.G(u), F.p, F.q)


# ----------------------------------------------------------------------
# shared numerical kernels

def _solve_pd(mat, rhs):
    try:
        return scipy.linalg.solve(mat, rhs, assume_a="pos")
    except (np.linalg.LinAlgError, ValueError):
        return np.linalg.lstsq(mat, rhs, rcond=None)[0]


def _newton_polish(grad, hess, u, opts: PQOptions, project=None):
    """Newton iteration on grad(u) = 0 with backtracking on ||grad||."""
    g = grad(u)
    res = float(np.max(np.abs(g)))
    for _ in range(opts.newton_iterations):
        if res < 0.1 * opts.residual_tol:
            break
        try:
            step = -np.linalg.solve(hess(u), g)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        tau, improved = 1.0, False
        while tau > 1e-6:
            cand = u + tau * step
            if project is not None:
                cand = project(cand)
            gc = grad(cand)
            rc = float(np.max(np.abs(gc)))
            if rc < res:
                u, g, res, improved = cand, gc, rc, True
                break
            tau *= 0.5
        if not improved:
            break
    return u, res


def _mirror(u):
    return 0.5 * (u + u[::-1])


def _report(F: Functionals, u, res, method, opts, its, t_scale=None, note=""):
    if u is None:
        diag = NehariDiagnostics(np.nan, np.nan, np.nan, None)
        return SolutionReport(NONE_FOUND, None, np.inf, 0.0, diag, method, 0.0, its, note)
    u = np.asarray(u, dtype=float)
    umax = float(np.max(np.abs(u)))
    umin = float(np.min(u))
    diag = F.diagnostics(u, t_scale)
    if umax < ZERO_FLOOR:
        status = NONE_FOUND
        note = (note + "; " if note else "") + "numerically zero"
    elif res < opts.residual_tol and umin > opts.positivity_tol * umax:
        status = FOUND
    else:
        status = INCONCLUSIVE
    return SolutionReport(status, GridFunction(F.grid, u), float(res), umin, diag, method, umax, its, note)


def _best(reports):
    """Deterministic merge by (status rank, I_+ value, start index)."""
    def key(k):
        rep = reports[k]
        val = rep.diagnostics.I if np.isfinite(rep.diagnostics.I) else np.inf
        return (_STATUS_RANK[rep.status], val, k)
    return reports[min(range(len(reports)), key=key)]


# ----------------------------------------------------------------------
# Nehari manifold minimization

def _fiber(F: Functionals, w, branch: int):
    """Project w onto the Nehari manifold inside the requested sign branch.

    branch +1: G < 0 < H (fiber minimum, I < 0); branch -1: H < 0 < G
    (fiber maximum, I > 0).  Returns (v, t, I) or None outside the branch.
    """
    ep, eq, np_, nq = F.parts(w)
    H = ep - F.alpha * np_
    G = eq - F.beta * nq
    if branch > 0 and not (G < 0 < H):
        return None
    if branch < 0 and not (H < 0 < G):
        return None
    # reject points numerically on the branch boundary
    if abs(H) <= 1e-10 * ep or abs(G) <= 1e-10 * eq:
        return None
    t = _scale_from(H, G, F.p, F.q)
    v = t * w
    I = (F.p - F.q) / (F.p * F.q) * G * t**F.q
    return v, t, I


def branch_of(F: Functionals, u) -> int:
    H, G = F.H(u), F.G(u)
    if G < 0 < H:
        return 1
    if H < 0 < G:
        return -1
    return 0


def _nehari_descent(F: Functionals, u0, branch: int, opts: PQOptions):
    """Descend I_+ along the Nehari manifold: free preconditioned step, then rescale.

    Returns (v, residual, iterations, note); v is None when the iterate left
    every admissible fiber (no interior minimum along this path).
    """
    proj = _fiber(F, np.asarray(u0, float), branch)
    if proj is None:
        return None, np.inf, 0, "start outside branch"
    v, t, I = proj
    it = 0
    stalled = 0
    for it in range(1, opts.max_iterations + 1):
        g = F.grad(v)
        res = float(np.max(np.abs(g)))
        if res < 1e-3 * opts.residual_tol:
            break
        d = -_solve_pd(F.precond(v), g)
        slope = float(np.dot(g, d))
        if slope >= 0:
            d, slope = -g, -float(np.dot(g, g))
        tau, accepted = 1.0, False
        while tau > 1e-12:
            cand = _fiber(F, v + tau * d, branch)
            if cand is not None and cand[2] <= I + opts.sufficient_decrease * tau * slope:
                accepted = True
                break
            tau *= opts.contraction
        if not accepted:
            break
        v_new, _, I_new = cand
        mirrored = _fiber(F, _mirror(v_new), branch)
        if mirrored is not None and mirrored[2] <= I_new:
            v_new, _, I_new = mirrored
        rel = abs(I - I_new) / max(abs(I), 1e-300)
        v, I = v_new, I_new
        # leaving through the branch boundary: the fiber scale degenerates
        ep, eq = _energy(F.asm_p, v), _energy(F.asm_q, v)
        H = F.H(v)
        if branch > 0 and H < 1e-7 * ep:
            return None, np.inf, it, "escaped through H = 0"
        if branch < 0 and F.G(v) < 1e-7 * eq:
            return None, np.inf, it, "escaped through G = 0"
        if not np.all(np.isfinite(v)) or np.max(np.abs(v)) > 1e12:
            return None, np.inf, it, "diverged"
        stalled = stalled + 1 if rel < opts.descent_tol else 0
        if stalled >= 20:
            break
    v, res = _newton_polish(F.grad, F.hess, v, opts)
    if branch_of(F, v) != branch:
        return v, res, it, "polished point left the branch"
    return v, res, it, ""


def default_seeds(F: Functionals, opts: PQOptions) -> list[np.ndarray]:
    """phi_q, phi_p, sharpened powers of phi_q and seeded random positive starts."""
    phi_q = F.eigenpair("q").values
    phi_p = F.eigenpair("p").values
    seeds = [phi_q, phi_p, phi_q**2, phi_q**0.5, 0.5 * (phi_q + phi_p)]
    rng = np.random.default_rng(opts.seed)
    for _ in range(opts.multistart):
        seeds.append(phi_q * rng.uniform(0.5, 1.5, F.grid.n))
    return seeds


def _plus_branch_descent(F: Functionals, seed, opts: PQOptions):
    """Local minimizer of I_+ on the G < 0 < H side.

    Constrained local minimizers on this branch are unconstrained local
    minimizers of I_+ (the fiber second derivative is (p - q) H > 0), so the
    descent runs in the full space from the projected start.  Starts outside
    the branch are shrunk until the q-part dominates; from there descent
    increases u and either settles at the first positive solution or blows up.
    """
    seed = np.asarray(seed, dtype=float)
    proj = _fiber(F, seed, 1)
    if proj is not None:
        start = proj[0]
    elif F.G(seed) < 0:
        start = 1e-3 * seed / max(1.0, float(np.max(np.abs(seed))))
    else:
        return None, np.inf, 0, "start outside branch"
    limit = 1e4 * max(1.0, float(np.max(np.abs(seed))), float(np.max(np.abs(start))))
    amp = float(np.max(np.abs(start)))
    with np.errstate(over="ignore", invalid="ignore"):
        u, its = _free_descent(F.I, F.grad, F.precond, start, opts, max_norm=limit, hess=F.hess,
                               ray=True, zero_floor=1e-6 * amp)
    if u is None:
        return None, np.inf, its, "descent left every bounded set"
    if np.max(np.abs(u)) == 0:
        return None, np.inf, its, "descent collapsed to zero"
    u, res = _newton_polish(F.grad, F.hess, u, opts)
    note = "" if branch_of(F, u) == 1 else "limit point off the G < 0 < H branch"
    return u, res, its, note


def solve_nehari_min(F: Functionals, opts: PQOptions | None = None, seeds=None,
                     branch: int | None = None) -> SolutionReport:
    """Minimize I_+ over the Nehari manifold from several starts.

    Each start is assigned the sign branch it lies in unless ``branch`` is
    given; starts in neither branch are skipped.  On G < 0 < H the search is
    for local minimizers (the infimum there may be -inf); on H < 0 < G the
    constrained minimum is the mountain-pass level and descent alternates a
    free step with rescaling onto the manifold.
    """
    opts = opts or PQOptions()
    seeds = default_seeds(F, opts) if seeds is None else [values_on(F.grid, s) for s in seeds]
    reports = []
    for seed in seeds:
        b = branch if branch is not None else branch_of(F, seed)
        if b == 0:
            continue
        if b > 0:
            v, res, its, note = _plus_branch_descent(F, seed, opts)
        else:
            v, res, its, note = _nehari_descent(F, seed, b, opts)
        if v is None:
            reports.append(_report(F, None, res, "nehari", opts, its, note=note))
            continue
        t = None
        try:
            t = nehari_scale(F, v)
        except UndefinedScaleError:
            pass
        reports.append(_report(F, v, res, "nehari", opts, its, t_scale=t, note=note))
        if reports[-1].found and b > 0:
            # any certified local minimizer settles existence; stop at the first
            break
    if not reports:
        return _report(F, None, np.inf, "nehari", opts, 0, note="no start in a Nehari branch")
    return _best(reports)


# ----------------------------------------------------------------------
# unconstrained minimization (coercive regime and truncated functional)

def _newton_direction(hess, u, g):
    """Newton direction when the Hessian is positive definite, else None."""
    try:
        c = scipy.linalg.cho_factor(hess(u))
    except (np.linalg.LinAlgError, ValueError):
        return None
    d = -scipy.linalg.cho_solve(c, g)
    return d if np.all(np.isfinite(d)) else None


def _free_descent(obj, grad, precond, u0, opts: PQOptions, max_norm=1e12, hess=None,
                  ray=False, zero_floor=1e-14):
    """Hybrid minimization: Newton steps where the Hessian is positive definite,
    preconditioned steps with an expanding line search elsewhere.

    With ``ray`` each step also tries doubling the iterate, which lets small
    starts grow geometrically when zero is unstable.  Returns (u, iterations);
    u is None if the iterate blew past ``max_norm`` and all zeros if it fell
    below ``zero_floor``.
    """
    u = np.asarray(u0, dtype=float).copy()
    f = obj(u)
    stalled = 0
    it = 0
    for it in range(1, opts.max_iterations + 1):
        g = grad(u)
        if float(np.max(np.abs(g))) < 1e-3 * opts.residual_tol:
            break
        cand = None
        if hess is not None:
            d = _newton_direction(hess, u, g)
            if d is not None:
                slope = float(np.dot(g, d))
                trial = u + d
                ft = obj(trial)
                if slope < 0 and ft <= f + opts.sufficient_decrease * slope:
                    cand, fc = trial, ft
        if cand is None:
            d = -_solve_pd(precond(u), g)
            slope = float(np.dot(g, d))
            if slope >= 0:
                d, slope = -g, -float(np.dot(g, g))
            tau = 1.0
            while tau > 1e-12:
                trial = u + tau * d
                ft = obj(trial)
                if ft <= f + opts.sufficient_decrease * tau * slope:
                    cand, fc = trial, ft
                    break
                tau *= opts.contraction
            if cand is None:
                break
            if tau == 1.0:
                # expand while the decrease keeps improving (slow growth away from 0)
                while tau < 1e6:
                    trial = u + 2 * tau * d
                    ft = obj(trial)
                    if not ft < fc:
                        break
                    cand, fc, tau = trial, ft, 2 * tau
        mirrored = _mirror(cand)
        fm = obj(mirrored)
        if fm <= fc:
            cand, fc = mirrored, fm
        if ray:
            doubled = 2.0 * cand
            fd = obj(doubled)
            if fd < fc:
                cand, fc = doubled, fd
        rel = abs(f - fc) / max(abs(f), 1e-300)
        u, f = cand, fc
        if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > max_norm:
            return None, it
        if np.max(np.abs(u)) < zero_floor:
            return np.zeros_like(u), it
        stalled = stalled + 1 if rel < opts.descent_tol else 0
        if stalled >= 20:
            break
    return u, it


def solve_global_min(F: Functionals, opts: PQOptions | None = None, seeds=None) -> SolutionReport:
    """Unconstrained descent on I_+; meaningful when alpha < lambda1_p (coercive)."""
    opts = opts or PQOptions()
    if seeds is None:
        phi_q = F.eigenpair("q").values
        rng = np.random.default_rng(opts.seed)
        seeds = [1e-2 * phi_q, phi_q] + [rng.uniform(0.1, 1.0, F.grid.n) for _ in range(opts.multistart)]
    reports = []
    for seed in seeds:
        u, its = _free_descent(F.I, F.grad, F.precond, values_on(F.grid, seed), opts, hess=F.hess)
        if u is None:
            reports.append(_report(F, None, np.inf, "global_min", opts, its, note="diverged"))
            continue
        if np.max(np.abs(u)) > 0:
            u, res = _newton_polish(F.grad, F.hess, u, opts)
        else:
            res = 0.0
        rep = _report(F, u, res, "global_min", opts, its)
        if rep.status != NONE_FOUND and rep.max_norm < 1e-6 * max(1.0, np.max(np.abs(seed))):
            rep.status, rep.note = NONE_FOUND, "descent collapsed to the zero minimizer"
        reports.append(rep)
    return _best(reports)


# ----------------------------------------------------------------------
# truncation (sub/supersolution) method

def _f(t, alpha, beta, p, q):
    return alpha * np.sign(t) * np.abs(t) ** (p - 1) + beta * np.sign(t) * np.abs(t) ** (q - 1)


def _F(t, alpha, beta, p, q):
    return alpha * np.abs(t) ** p / p + beta * np.abs(t) ** q / q


def truncated_force(t: float, i: int, ubar, ulow, alpha, beta, p, q) -> float:
    """Truncation of f(t) = alpha |t|^(p-2) t + beta |t|^(q-2) t between ulow_i and ubar_i."""
    ub, ul = float(np.asarray(ubar)[i]), float(np.asarray(ulow)[i])
    if ul > ub:
        raise OrderingError(f"ulow exceeds ubar at node {i}")
    if t >= ub:
        return float(_f(ub, alpha, beta, p, q))
    if t <= ul:
        return float(_f(ul, alpha, beta, p, q))
    return float(_f(t, alpha, beta, p, q))


class TruncatedFunctional:
    """I~(u) = E_p/p + E_q/q - sum_i h F~(x_i, u_i) with 0 <= truncation <= ubar."""

    def __init__(self, F: Functionals, ubar):
        self.F = F
        self.ubar = np.asarray(values_on(F.grid, ubar), dtype=float)
        if np.any(self.ubar < 0):
            raise OrderingError("supersolution must be nonnegative (subsolution is 0)")
        a, b, p, q = F.alpha, F.beta, F.p, F.q
        self._fbar = _f(self.ubar, a, b, p, q)
        self._Fbar = _F(self.ubar, a, b, p, q)

    def force(self, u):
        F = self.F
        t = np.clip(u, 0.0, self.ubar)
        return _f(t, F.alpha, F.beta, F.p, F.q)

    def primitive(self, u):
        F = self.F
        t = np.clip(u, 0.0, self.ubar)
        inner = _F(t, F.alpha, F.beta, F.p, F.q)
        above = u > self.ubar
        return np.where(above, self._Fbar + self._fbar * (u - self.ubar), inner)

    def value(self, u) -> float:
        F = self.F
        u = values_on(F.grid, u)
        return (_energy(F.asm_p, u) / F.p + _energy(F.asm_q, u) / F.q
                - F.grid.h * float(np.sum(self.primitive(u))))

    def grad(self, u) -> np.ndarray:
        F = self.F
        u = values_on(F.grid, u)
        return _apply(F.asm_p, u) + _apply(F.asm_q, u) - F.grid.h * self.force(u)

    def hess(self, u) -> np.ndarray:
        F = self.F
        u = values_on(F.grid, u)
        inside = (u > 0) & (u < self.ubar)
        d = np.zeros_like(u)
        ui = u[inside]
        d[inside] = F.alpha * (F.p - 1) * ui ** (F.p - 2) + F.beta * (F.q - 1) * ui ** (F.q - 2)
        return F.precond(u) - F.grid.h * np.diag(d)


def supersolution_residual(F: Functionals, ubar) -> np.ndarray:
    """Weak residual <A_p(ubar) + B_q(ubar) - f(ubar), e_i> for every coordinate direction."""
    ubar = values_on(F.grid, ubar)
    return _apply(F.asm_p, ubar) + _apply(F.asm_q, ubar) - F.grid.h * _f(ubar, F.alpha, F.beta, F.p, F.q)


def solve_by_truncation(F: Functionals, ubar, opts: PQOptions | None = None, seeds=None) -> SolutionReport:
    """Minimize the truncated functional between 0 and a certified supersolution."""
    opts = opts or PQOptions()
    ubar = np.asarray(values_on(F.grid, ubar), dtype=float)
    sres = supersolution_residual(F, ubar)
    if np.min(sres) < -opts.residual_tol:
        raise SupersolutionError(f"supersolution certificate fails: min residual {np.min(sres):.3e}")
    T = TruncatedFunctional(F, ubar)
    if seeds is None:
        phi_q = F.eigenpair("q").values
        # t phi_q strictly below ubar
        ratio = np.min(ubar / np.maximum(phi_q, 1e-300))
        seeds = [0.5 * ratio * phi_q, 0.05 * ratio * phi_q, 0.5 * ubar]
    reports = []
    for seed in seeds:
        u, its = _free_descent(T.value, T.grad, F.precond, values_on(F.grid, seed), opts, hess=T.hess)
        if u is None:
            reports.append(_report(F, None, np.inf, "truncation", opts, its, note="diverged"))
            continue
        u, _ = _newton_polish(T.grad, T.hess, u, opts)
        if np.any(u < 0) or np.any(u > ubar):
            log.debug("clamping truncation output by %.3e", max(-np.min(u), np.max(u - ubar)))
        u = np.clip(u, 0.0, ubar)
        res = float(np.max(np.abs(F.grad(u))))
        rep = _report(F, u, res, "truncation", opts, its)
        value = T.value(u)
        rep.note = f"truncated energy {value:.6e}"
        if rep.status == NONE_FOUND or value >= 0:
            if rep.status == FOUND:
                rep.status = INCONCLUSIVE
            rep.note += "; no negative value of the truncated energy found"
        reports.append(rep)
    best = _best(reports)
    return best


def truncated_energy(F: Functionals, ubar, u) -> float:
    return TruncatedFunctional(F, ubar).value(u)


def solve(F: Functionals, opts: PQOptions | None = None, lambda1_p=None, lambda1_q=None,
          warm=None) -> SolutionReport:
    """Dispatch to the solver path suited to (alpha, beta).

    alpha < lambda1_p uses global minimization; otherwise Nehari minimization
    on the branch holding the starts (the optional warm start first).
    """
    opts = opts or PQOptions()
    l1p = F.eigenpair("p").lam if lambda1_p is None else lambda1_p
    l1q = F.eigenpair("q").lam if lambda1_q is None else lambda1_q
    if F.alpha < l1p and F.beta > 0:
        seeds = None if warm is None else [warm, 1e-2 * F.eigenpair("q").values]
        return solve_global_min(F, opts, seeds=seeds)
    seeds = default_seeds(F, opts)
    if warm is not None:
        seeds = [np.asarray(warm, dtype=float)] + seeds
    branch = 1 if F.beta > l1q else -1
    return solve_nehari_min(F, opts, seeds=seeds, branch=branch)
