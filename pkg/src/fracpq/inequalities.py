"""Executable checkers for the elementary and discrete Picone inequalities.

Each check returns a :class:`MarginReport` whose ``slack`` is RHS - LHS of
the inequality in "LHS <= RHS" form.  A violation is a slack below
``-SLACK_TOL * scale`` with scale = max(|LHS|, |RHS|, 1).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridFunction

SLACK_TOL = 1e-12

ELEMENTARY_VARIANTS = ("i", "ii", "iii")
PICONE_VARIANTS = ("i", "ii", "iii", "iv")


@dataclass
class MarginReport:
    lhs: float
    rhs: float
    slack: float
    scale: float
    pair: tuple | None = None

    @property
    def violated(self) -> bool:
        return self.slack < -SLACK_TOL * self.scale


def _report(lhs, rhs, pair=None) -> MarginReport:
    lhs, rhs = float(lhs), float(rhs)
    scale = max(abs(lhs), abs(rhs), 1.0) if np.isfinite(rhs) else max(abs(lhs), 1.0)
    return MarginReport(lhs, rhs, rhs - lhs, scale, pair)


def _j(x, gamma):
    """|x|^(gamma-2) x with 0 -> 0."""
    return np.sign(x) * np.abs(x) ** (gamma - 1.0)


def elementary_inequality_check(a: float, b: float, gamma: float, variant: str) -> MarginReport:
    """Pointwise inequalities for reals a, b and exponent gamma.

    i   (gamma > 1)   J(a-b)(a+ - b+) >= |a+ - b+|^gamma and J(a-b)(b- - a-) >= |a- - b-|^gamma;
                      the weaker of the two is reported
    ii  (gamma >= 2)  |a-b|^(gamma-1) <= 2^(gamma-2) |J(a) - J(b)|, the magnitude form of
                      J(a-b) <= C (J(a) - J(b)) with the sharp constant
    iii (gamma > 0)   ||a|^gamma - |b|^gamma| <= gamma (|a|^(gamma-1) + |b|^(gamma-1)) |a-b|
    """
    a, b = float(a), float(b)
    if variant == "i":
        if not gamma > 1:
            raise ValueError("variant i needs gamma > 1")
        ap, bp = max(a, 0.0), max(b, 0.0)
        am, bm = max(-a, 0.0), max(-b, 0.0)
        jd = _j(a - b, gamma)
        plus = _report(abs(ap - bp) ** gamma, jd * (ap - bp))
        minus = _report(abs(am - bm) ** gamma, jd * (bm - am))
        return plus if plus.slack / plus.scale <= minus.slack / minus.scale else minus
    if variant == "ii":
        if not gamma >= 2:
            raise ValueError("variant ii needs gamma >= 2")
        c = 2.0 ** (gamma - 2.0)
        return _report(abs(a - b) ** (gamma - 1.0), c * abs(_j(a, gamma) - _j(b, gamma)))
    if variant == "iii":
        if not gamma > 0:
            raise ValueError("variant iii needs gamma > 0")
        lhs = abs(abs(a) ** gamma - abs(b) ** gamma)
        if a == b:
            return _report(lhs, 0.0)
        with np.errstate(divide="ignore"):
            weight = np.float64(abs(a)) ** (gamma - 1.0) + np.float64(abs(b)) ** (gamma - 1.0)
        return _report(lhs, gamma * weight * abs(a - b))
    raise ValueError(f"unknown variant {variant!r}")


def _values(u) -> np.ndarray:
    return u.values if isinstance(u, GridFunction) else np.asarray(u, dtype=float).reshape(-1)


def picone_terms(f, g, r1: float, r2: float, variant: str, alpha: float = 1.0, beta: float = 1.0):
    """(LHS, RHS) matrices over all node pairs (i, j) for one Picone variant.

    i    J_r1(df) (g^r2/f^(r2-1))_diff            <= |dg|^r2 |df|^(r1-r2)
    ii   J_r2(df) (g^r1/f^(r1-1))_diff            <= J_r2(dg) (g^(r1-r2+1)/f^(r1-r2))_diff
    iii  J_r1(df) (g^r1/(a f^(r1-1)+b f^(r2-1)))_diff <= |dg|^r1
    iv   J_r2(df) (g^r1/(a f^(r1-1)+b f^(r2-1)))_diff <= |g_i^(r1/r2) - g_j^(r1/r2)|^r2
    where d and _diff take the value at node i minus the value at node j.
    """
    f, g = _values(f), _values(g)
    if f.shape != g.shape:
        raise ValueError("f and g must have the same length")
    if np.any(f <= 0):
        raise ValueError("f must be strictly positive")
    if np.any(g < 0):
        raise ValueError("g must be nonnegative")
    if not (1 < r2 <= r1):
        raise ValueError("need 1 < r2 <= r1")

    def diff(v):
        return v[:, None] - v[None, :]

    df, dg = diff(f), diff(g)
    if variant == "i":
        lhs = _j(df, r1) * diff(g**r2 / f ** (r2 - 1))
        rhs = np.abs(dg) ** r2 * np.abs(df) ** (r1 - r2)
    elif variant == "ii":
        lhs = _j(df, r2) * diff(g**r1 / f ** (r1 - 1))
        rhs = _j(dg, r2) * diff(g ** (r1 - r2 + 1) / f ** (r1 - r2))
    elif variant in ("iii", "iv"):
        if alpha < 1 or beta < 1:
            raise ValueError("variants iii and iv need alpha, beta >= 1")
        quot = diff(g**r1 / (alpha * f ** (r1 - 1) + beta * f ** (r2 - 1)))
        if variant == "iii":
            lhs = _j(df, r1) * quot
            rhs = np.abs(dg) ** r1
        else:
            lhs = _j(df, r2) * quot
            rhs = np.abs(diff(g ** (r1 / r2))) ** r2
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return lhs, rhs


def picone_check(f, g, r1: float, r2: float, variant: str, alpha: float = 1.0,
                 beta: float = 1.0) -> MarginReport:
    """Minimum scaled slack of a Picone variant over all node pairs i != j."""
    lhs, rhs = picone_terms(f, g, r1, r2, variant, alpha, beta)
    n = lhs.shape[0]
    if n < 2:
        return _report(0.0, 0.0)
    off = ~np.eye(n, dtype=bool)
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
    rel = np.where(off, (rhs - lhs) / scale, np.inf)
    i, j = np.unravel_index(int(np.argmin(rel)), rel.shape)
    return _report(lhs[i, j], rhs[i, j], (int(i), int(j)))


@dataclass
class SuiteResult:
    family: str
    variant: str
    cases: int
    violations: int
    worst: MarginReport | None

    @property
    def passed(self) -> bool:
        return self.violations == 0


def run_elementary_suite(variant: str, cases: int, rng: np.random.Generator) -> SuiteResult:
    lo = {"i": 1.05, "ii": 2.0, "iii": 0.1}[variant]
    bad, worst = 0, None
    for _ in range(cases):
        a, b = rng.normal(0.0, 3.0, 2)
        gamma = rng.uniform(lo, 6.0)
        rep = elementary_inequality_check(a, b, gamma, variant)
        bad += rep.violated
        if worst is None or rep.slack / rep.scale < worst.slack / worst.scale:
            worst = rep
    return SuiteResult("elementary", variant, cases, bad, worst)


def run_picone_suite(variant: str, cases: int, rng: np.random.Generator, nodes: int = 6) -> SuiteResult:
    """Random positive f and nonnegative g; exponents with r2 <= r1 <= r2 + 1."""
    bad, worst = 0, None
    for _ in range(cases):
        r2 = rng.uniform(1.1, 4.0)
        r1 = rng.uniform(r2, r2 + 1.0)
        f = rng.uniform(0.05, 3.0, nodes)
        g = rng.uniform(0.0, 3.0, nodes)
        alpha, beta = rng.uniform(1.0, 4.0, 2)
        rep = picone_check(f, g, r1, r2, variant, alpha, beta)
        bad += rep.violated
        if worst is None or rep.slack / rep.scale < worst.slack / worst.scale:
            worst = rep
    return SuiteResult("picone", variant, cases, bad, worst)


def run_all_suites(cases: int = 1000, seed: int = 0) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    out = [run_elementary_suite(v, cases, rng) for v in ELEMENTARY_VARIANTS]
    out += [run_picone_suite(v, cases, rng) for v in PICONE_VARIANTS]
    return out
