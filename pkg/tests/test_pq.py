import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracpq.grid import Grid, Interval, PQConfig
from fracpq.pq import (
    FOUND,
    INCONCLUSIVE,
    NONE_FOUND,
    Functionals,
    OrderingError,
    PQOptions,
    SupersolutionError,
    TruncatedFunctional,
    UndefinedScaleError,
    _scale_from,
    nehari_scale,
    solve,
    solve_by_truncation,
    solve_global_min,
    solve_nehari_min,
    supersolution_residual,
    truncated_energy,
    truncated_force,
)

UNIT = Interval(0.0, 1.0)
CFG = PQConfig(UNIT, 0.7, 3.0, 0.5, 2.0)


@pytest.fixture(scope="module")
def base():
    return Functionals.build(CFG, Grid(UNIT, 16), 0.0, 0.0)


@pytest.mark.parametrize("H,G,p,q,t", [(1.0, -1.0, 3.0, 2.0, 1.0), (2.0, -8.0, 3.0, 2.0, 4.0),
                                       (2.0, -2.0, 4.0, 2.0, 1.0), (-1.0, 4.0, 4.0, 2.0, 2.0)])
def test_scale_formula(H, G, p, q, t):
    assert _scale_from(H, G, p, q) == pytest.approx(t)


@pytest.mark.parametrize("H,G", [(1.0, 1.0), (-1.0, -2.0), (0.0, -1.0), (1.0, 0.0)])
def test_scale_undefined(H, G):
    with pytest.raises(UndefinedScaleError):
        _scale_from(H, G, 3.0, 2.0)


def test_functionals_consistent(base):
    F = base.with_parameters(25.0, 12.0)
    u = np.random.default_rng(0).uniform(0.1, 1.0, 16)
    p, q = F.p, F.q
    assert F.I(u) == pytest.approx(F.H(u) / p + F.G(u) / q)
    assert float(F.grad(u) @ u) == pytest.approx(F.H(u) + F.G(u), rel=1e-12)


def test_negative_part_ignored_by_forcing(base):
    F = base.with_parameters(25.0, 12.0)
    u = -np.random.default_rng(1).uniform(0.1, 1.0, 16)
    ep, eq, _, _ = F.parts(u)
    assert F.H(u) == pytest.approx(ep)
    assert F.G(u) == pytest.approx(eq)


def test_hessian_matches_gradient_differences(base):
    F = base.with_parameters(25.0, 12.0)
    u = F.eigenpair("q").values * 0.7
    H = F.hess(u)
    for i in range(0, 16, 3):
        d = np.zeros(16)
        d[i] = 1e-6
        col = (F.grad(u + d) - F.grad(u - d)) / 2e-6
        np.testing.assert_allclose(H[:, i], col, rtol=1e-5, atol=1e-8)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), alpha=st.floats(30.0, 60.0), beta=st.floats(0.0, 12.0))
def test_nehari_identity_random(base, seed, alpha, beta):
    F = base.with_parameters(alpha, beta)
    u = np.random.default_rng(seed).uniform(0.05, 1.0, 16) * F.eigenpair("q").values
    try:
        t = nehari_scale(F, u)
    except UndefinedScaleError:
        return
    v = t * u
    scale = max(abs(F.H(v)), abs(F.G(v)), 1.0)
    assert abs(F.grad(v) @ v) < 1e-9 * scale
    assert abs(F.I(v) - (F.p - F.q) / (F.p * F.q) * F.G(v)) < 1e-9 * scale


def test_fiber_scan_has_unique_interior_minimum(base):
    F = base.with_parameters(5.0, 30.0)
    u = F.eigenpair("q").values
    assert F.G(u) < 0 < F.H(u)
    t0 = nehari_scale(F, u)
    ts = np.exp(np.linspace(np.log(t0) - 4, np.log(t0) + 4, 1000))
    vals = np.array([F.I(t * u) for t in ts])
    k = int(np.argmin(vals))
    assert 0 < k < len(ts) - 1
    assert abs(np.log(ts[k]) - np.log(t0)) <= 8 / 999
    assert vals[k] < 0
    # a single sign change of the fiber derivative
    assert np.count_nonzero(np.diff(np.sign(np.diff(vals)))) == 1


def test_fiber_scan_has_unique_interior_maximum(base):
    F = base.with_parameters(40.0, 5.0)
    u = F.eigenpair("q").values
    assert F.H(u) < 0 < F.G(u)
    t0 = nehari_scale(F, u)
    ts = np.exp(np.linspace(np.log(t0) - 4, np.log(t0) + 4, 1000))
    vals = np.array([F.I(t * u) for t in ts])
    k = int(np.argmax(vals))
    assert 0 < k < len(ts) - 1
    assert abs(np.log(ts[k]) - np.log(t0)) <= 8 / 999
    assert vals[k] > 0


def test_mountain_pass_branch_found(base):
    lp, lq = base.eigenpair("p").lam, base.eigenpair("q").lam
    F = base.with_parameters(lp + 0.5, lq - 0.5)
    rep = solve_nehari_min(F)
    assert rep.status == FOUND
    assert rep.min_interior > 0
    assert rep.residual < 1e-8
    d = rep.diagnostics
    assert abs(d.I - (F.p - F.q) / (F.p * F.q) * d.G) < 1e-8 * max(abs(d.G), 1.0)
    assert np.isfinite(rep.max_norm) and rep.max_norm > 0


def test_negative_beta_mountain_pass(base):
    lp = base.eigenpair("p").lam
    rep = solve(base.with_parameters(lp + 5.0, -2.0))
    assert rep.status == FOUND and rep.min_interior > 0


def test_global_min_existence(base):
    lq = base.eigenpair("q").lam
    F = base.with_parameters(-1.0, lq + 0.5)
    rep = solve_global_min(F)
    assert rep.status == FOUND
    assert rep.diagnostics.I < 0
    assert np.max(np.abs(F.grad(rep.u.values))) < 1e-8


def test_global_min_only_zero(base):
    lq = base.eigenpair("q").lam
    assert solve_global_min(base.with_parameters(-1.0, lq - 0.5)).status == NONE_FOUND


def test_both_below_none_found(base):
    lp, lq = base.eigenpair("p").lam, base.eigenpair("q").lam
    assert solve(base.with_parameters(lp - 1.0, lq - 1.0)).status == NONE_FOUND


def test_found_solutions_nonnegative(base):
    lp, lq = base.eigenpair("p").lam, base.eigenpair("q").lam
    for a, b in [(lp + 3, lq - 3), (lp - 3, lq + 0.5)]:
        rep = solve(base.with_parameters(a, b))
        assert rep.found
        assert np.min(rep.u.values) >= 0


def test_options_validation():
    with pytest.raises(ValueError):
        PQOptions(residual_tol=-1.0)
    with pytest.raises(ValueError):
        PQOptions(multistart=0)


# truncation -------------------------------------------------------------

def test_truncated_force_branches():
    ubar, ulow = np.array([2.0]), np.array([0.0])
    a, b, p, q = 3.0, 1.5, 3.0, 2.0
    assert truncated_force(1.0, 0, ubar, ulow, a, b, p, q) == pytest.approx(a + b)
    top = a * 4.0 + b * 2.0
    assert truncated_force(5.0, 0, ubar, ulow, a, b, p, q) == pytest.approx(top)
    assert truncated_force(-1.0, 0, ubar, ulow, a, b, p, q) == 0.0
    left = truncated_force(2.0 - 1e-12, 0, ubar, ulow, a, b, p, q)
    assert left == pytest.approx(top, rel=1e-10)


def test_truncated_force_ordering_error():
    with pytest.raises(OrderingError):
        truncated_force(0.5, 0, np.array([1.0]), np.array([2.0]), 1.0, 1.0, 3.0, 2.0)


def test_truncated_primitive_matches_force():
    F = Functionals.build(CFG, Grid(UNIT, 4), 20.0, 10.0)
    T = TruncatedFunctional(F, np.full(4, 1.0))
    for t in [-0.5, 0.3, 0.99, 1.5]:
        u = np.full(4, t)
        d = 1e-6
        fd = (T.primitive(u + d) - T.primitive(u - d)) / (2 * d)
        np.testing.assert_allclose(fd, T.force(u), rtol=1e-6, atol=1e-9)


def _supersolution(base, beta, theta):
    mu = beta + 0.2
    rep = solve(base.with_parameters(mu + theta, mu))
    assert rep.found
    return rep.u.values


def test_truncation_ordering_and_negative_energy(base):
    lq = base.eigenpair("q").lam
    theta = 12.0
    beta = lq + 0.1
    ubar = _supersolution(base, beta, theta)
    F = base.with_parameters(beta + theta, beta)
    assert np.min(supersolution_residual(F, ubar)) >= 0
    rep = solve_by_truncation(F, ubar)
    u = rep.u.values
    assert rep.status == FOUND
    assert np.all(u >= 0) and np.all(u <= ubar)
    assert truncated_energy(F, ubar, u) < 0


def test_truncation_rejects_non_supersolution(base):
    F = base.with_parameters(20.0, 20.0)
    with pytest.raises(SupersolutionError):
        solve_by_truncation(F, 1e-3 * F.eigenpair("q").values)


def test_truncation_zero_is_inconclusive(base):
    # beta below lambda_q: the truncated energy has no negative value near 0
    lq = base.eigenpair("q").lam
    F = base.with_parameters(1.0, lq - 3.0)
    ubar = 1e-2 * F.eigenpair("q").values
    rep = solve_by_truncation(F, ubar)
    assert rep.status in (INCONCLUSIVE, NONE_FOUND)
