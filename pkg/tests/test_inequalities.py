import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracpq.inequalities import (
    SLACK_TOL,
    elementary_inequality_check,
    picone_check,
    picone_terms,
    run_all_suites,
    run_picone_suite,
)

reals = st.floats(-50.0, 50.0, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(a=reals, b=reals, gamma=st.floats(1.01, 8.0))
def test_elementary_i(a, b, gamma):
    assert not elementary_inequality_check(a, b, gamma, "i").violated


@settings(max_examples=200, deadline=None)
@given(a=reals, b=reals, gamma=st.floats(2.0, 8.0))
def test_elementary_ii(a, b, gamma):
    assert not elementary_inequality_check(a, b, gamma, "ii").violated


@settings(max_examples=200, deadline=None)
@given(a=reals, b=reals, gamma=st.floats(0.05, 8.0))
def test_elementary_iii(a, b, gamma):
    assert not elementary_inequality_check(a, b, gamma, "iii").violated


def test_elementary_ii_sharp_at_opposite_points():
    # a = -b makes the constant 2^(gamma-2) attained
    rep = elementary_inequality_check(1.0, -1.0, 3.5, "ii")
    assert abs(rep.slack) < 1e-12 * rep.scale


def test_elementary_known_values():
    rep = elementary_inequality_check(2.0, 0.0, 2.0, "i")
    assert rep.lhs == pytest.approx(4.0) and rep.rhs == pytest.approx(4.0)
    rep = elementary_inequality_check(3.0, 1.0, 2.0, "iii")
    assert rep.lhs == pytest.approx(8.0) and rep.rhs == pytest.approx(16.0)


@pytest.mark.parametrize("variant,gamma", [("i", 1.0), ("ii", 1.5), ("iii", 0.0), ("iv", 2.0)])
def test_elementary_rejects_bad_input(variant, gamma):
    with pytest.raises(ValueError):
        elementary_inequality_check(1.0, 2.0, gamma, variant)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), variant=st.sampled_from(["i", "ii", "iii", "iv"]))
def test_picone_random(seed, variant):
    rng = np.random.default_rng(seed)
    r2 = rng.uniform(1.1, 4.0)
    r1 = rng.uniform(r2, r2 + 1.0)
    f = rng.uniform(0.05, 3.0, 5)
    g = rng.uniform(0.0, 3.0, 5)
    assert not picone_check(f, g, r1, r2, variant, *rng.uniform(1.0, 4.0, 2)).violated


@pytest.mark.parametrize("variant", ["i", "ii"])
@pytest.mark.parametrize("c", [0.5, 1.0, 3.0])
def test_picone_equality_when_proportional(variant, c):
    f = np.array([0.3, 1.0, 2.2, 0.7])
    rep = picone_check(f, c * f, 3.0, 2.0, variant)
    assert abs(rep.slack) < 1e-12 * rep.scale


def test_picone_terms_shapes_and_diagonal():
    lhs, rhs = picone_terms([1.0, 2.0, 3.0], [0.5, 0.5, 1.0], 2.5, 2.0, "iii", 1.0, 2.0)
    assert lhs.shape == rhs.shape == (3, 3)
    np.testing.assert_array_equal(np.diag(lhs), 0.0)


@pytest.mark.parametrize("f,g,r1,r2,kw", [
    ([1.0, 0.0], [1.0, 1.0], 3.0, 2.0, {}),
    ([1.0, 1.0], [1.0, -1.0], 3.0, 2.0, {}),
    ([1.0, 1.0], [1.0, 1.0], 2.0, 3.0, {}),
    ([1.0, 1.0], [1.0, 1.0, 1.0], 3.0, 2.0, {}),
])
def test_picone_rejects_bad_input(f, g, r1, r2, kw):
    with pytest.raises(ValueError):
        picone_terms(f, g, r1, r2, "i", **kw)


def test_picone_rejects_small_weights():
    with pytest.raises(ValueError):
        picone_terms([1.0, 2.0], [1.0, 1.0], 3.0, 2.0, "iv", 0.5, 1.0)


def test_suites_deterministic():
    a = [(r.violations, r.worst.slack) for r in run_all_suites(50, seed=7)]
    b = [(r.violations, r.worst.slack) for r in run_all_suites(50, seed=7)]
    assert a == b
    assert sum(v for v, _ in a) == 0


def test_suite_slack_threshold():
    rep = run_picone_suite("iv", 20, np.random.default_rng(0)).worst
    assert rep.slack >= -SLACK_TOL * rep.scale
