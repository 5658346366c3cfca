import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fracpq.energy import assemble, energy, hessian, linear_matrix, lp_norm_pow, operator_apply
from fracpq.grid import FractionalParams, Grid, Interval

UNIT = Interval(0.0, 1.0)


def test_pair_weight_oracle():
    asm = assemble(Grid(UNIT, 2), FractionalParams(0.25, 2.0))
    # h^2 / |x1 - x2|^(1 + sr) = 0.25 / 0.5^1.5
    assert asm.pair_weights[0, 1] == pytest.approx(0.707107, abs=1e-6)
    assert asm.pair_weights[0, 0] == 0.0


def test_single_cell_energy_oracle():
    asm = assemble(Grid(UNIT, 1), FractionalParams(0.25, 2.0))
    # 2 h k with k = 4 sqrt 2
    assert energy(asm, [1.0]) == pytest.approx(11.313708, abs=1e-6)


def test_single_cell_cubic_energy_oracle():
    asm = assemble(Grid(UNIT, 1), FractionalParams(0.5, 3.0))
    # 2 * (2 * 2^1.5 / 1.5)
    assert energy(asm, [1.0]) == pytest.approx(7.542472, abs=1e-6)


def test_weights_symmetric_and_readonly():
    asm = assemble(Grid(UNIT, 7), FractionalParams(0.4, 2.5))
    np.testing.assert_array_equal(asm.pair_weights, asm.pair_weights.T)
    with pytest.raises(ValueError):
        asm.pair_weights[0, 1] = 1.0


def test_energy_of_zero():
    asm = assemble(Grid(UNIT, 5), FractionalParams(0.5, 3.0))
    assert energy(asm, np.zeros(5)) == 0.0
    np.testing.assert_array_equal(operator_apply(asm, np.zeros(5)), 0.0)


def test_linear_matrix_matches_energy():
    asm = assemble(Grid(UNIT, 6), FractionalParams(0.3, 2.0))
    u = np.random.default_rng(0).normal(size=6)
    assert u @ linear_matrix(asm) @ u == pytest.approx(energy(asm, u), rel=1e-12)


def test_lp_norm_pow():
    g = Grid(UNIT, 4)
    assert lp_norm_pow(g, np.full(4, 2.0), 3.0) == pytest.approx(8.0)
    with pytest.raises(ValueError):
        lp_norm_pow(g, np.ones(4), 0.5)


finite = st.floats(-5.0, 5.0, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(
    u=arrays(np.float64, 6, elements=finite),
    s=st.floats(0.1, 0.9),
    r=st.floats(1.2, 4.0),
    c=st.floats(0.1, 3.0),
)
def test_energy_homogeneity_and_euler_identity(u, s, r, c):
    asm = assemble(Grid(UNIT, 6), FractionalParams(s, r))
    e = energy(asm, u)
    assert e >= 0.0
    assert energy(asm, c * u) == pytest.approx(c**r * e, rel=1e-10, abs=1e-12)
    assert energy(asm, -u) == pytest.approx(e, rel=1e-12, abs=1e-14)
    # <A(u), u> = E(u) for the gradient of E/r
    assert float(operator_apply(asm, u) @ u) == pytest.approx(e, rel=1e-10, abs=1e-12)


def _central_diff(f, u, eps):
    g = np.zeros_like(u)
    for i in range(u.size):
        d = np.zeros_like(u)
        d[i] = eps
        g[i] = (f(u + d) - f(u - d)) / (2 * eps)
    return g


@pytest.mark.parametrize("r", [1.5, 2.0, 3.0])
def test_operator_apply_is_gradient(r):
    asm = assemble(Grid(UNIT, 8), FractionalParams(0.6, r))
    rng = np.random.default_rng(1)
    for _ in range(5):
        u = rng.uniform(0.2, 2.0, 8) + np.arange(8) * 0.3
        fd = _central_diff(lambda v: energy(asm, v) / r, u, 1e-6)
        np.testing.assert_allclose(operator_apply(asm, u), fd, rtol=1e-6)


def test_hessian_matches_operator_differences():
    asm = assemble(Grid(UNIT, 6), FractionalParams(0.5, 3.0))
    u = np.linspace(0.3, 1.7, 6) ** 2
    H = hessian(asm, u)
    for i in range(6):
        d = np.zeros(6)
        d[i] = 1e-6
        col = (operator_apply(asm, u + d) - operator_apply(asm, u - d)) / 2e-6
        np.testing.assert_allclose(H[:, i], col, rtol=1e-6, atol=1e-8)
