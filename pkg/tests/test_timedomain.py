import io
import math

import mpmath
import numpy as np
import pytest
from scipy.special import binom

from implicitnet.errors import BranchFailure, EvaluationError, InvalidOrder, SingularStep, ZeroOperator
from implicitnet.networks import QuadraticImplicitOp, derive_ladder, derive_tree
from implicitnet.operators import ONE, ZERO, D, FracPoly, monomial
from implicitnet.timedomain import (
    TimeSeries,
    caputo_derivative,
    gl_apply,
    gl_weights,
    ilt_point,
    simulate_explicit,
    step_response_implicit,
    write_series_csv,
)

HALF_DERIV_OF_T_AT_1 = 2 / math.sqrt(math.pi)


def ramp(h, tmax=1.0):
    return TimeSeries.sample(lambda t: t, h, tmax)


@pytest.mark.parametrize("alpha, count", [(1.0, 4), (0.5, 4), (0.0, 3), (-0.5, 6), (1.7, 8)])
def test_gl_weights_match_binomial_oracle(alpha, count):
    oracle = [(-1) ** j * binom(alpha, j) for j in range(count)]
    np.testing.assert_allclose(gl_weights(alpha, count), oracle, rtol=1e-14, atol=1e-16)


def test_gl_weights_examples():
    assert list(gl_weights(1.0, 4)) == [1, -1, 0, 0]
    assert list(gl_weights(0.5, 4)) == [1, -0.5, -0.125, -0.0625]
    assert list(gl_weights(0.0, 3)) == [1, 0, 0]


def test_gl_weight_partial_sums_decrease():
    w = gl_weights(0.5, 1001)
    partial = np.abs(np.cumsum(w))
    assert np.all(np.diff(partial) <= 0)
    assert partial[1000] < 0.05


def test_gl_apply_identity():
    ts = TimeSeries(0.1, np.array([0.3, -1.0, 2.5]))
    assert np.array_equal(gl_apply(ts, 0).values, ts.values)


def test_gl_half_derivative_of_ramp():
    h = 2.0**-10
    out = gl_apply(ramp(h), 0.5)
    assert abs(out.values[-1] - HALF_DERIV_OF_T_AT_1) <= 1.0 * h


def test_gl_first_derivative_of_square():
    h = 2.0**-10
    ts = TimeSeries.sample(lambda t: t**2, h, 1.0)
    out = gl_apply(ts, 1.0)
    np.testing.assert_allclose(out.values[1:], 2 * ts.t[1:], atol=1.01 * h)


def test_gl_fractional_integral():
    h = 1e-3
    ts = TimeSeries.step(h, 1.0)
    out = gl_apply(ts, -1.0)
    # rectangle rule including the sample at t = 0
    np.testing.assert_allclose(out.values, ts.t + h, atol=1e-12)


def test_gl_order_of_accuracy():
    errs = [abs(gl_apply(ramp(2.0**-p), 0.5).values[-1] - HALF_DERIV_OF_T_AT_1) for p in (8, 9, 10)]
    for coarse, fine in zip(errs, errs[1:]):
        assert 1.7 <= coarse / fine <= 2.3


@pytest.mark.parametrize("alpha, beta", [(0.3, 0.4), (0.5, 0.5), (0.9, 0.25)])
def test_gl_law_of_indices(alpha, beta):
    h = 1e-3
    ts = TimeSeries.sample(lambda t: np.sin(3 * t) * t, h, 1.0)
    twice = gl_apply(gl_apply(ts, alpha), beta).values
    once = gl_apply(ts, alpha + beta).values
    assert np.max(np.abs(twice - once)) <= 10 * h


def test_caputo_constant_is_zero():
    out = caputo_derivative(TimeSeries.step(1e-3, 1.0, amplitude=5.0), 0.5)
    assert np.max(np.abs(out.values)) <= 1e-12


def test_caputo_of_ramp():
    h = 1e-3
    out = caputo_derivative(ramp(h), 0.5)
    np.testing.assert_allclose(out.values, 2 * np.sqrt(out.t / np.pi), atol=h**1.5)


@pytest.mark.parametrize(
    "fn, t_from",
    [
        (lambda t: t**2, 0.0),
        # u'(0) != 0: GL's start-up error is O(sqrt(h)) for the first few steps
        (lambda t: np.sin(2 * t), 0.1),
        (lambda t: t * np.exp(-t), 0.1),
        (lambda t: t, 0.1),
    ],
)
def test_caputo_agrees_with_gl_from_rest(fn, t_from):
    h = 1e-3
    ts = TimeSeries.sample(fn, h, 1.0)
    diff = caputo_derivative(ts, 0.5).values - gl_apply(ts, 0.5).values
    assert np.max(np.abs(diff[ts.t >= t_from])) <= 1e-3


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, 1.5])
def test_caputo_rejects_order(alpha):
    with pytest.raises(InvalidOrder):
        caputo_derivative(ramp(0.1), alpha)


def test_simulate_spring_damper_step():
    h = 1e-3
    u = simulate_explicit(D + ONE, TimeSeries.step(h, 5.0))
    assert np.max(np.abs(u.values - (1 - np.exp(-u.t)))) <= 1e-3


def test_simulate_half_order_step():
    h = 1e-3
    u = simulate_explicit(monomial(1, 0.5), TimeSeries.step(h, 2.0))
    exact = 2 * np.sqrt(u.t / np.pi)
    sel = u.t >= 0.05
    # first-order pointwise error, worst near t = 0
    assert np.max(np.abs(u.values - exact)[sel]) <= 5 * h / np.sqrt(0.05)


def test_simulate_identity_and_errors():
    f = TimeSeries(0.01, np.array([0.0, 1.0, -2.0, 3.0]))
    assert np.array_equal(simulate_explicit(ONE, f).values, f.values)
    with pytest.raises(ZeroOperator):
        simulate_explicit(ZERO, f)
    # h^-1 - 100 h^0 vanishes at h = 0.01
    with pytest.raises(SingularStep):
        simulate_explicit(FracPoly([(1, 1), (-100, 0)]), f)


@pytest.mark.parametrize(
    "F, t, exact, tol",
    [
        (lambda s: 1 / s, 1.0, 1.0, 1e-10),
        (lambda s: 1 / s**2, 2.5, 2.5, 1e-9),
        (lambda s: s**-1.5, 1.0, HALF_DERIV_OF_T_AT_1, 1e-8),
        (lambda s: 1 / (s + 1), 0.7, math.exp(-0.7), 1e-9),
    ],
)
def test_ilt_point(F, t, exact, tol):
    assert abs(ilt_point(F, t) - exact) <= tol


def test_ilt_point_errors():
    with pytest.raises(EvaluationError):
        ilt_point(lambda s: 1 / 0, 1.0)
    with pytest.raises(ValueError):
        ilt_point(lambda s: 1 / s, 0.0)


def test_ilt_is_deterministic():
    assert ilt_point(lambda s: s**-1.5, 0.3) == ilt_point(lambda s: s**-1.5, 0.3)


def test_step_response_sqrt_tree():
    ts = step_response_implicit(derive_tree(D, ONE), 2.0, 5)
    assert ts.values[0] == 0
    np.testing.assert_allclose(ts.values[1:], 2 * np.sqrt(ts.t[1:] / np.pi), atol=1e-6)


def test_step_response_unit_resistance():
    ts = step_response_implicit(derive_tree(ONE, ONE), 3.0, 7)
    np.testing.assert_allclose(ts.values[1:], 1.0, atol=1e-8)


def test_step_response_ladder_long_time():
    # Z(s) -> k as s -> 0, so u = ILT[1/(s Z)] settles at 1/k
    ts = step_response_implicit(derive_ladder(ONE, D), 10.0, 3)
    assert abs(ts.values[-1] - 1.0) <= 0.01
    assert abs(ts.values[-1] - _stehfest_oracle(lambda s: (1 + mpmath.sqrt(1 + 4 * s)) / 2, 10.0)) <= 1e-8


def _stehfest_oracle(Z_of_real_s, t):
    mpmath.mp.dps = 40
    return float(mpmath.invertlaplace(lambda s: 1 / (s * Z_of_real_s(s)), t, method="stehfest"))


@pytest.mark.parametrize(
    "eq, Z",
    [
        (derive_tree(ONE + D, ONE + monomial(1, 2)), lambda s: mpmath.sqrt((1 + s) * (1 + s**2))),
        (derive_ladder(ONE, D), lambda s: (1 + mpmath.sqrt(1 + 4 * s)) / 2),
        # lossy tree whose roots cross real parts in the left half-plane
        (derive_tree(ONE + D, ONE + D), lambda s: 1 + s),
    ],
)
def test_implicit_step_against_real_axis_oracle(eq, Z):
    ts = step_response_implicit(eq, 2.0, 5)
    for t, u in zip(ts.t[1:], ts.values[1:]):
        assert abs(u - _stehfest_oracle(Z, t)) <= 1e-6


def test_step_response_branch_failure():
    eq = QuadraticImplicitOp(1.0, monomial(4, 0), monomial(3, 0))  # roots -1, -3
    with pytest.raises(BranchFailure):
        step_response_implicit(eq, 1.0, 3)


def test_series_csv():
    buf = io.StringIO()
    write_series_csv(TimeSeries(0.5, np.array([0.0, 0.25, 1 / 3])), buf)
    assert buf.getvalue() == "t,u\n0,0\n0.5,0.25\n1,0.33333333333333331\n"
