import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daubconst.errors import ConvergenceError
from daubconst.quadrature import (
    IntegralResult,
    QuadratureConfig,
    _geometric_remainder,
    integrate,
    integrate_weighted_line,
)

TIGHT = QuadratureConfig(abs_tol=1e-13, rel_tol=1e-13)


def test_examples():
    assert integrate(np.sin, 0, math.pi, TIGHT).value == pytest.approx(2.0, abs=1e-13)
    assert integrate(lambda w: w**-2.0, 1, 2, TIGHT).value == pytest.approx(0.5, abs=1e-13)
    assert integrate(lambda x: x**3, 0, 1, TIGHT).value == pytest.approx(0.25, abs=1e-14)


def test_empty_interval_and_bad_limits():
    assert integrate(np.cos, 1.0, 1.0).value == 0.0
    with pytest.raises(ValueError):
        integrate(np.cos, 2.0, 1.0)
    with pytest.raises(ValueError):
        integrate(np.cos, 0.0, math.inf)


def test_non_finite_integrand_is_an_error():
    with pytest.raises(ValueError):
        integrate(lambda x: np.full_like(x, np.nan), 0, 1)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(0.1, 3), st.floats(0.1, 3))
def test_additivity(a, d1, d2):
    b, c = a + d1, a + d1 + d2
    f = lambda x: np.exp(np.sin(3 * x))
    whole = integrate(f, a, c, TIGHT).value
    parts = integrate(f, a, b, TIGHT).value + integrate(f, b, c, TIGHT).value
    assert whole == pytest.approx(parts, abs=1e-11)


def test_step_function_exact_with_breakpoint():
    step = lambda x: np.where(x < 1.3, 1.0, 0.0)
    res = integrate(step, 0.0, 2.0, TIGHT, points=[1.3])
    assert res.value == pytest.approx(1.3, abs=1e-14)
    assert res.converged


def test_refinement_reduces_error():
    f = lambda x: np.sqrt(x)
    loose = integrate(f, 0, 1, QuadratureConfig(abs_tol=1e-5, rel_tol=1e-5))
    tight = integrate(f, 0, 1, QuadratureConfig(abs_tol=1e-12, rel_tol=1e-12))
    assert abs(tight.value - 2 / 3) <= 1e-12
    assert tight.evaluations > loose.evaluations


def test_unconverged_result_is_flagged():
    cfg = QuadratureConfig(abs_tol=1e-15, rel_tol=1e-15, max_depth=10)
    res = integrate(lambda x: np.sin(1.0 / x), 1e-6, 1.0, cfg)
    assert not res.converged
    with pytest.raises(ConvergenceError) as info:
        res.check("oscillation")
    assert info.value.result is res


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_depth=5)
    assert QuadratureConfig(abs_tol=1e-3, rel_tol=1e-2).tolerance(10.0) == pytest.approx(0.1)


def test_geometric_remainder():
    assert _geometric_remainder([1.0]) == 0.0
    assert _geometric_remainder([1.0, 0.5]) == pytest.approx(0.5)
    assert _geometric_remainder([1.0, 2.0]) == 0.0


def brick_wall(w):
    w = np.abs(w)
    return np.where((w >= math.pi) & (w <= 2 * math.pi), 1.0 / (2 * math.pi), 0.0)


def test_weighted_line_brick_wall():
    # 2 * int_pi^2pi w^-2 / (2pi) = 1 / (2 pi^2)
    res = integrate_weighted_line(brick_wall, -2.0, cfg=TIGHT)
    assert res.value == pytest.approx(1 / (2 * math.pi**2), abs=1e-12)
    assert integrate_weighted_line(brick_wall, 0.0, cfg=TIGHT).value == pytest.approx(1.0, abs=1e-12)


def test_weighted_line_haar_power_tail():
    # Haar |psi^|^2 decays like w^-2: the dyadic tail must be extrapolated.
    haar = lambda w: np.sin(w / 4) ** 4 / (w / 4) ** 2 / (2 * math.pi)
    res = integrate_weighted_line(lambda w: np.where(w == 0, 0.0, haar(w)), 0.0)
    assert res.converged
    assert res.value == pytest.approx(1.0, abs=1e-6)
    assert res.blocks_used >= 3


def test_weighted_line_rejects_positive_weight():
    with pytest.raises(ValueError):
        integrate_weighted_line(brick_wall, 0.5)


def test_integral_result_defaults():
    res = IntegralResult(1.0, 0.0)
    assert res.converged and res.check() is res
