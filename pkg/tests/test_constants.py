import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daubconst.constants import (
    REFERENCE,
    NormRequest,
    condition_i,
    condition_i_bound,
    condition_ii,
    conjugate_exponent,
    constant_ratio,
    eq7_limit,
    lemma_limit,
    limit_of_constant,
    lp_distance_to_reference,
    minkowski_gap,
    theorem_limit,
    weighted_norm,
)
from daubconst.errors import DomainError
from daubconst.quadrature import QuadratureConfig, integrate_weighted_line
from daubconst.spectrum import haar_psi_hat_mag2


def test_limit_examples():
    assert theorem_limit(1, 2, 2) == pytest.approx(1 / (math.pi * math.sqrt(2)), rel=1e-15)
    assert theorem_limit(1, 2, 2) == pytest.approx(0.2250790790, abs=1e-10)
    assert theorem_limit(2, 2, 2) == pytest.approx(math.sqrt(7 / 24) / math.pi**2, rel=1e-14)
    assert theorem_limit(2, 2, 2) == pytest.approx(0.05472, abs=1e-5)
    assert theorem_limit(1, 2, 4) == pytest.approx((2 * math.pi) ** 0.25 / (math.pi * math.sqrt(2)), rel=1e-14)
    assert theorem_limit(1, 2, 4) == pytest.approx(0.356353, abs=1e-6)
    assert eq7_limit(2) == 1.0
    assert eq7_limit(4) == pytest.approx(0.631619, abs=1e-6)


def test_lemma_limit_k1_p4_against_quadrature():
    expected = (2 * math.pi) ** -0.25 / math.pi * ((1 - 2.0**-3) / 3) ** 0.25
    assert lemma_limit(1, 4) == pytest.approx(expected, rel=1e-14)
    cfg = QuadratureConfig(abs_tol=1e-14, rel_tol=1e-14)
    res = integrate_weighted_line(lambda w: REFERENCE.modulus(w) ** 4, -4.0, cfg=cfg)
    assert abs(res.value**0.25 - lemma_limit(1, 4)) <= 1e-10


valid_kp = st.tuples(st.integers(1, 6), st.floats(1.05, 8)).filter(lambda kp: kp[0] * kp[1] > 1.01)


@settings(max_examples=20)
@given(valid_kp, st.floats(1.05, 8))
def test_theorem_is_lemma_over_eq7(kp, q):
    k, p = kp
    assert theorem_limit(k, p, q) == pytest.approx(lemma_limit(k, p) / eq7_limit(q), rel=1e-13)


@given(st.floats(1.05, 8), st.floats(1.05, 8))
def test_theorem_limit_decreasing_in_k(p, q):
    values = [theorem_limit(k, p, q) for k in range(1, 12)]
    assert all(v > 0 for v in values)
    assert all(b < a for a, b in zip(values, values[1:]))


def test_large_k_does_not_overflow():
    assert 0 < theorem_limit(300, 2, 2) < 1e-100
    assert lemma_limit(1, 1.0000001) > 0


def test_reference_norm_matches_eq7():
    cfg = QuadratureConfig(abs_tol=1e-14, rel_tol=1e-14)
    for q in (1.5, 2.0, 3.0):
        res = integrate_weighted_line(lambda w: REFERENCE.modulus(w) ** q, 0.0, cfg=cfg)
        assert res.value ** (1 / q) == pytest.approx(eq7_limit(q), rel=1e-12)


def test_domain_errors():
    with pytest.raises(DomainError):
        theorem_limit(0, 2, 2)
    with pytest.raises(DomainError):
        theorem_limit(1, 1.0, 2)
    with pytest.raises(DomainError):
        lemma_limit(1, 0.9)
    with pytest.raises(DomainError):
        NormRequest(2, 3, 2.0)
    with pytest.raises(DomainError):
        NormRequest(2, 1, math.inf)
    with pytest.raises(DomainError):
        conjugate_exponent(1.0)
    with pytest.raises(DomainError):
        condition_i_bound(2, 2, 2.0)
    with pytest.raises(DomainError):
        condition_i(2, 1, 2.0, epsilon=4.0)
    assert limit_of_constant(0, 2, 2) == 1.0
    assert conjugate_exponent(3.0) == 1.5


@pytest.mark.parametrize("m", [1, 3, 10])
def test_weighted_norm_k0_is_one(make_ev, cfg, m):
    assert weighted_norm(NormRequest(m, 0, 2.0), make_ev(m), cfg) == pytest.approx(1.0, abs=1e-9)


def test_haar_weighted_norm_exact(make_ev, cfg):
    # int_0^inf sin^4 x / x^4 dx = pi/3 gives 1/12 for the squared norm.
    value = weighted_norm(NormRequest(1, 1, 2.0), make_ev(1), cfg)
    assert value == pytest.approx(math.sqrt(1 / 12), abs=1e-7)


def test_haar_weighted_norm_scipy_oracle(make_ev, cfg):
    from scipy.integrate import quad

    def integrand(w):
        return float(haar_psi_hat_mag2(w)) / w**2

    total = sum(quad(integrand, a, a + 4 * math.pi, limit=200, epsabs=1e-15)[0] for a in np.arange(0, 4000 * math.pi, 4 * math.pi))
    # tail: (16 / 2pi) sin^4(w/4) / w^4 with sin^4 averaging 3/8
    total += 1 / (math.pi * (4000 * math.pi) ** 3)
    oracle = math.sqrt(2 * total)
    assert weighted_norm(NormRequest(1, 1, 2.0), make_ev(1), cfg) == pytest.approx(oracle, abs=1e-6)


def test_m16_within_15_percent(make_ev, cfg):
    value = weighted_norm(NormRequest(16, 1, 2.0), make_ev(16), cfg)
    assert abs(value - lemma_limit(1, 2)) / lemma_limit(1, 2) < 0.15


def test_constant_ratio_k0_short_circuit(make_ev, cfg):
    report = constant_ratio(5, 0, 2.5, 2.5, make_ev(5), cfg, with_conditions=False)
    assert report.constant == 1.0
    assert report.theorem_limit == 1.0
    assert "denominator" not in report.quadrature_diagnostics


def test_constant_ratio_report(make_ev, cfg):
    report = constant_ratio(4, 1, 2.0, 2.0, make_ev(4), cfg)
    assert report.converged
    assert report.constant == pytest.approx(report.weighted_norm / report.denominator_norm)
    assert report.abs_error == pytest.approx(abs(report.constant - theorem_limit(1, 2, 2)))
    assert report.condition_i > 0 and report.condition_ii > 0
    skipped = constant_ratio(4, 1, 2.0, 2.0, make_ev(4), cfg, with_conditions=False)
    assert math.isnan(skipped.condition_i) and skipped.constant == report.constant


def test_constant_ratio_rejects_bad_q():
    with pytest.raises(DomainError):
        constant_ratio(2, 1, 2.0, 1.0)


def test_condition_i_decreasing_and_bounded(make_ev, cfg):
    values = []
    for m in (2, 4, 8, 16):
        value = condition_i(m, 1, 2.0, 0.5, make_ev(m), cfg)
        assert 0 < value <= condition_i_bound(m, 1, 2.0, 0.5)
        values.append(value)
    assert all(b < a for a, b in zip(values, values[1:]))


def test_condition_i_haar_closed_form(make_ev, cfg):
    # |w|^-2 |psi^_1|^2 = (16 / 2pi) sin^4(w/4) / w^4 near 0, integrated on [-eps, eps].
    from scipy.integrate import quad

    eps = 0.5
    oracle = 2 * quad(lambda w: haar_psi_hat_mag2(w) / w**2, 0, eps, epsabs=1e-16, epsrel=1e-13)[0]
    assert condition_i(1, 1, 2.0, eps, make_ev(1), cfg) == pytest.approx(oracle, rel=1e-9)


def test_condition_ii_self_distance_is_zero(cfg):
    res = lp_distance_to_reference(REFERENCE.modulus, 2.0, cfg)
    assert res.value == 0.0


def test_condition_ii_decreasing(make_ev, cfg):
    values = [condition_ii(m, 2.0, make_ev(m), cfg) for m in (2, 4, 8, 16)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_condition_ii_haar_riemann_oracle(make_ev, cfg):
    step, top = 1e-3, 4000.0
    w = (np.arange(int(top / step)) + 0.5) * step
    diff = np.sqrt(haar_psi_hat_mag2(w)) - REFERENCE.modulus(w)
    # beyond `top`, |psi^|^2 ~ (16 / 2pi) (3/8) / w^2
    tail = 3 / math.pi / top
    oracle = math.sqrt(2 * (math.fsum(diff**2) * step + tail))
    assert condition_ii(1, 2.0, make_ev(1), cfg) == pytest.approx(oracle, abs=1e-4)


def test_condition_ii_complex_mode_stays_away_from_zero(make_ev, cfg):
    modulus = condition_ii(4, 2.0, make_ev(4, True), cfg)
    full = condition_ii(4, 2.0, make_ev(4, True), cfg, complex_mode=True)
    # the phase only adds distance
    assert full >= modulus - 1e-9
    assert full > 0.5


@pytest.mark.parametrize("m,k,p", [(2, 1, 2.0), (4, 1, 3.0), (8, 2, 2.0), (16, 1, 1.5)])
def test_minkowski_sandwich(make_ev, cfg, m, k, p):
    req = NormRequest(m, k, p)
    gap = abs(weighted_norm(req, make_ev(m), cfg) - lemma_limit(k, p))
    assert gap <= minkowski_gap(req, make_ev(m), cfg) + 1e-8
