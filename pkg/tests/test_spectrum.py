import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daubconst.errors import PreconditionError
from daubconst.quadrature import integrate_weighted_line
from daubconst.spectrum import (
    INV_2PI,
    SpectrumEvaluator,
    haar_phi_hat_mag2,
    haar_psi_hat_mag2,
    truncation_depth,
)


def test_phi_hat_at_zero(make_ev):
    for m in (1, 2, 8, 20):
        assert make_ev(m).phi_hat_mag2(0.0) == pytest.approx(INV_2PI, rel=1e-15)


def test_haar_closed_forms(make_ev):
    ev = make_ev(1)
    grid = np.linspace(-40, 40, 2001)
    assert np.max(np.abs(ev.phi_hat_mag2(grid) - haar_phi_hat_mag2(grid))) <= 1e-13
    assert np.max(np.abs(ev.psi_hat_mag2(grid) - haar_psi_hat_mag2(grid))) <= 1e-13
    assert ev.phi_hat_mag2(2 * math.pi) == pytest.approx(0.0, abs=1e-30)


def test_scalar_and_array_outputs(make_ev):
    ev = make_ev(3)
    assert isinstance(ev.psi_hat_mag2(1.0), float)
    out = ev.psi_hat_mag2(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert out.shape == (2, 2)
    assert out[1, 0] == ev.psi_hat_mag2(3.0)


def test_psi_hat_vanishes_at_origin(make_ev):
    for m in (1, 4, 16):
        assert make_ev(m).psi_hat_mag2(0.0) == 0.0


@pytest.mark.parametrize("m", [1, 2, 3, 6])
def test_zero_of_order_2m(make_ev, m):
    ev = make_ev(m)
    w = np.array([1e-3, 2e-3])
    vals = ev.psi_hat_mag2(w)
    assert math.log2(vals[1] / vals[0]) == pytest.approx(2 * m, abs=1e-3)


@pytest.mark.parametrize("m", [1, 2, 4, 8])
@pytest.mark.parametrize("w0", [0.3, 1.0, 2.5, 3.1])
def test_calderon_sum(make_ev, m, w0):
    ev = make_ev(m)
    total = math.fsum(ev.psi_hat_mag2(2.0**j * w0) for j in range(-60, 60))
    assert total == pytest.approx(INV_2PI, abs=1e-9)


@pytest.mark.parametrize("m", [2, 5, 16])
def test_plancherel(make_ev, cfg, m):
    ev = make_ev(m)
    res = integrate_weighted_line(ev.psi_hat_mag2, 0.0, cfg=cfg, panel_width=min(math.pi / 4, 2 * math.pi / (2 * m - 1)))
    assert res.converged
    assert res.value == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.floats(-60, 60))
def test_two_scale_relation(m, w):
    ev = SpectrumEvaluator.for_order(m)
    from daubconst.filterbank import h_mag2

    lhs = ev.phi_hat_mag2(w)
    rhs = h_mag2(m, w / 2) * ev.phi_hat_mag2(w / 2)
    assert lhs == pytest.approx(rhs, abs=1e-14)


def test_depth_stability(make_ev):
    # Asking for much more accuracy changes nothing visible.
    base = make_ev(4)
    deep = SpectrumEvaluator.for_order(4, truncation_tol=1e-16, min_depth=40)
    grid = np.linspace(0, 60, 301)
    assert np.max(np.abs(base.psi_hat_mag2(grid) - deep.psi_hat_mag2(grid))) <= 1e-14


@pytest.mark.parametrize("m", [2, 4, 8])
def test_far_field_envelope_decreases(make_ev, m):
    ev = make_ev(m)
    grid = np.linspace(0, 2 * math.pi, 2049)
    peaks = [float(np.max(ev.psi_hat_mag2(2.0**j * (2 * math.pi + grid)))) for j in range(3, 9)]
    assert all(b <= a for a, b in zip(peaks, peaks[1:]))


def test_truncation_depth_examples():
    assert truncation_depth(0.0, 4, 1e-12) == 20
    assert truncation_depth(1.0, 2, 1e-12) == 20
    assert truncation_depth(1e12, 1, 1e-12) > 20
    depths = truncation_depth(np.array([0.0, 1.0, 1e6]), 2, 1e-12)
    assert depths.dtype.kind == "i" and depths.shape == (3,)
    with pytest.raises(ValueError):
        truncation_depth(1.0, 2, 0.0)


@given(st.integers(1, 20), st.floats(0, 1e8), st.floats(0, 1e8))
def test_truncation_depth_monotone(m, a, b):
    lo, hi = sorted((a, b))
    assert truncation_depth(lo, m, 1e-12) <= truncation_depth(hi, m, 1e-12)


@given(st.integers(1, 20), st.floats(1e-3, 1e8))
def test_truncation_depth_meets_budget(m, w):
    from daubconst.filterbank import c_m

    depth = truncation_depth(w, m, 1e-12)
    tail = math.fsum(2.0 ** (-2 * m * l) for l in range(depth + 1, depth + 60))
    bound = math.exp(math.log(c_m(m) / (2 * m)) + 2 * m * math.log(w) + math.log(tail)) if tail else 0.0
    assert bound <= 1e-12 * (1 + 1e-9)


@pytest.mark.parametrize("m", [2, 4, 8])
def test_complex_matches_modulus(make_ev, m):
    ev = make_ev(m, True)
    grid = np.linspace(-8 * math.pi, 8 * math.pi, 256)
    diff = np.abs(np.abs(ev.psi_hat_complex(grid)) ** 2 - ev.psi_hat_mag2(grid))
    assert np.max(diff) <= 1e-7
    assert abs(ev.phi_hat_complex(0.0) - math.sqrt(INV_2PI)) <= 1e-13


def test_haar_complex_closed_form(make_ev):
    ev = make_ev(1, True)
    w = np.linspace(0.1, 30, 200)
    # phi = 1 on [-1, 0] gives phi^(w) = (2pi)^-1/2 (e^{iw} - 1) / (iw).
    expected = (np.exp(1j * w) - 1) / (1j * w) * math.sqrt(INV_2PI)
    assert np.max(np.abs(ev.phi_hat_complex(w) - expected)) <= 1e-10


def test_complex_needs_coefficients(make_ev):
    with pytest.raises(PreconditionError):
        make_ev(3).psi_hat_complex(1.0)


def test_evaluator_validation():
    from daubconst.filterbank import FilterSpec

    with pytest.raises(ValueError):
        SpectrumEvaluator(FilterSpec(2), truncation_tol=0.0)
    with pytest.raises(ValueError):
        SpectrumEvaluator(FilterSpec(2), min_depth=0)
