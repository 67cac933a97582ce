"""Independent cross-checks of the spectrum and of the coefficient inequality.

* :func:`cascade` builds psi_m on a dyadic grid from the filter coefficients
  (time domain), and :func:`spectrum_crosscheck` compares its discrete
  Fourier transform with the infinite-product spectrum.
* :func:`bound_demo` measures ``|<psi_{j,v}, f>|`` for smooth band-limited
  test functions ``f`` and checks it against
  ``C_{k;p,q} 2^(-j(k - 1/p + 1/q)) ||psi^||_q ||(iw)^k f^||_p'``.

Time-domain conventions follow ``phi^(w) = (2pi)^-1/2 prod H(w 2^-l)`` with
``H(w) = 2^-1/2 sum h_l e^{ilw}``: ``phi(x) = sqrt2 sum h_l phi(2x + l)`` lives
on ``[-(2m-1), 0]`` and ``psi(x) = sqrt2 sum (-1)^l h_l phi(2x - l - 1)`` on
``[-(m-1), m]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .constants import NormRequest, conjugate_exponent, weighted_norm
from .errors import PreconditionError
from .filterbank import SQRT2, FilterSpec
from .quadrature import QuadratureConfig, integrate
from .spectrum import SpectrumEvaluator

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
MAX_ITERATIONS = 16


@dataclass(frozen=True)
class CascadeResult:
    """Samples of psi_m at ``-(m-1) + n * 2**-iterations``, ``n = 0..(2m-1) 2**iterations``."""

    m: int
    iterations: int
    samples: np.ndarray = field(repr=False)

    @property
    def grid_step(self) -> float:
        return 2.0**-self.iterations

    @property
    def grid(self) -> np.ndarray:
        return -(self.m - 1) + self.grid_step * np.arange(self.samples.size)

    def l2_norm(self) -> float:
        """Discrete L2 norm ``sqrt(sum psi_n^2 * step)``."""
        return math.sqrt(float(np.sum(self.samples**2)) * self.grid_step)


def _integer_values(h: np.ndarray) -> np.ndarray:
    """phi~ at 0..2m-1, where phi~(x) = phi(-x) = sqrt2 sum h_l phi~(2x - l)."""
    n = h.size
    if n == 2:
        # Haar: the eigenvalue 1 is double; take the right-continuous indicator.
        return np.array([1.0, 0.0])
    a = np.zeros((n, n))
    for row in range(n):
        for col in range(n):
            if 0 <= 2 * row - col < n:
                a[row, col] = SQRT2 * h[2 * row - col]
    eigvals, eigvecs = np.linalg.eig(a)
    vec = np.real(eigvecs[:, np.argmin(np.abs(eigvals - 1.0))])
    return vec / vec.sum()


def _refine(h: np.ndarray, coarse: np.ndarray, level: int) -> np.ndarray:
    """phi~ on the grid 2**-level from its values on 2**-(level-1)."""
    stride = 2 ** (level - 1)
    fine = np.zeros(2 * (coarse.size - 1) + 1)
    for l, coeff in enumerate(h):
        shift = l * stride
        # fine[n] += coeff * coarse[n - shift]
        stop = min(fine.size, coarse.size + shift)
        if shift < stop:
            fine[shift:stop] += coeff * coarse[: stop - shift]
    return SQRT2 * fine


def cascade(spec: FilterSpec, iterations: int = 12) -> CascadeResult:
    """Sample psi_m on the dyadic grid of step ``2**-iterations``.

    phi is refined from its exact values at the integers (the eigenvector of
    the two-scale matrix), so the samples are exact dyadic values up to
    rounding.
    """
    if not spec.has_coefficients:
        raise PreconditionError("cascade needs filter coefficients")
    if not 1 <= iterations <= MAX_ITERATIONS:
        raise ValueError(f"iterations must lie in 1..{MAX_ITERATIONS}, got {iterations}")
    h = np.asarray(spec.coefficients)
    m = spec.m
    phi = _integer_values(h)
    for level in range(1, iterations):
        phi = _refine(h, phi, level)

    # psi(x_n) = sqrt2 sum_l (-1)^l h_l phi~((l + 2m - 1) - n 2^-(J-1))
    stride = 2 ** (iterations - 1)
    n = np.arange((2 * m - 1) * 2**iterations + 1)
    psi = np.zeros(n.size)
    for l, coeff in enumerate(h):
        idx = (l + 2 * m - 1) * stride - n
        valid = (idx >= 0) & (idx < phi.size)
        psi[valid] += (-1) ** l * coeff * phi[idx[valid]]
    return CascadeResult(m, iterations, SQRT2 * psi)


def sampled_transform(cr: CascadeResult, omega) -> np.ndarray:
    """Rectangle-rule Fourier transform ``(2pi)^-1/2 sum psi_n e^{-i w t_n} step``."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    t = cr.grid
    out = np.empty(omega.size, dtype=complex)
    chunk = max(1, (1 << 22) // t.size)
    for start in range(0, omega.size, chunk):
        w = omega[start : start + chunk]
        out[start : start + chunk] = np.exp(-1j * np.multiply.outer(w, t)) @ cr.samples
    return out * cr.grid_step * INV_SQRT_2PI


def default_crosscheck_grid(n: int = 513) -> np.ndarray:
    return np.linspace(-8.0 * math.pi, 8.0 * math.pi, n)


def spectrum_crosscheck(
    cr: CascadeResult,
    ev: SpectrumEvaluator | None = None,
    grid: Sequence[float] | None = None,
    reference: Callable[[np.ndarray], np.ndarray] | None = None,
) -> float:
    """Max over ``grid`` of ``| |DFT(samples)| - sqrt(|psi^|^2) |``.

    ``reference`` overrides the squared modulus taken from ``ev``; it is
    used to compare against closed forms.
    """
    grid = default_crosscheck_grid() if grid is None else np.asarray(grid, dtype=float)
    if reference is None:
        if ev is None:
            raise ValueError("need an evaluator or a reference spectrum")
        if ev.m != cr.m:
            raise ValueError(f"cascade order {cr.m} does not match evaluator order {ev.m}")
        reference = ev.psi_hat_mag2
    measured = np.abs(sampled_transform(cr, grid))
    return float(np.max(np.abs(measured - np.sqrt(reference(grid)))))


# test functions -----------------------------------------------------------


@dataclass(frozen=True)
class TestFunctionSpec:
    """``f^(w) = (iw)^-k g(|w|)`` with a smooth bump ``g`` on ``[a, b] ⊂ (0, inf)``.

    ``g`` is a Gaussian of the given width centred at ``center``, multiplied
    by a C-infinity taper vanishing at ``a`` and ``b``, and scaled so that
    ``|| g ||_{p'} = || (iw)^k f^ ||_{p'} = 1`` (both half-lines counted).
    """

    __test__ = False

    k: int
    p_prime: float
    center: float
    width: float
    scale: float = field(init=False, repr=False)

    def __post_init__(self):
        if self.width <= 0 or self.center <= 0:
            raise ValueError("center and width must be positive")
        object.__setattr__(self, "scale", 1.0)
        norm = self.constraint_norm()
        object.__setattr__(self, "scale", 1.0 / norm)

    @property
    def support(self) -> tuple[float, float]:
        return max(self.center - 3.0 * self.width, 0.25 * self.center), self.center + 3.0 * self.width

    def profile(self, omega):
        """``g(|w|)``."""
        w = np.abs(np.asarray(omega, dtype=float))
        a, b = self.support
        tau = (2.0 * w - a - b) / (b - a)
        inside = np.abs(tau) < 1.0
        safe = np.where(inside, tau, 0.0)
        taper = np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe**2)), 0.0)
        gauss = np.exp(-0.5 * ((w - self.center) / self.width) ** 2)
        return self.scale * gauss * taper

    def f_hat(self, omega):
        w = np.asarray(omega, dtype=float)
        safe = np.where(w == 0.0, 1.0, w)
        return np.where(w == 0.0, 0.0, (1j * safe) ** (-self.k) * self.profile(w))

    def constraint_norm(self, cfg: QuadratureConfig | None = None) -> float:
        """``|| (iw)^k f^ ||_{p'}`` recomputed by quadrature."""
        cfg = cfg or QuadratureConfig(abs_tol=1e-14, rel_tol=1e-13)
        a, b = self.support
        res = integrate(lambda w: self.profile(w) ** self.p_prime, a, b, cfg).check("test function norm")
        return (2.0 * res.value) ** (1.0 / self.p_prime)

    def l2_norm_squared(self, cfg: QuadratureConfig | None = None) -> float:
        """``|| f ||_2^2 = || f^ ||_2^2``."""
        cfg = cfg or QuadratureConfig(abs_tol=1e-14, rel_tol=1e-13)
        a, b = self.support
        res = integrate(lambda w: np.abs(self.f_hat(w)) ** 2, a, b, cfg).check("test function energy")
        return 2.0 * res.value

    @property
    def label(self) -> str:
        return f"bump(center={self.center:.6g}, width={self.width:.6g})"


DEFAULT_CENTERS = (0.5 * math.pi, 1.5 * math.pi, 3.0 * math.pi)
DEFAULT_WIDTHS = (0.2, 1.0)


def bump_suite(
    k: int,
    p: float,
    centers: Iterable[float] = DEFAULT_CENTERS,
    widths: Iterable[float] = DEFAULT_WIDTHS,
) -> list[TestFunctionSpec]:
    """Bumps normalised in ``L_{p'}`` probing the pass band and the stop band."""
    p_prime = conjugate_exponent(p)
    return [TestFunctionSpec(k, p_prime, c, w) for c in centers for w in widths]


def inner_product(
    m: int,
    j: int,
    v: int,
    tf: TestFunctionSpec,
    ev: SpectrumEvaluator,
    cfg: QuadratureConfig | None = None,
) -> float:
    """``|<psi_{j,v}, f>|`` computed in the frequency domain.

    ``(psi_{j,v})^(w) = 2^(-j/2) exp(-i w v 2^-j) psi^(2^-j w)``; both
    functions are real, so the integral over ``w < 0`` is the conjugate of
    the one over ``w > 0`` and only ``[a, b]`` is integrated.
    """
    if ev.m != m:
        raise ValueError(f"evaluator order {ev.m} does not match m={m}")
    ev.spec.require_coefficients()
    cfg = cfg or QuadratureConfig(abs_tol=1e-12, rel_tol=1e-10)
    scale = 2.0**-j

    def integrand(w):
        atom = math.sqrt(scale) * np.exp(-1j * w * v * scale) * ev.psi_hat_complex(scale * w)
        return np.real(atom * np.conj(tf.f_hat(w)))

    a, b = tf.support
    res = integrate(integrand, a, b, cfg, panel_width=0.25).check("inner product")
    return abs(2.0 * res.value)


def coefficient_bound(
    m: int,
    k: int,
    p: float,
    q: float,
    j: int,
    ev: SpectrumEvaluator | None = None,
    cfg: QuadratureConfig | None = None,
) -> float:
    """``C_{k;p,q} 2^(-j(k - 1/p + 1/q)) ||psi^||_q`` for unit-norm test functions.

    Since ``C ||psi^||_q`` is the weighted norm itself, ``q`` only enters
    through the scaling exponent.
    """
    if not 1 < q < math.inf:
        raise ValueError(f"q must lie in (1, inf), got {q}")
    ev = ev or SpectrumEvaluator.for_order(m)
    return weighted_norm(NormRequest(m, k, p), ev, cfg) * bound_scaling(k, p, q, j)


def bound_scaling(k: int, p: float, q: float, j: int) -> float:
    return 2.0 ** (-j * (k - 1.0 / p + 1.0 / q))


@dataclass(frozen=True)
class BoundRow:
    m: int
    k: int
    p: float
    q: float
    j: int
    v: int
    inner_product: float
    bound: float
    test_function: str

    @property
    def ratio(self) -> float:
        return self.inner_product / self.bound

    @property
    def violated(self) -> bool:
        return self.inner_product > self.bound


def bound_demo(
    m: int = 4,
    k: int = 1,
    p: float = 2.0,
    q: float = 2.0,
    js: Iterable[int] = range(6),
    vs: Iterable[int] = (0, 1, 5),
    suite: Sequence[TestFunctionSpec] | None = None,
    ev: SpectrumEvaluator | None = None,
    cfg: QuadratureConfig | None = None,
) -> list[BoundRow]:
    """Measure every ``|<psi_{j,v}, f>|`` of the suite against its bound."""
    ev = ev if ev is not None and ev.spec.has_coefficients else SpectrumEvaluator.for_order(m, True)
    suite = bump_suite(k, p) if suite is None else suite
    base = weighted_norm(NormRequest(m, k, p), ev, cfg)
    js, vs = list(js), list(vs)
    rows = []
    for tf in suite:
        for j in js:
            bound = base * bound_scaling(k, p, q, j)
            for v in vs:
                value = inner_product(m, j, v, tf, ev)
                rows.append(BoundRow(m, k, p, q, j, v, value, bound, tf.label))
    return rows
