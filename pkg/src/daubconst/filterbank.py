"""Daubechies filters H_m.

The squared modulus ``|H_m(w)|^2 = cos^2(w/2)^m * P_{m-1}(sin^2(w/2))`` is the
canonical definition here; time-domain coefficients are derived from it by
spectral factorisation and only exist for moderate orders.

Sign convention: ``H_m(w) = 2**-0.5 * sum_l h[l] * exp(+1j * l * w)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import FactorizationError, PreconditionError, UnsupportedOrderError
from .quadrature import QuadratureConfig, integrate

SQRT2 = math.sqrt(2.0)
MAX_FACTOR_ORDER = 12
MAX_ORDER = 10**6

# Checks applied to user-supplied coefficients.
_SUM_TOL = 1e-9
_MAG_TOL = 1e-8
_CHECK_GRID = np.linspace(-math.pi, math.pi, 1024)
# Residual above which a factorisation is rejected.
_FACTOR_TOL = 1e-7


def _check_order(m):
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise ValueError(f"order m must be a positive integer, got {m!r}")
    return int(m)


@lru_cache(maxsize=None)
def binomial_coefficients(m: int) -> tuple[float, ...]:
    """Coefficients ``C(m-1+k, k)``, ``k = 0..m-1``, of P_{m-1}."""
    m = _check_order(m)
    coeffs = [1.0]
    for k in range(1, m):
        coeffs.append(coeffs[-1] * (m - 1 + k) / k)
    return tuple(float(round(c)) for c in coeffs)


@dataclass(frozen=True)
class BinomialPolynomial:
    """The polynomial ``P_{m-1}(x) = sum_k C(m-1+k, k) x**k``."""

    m: int

    def __post_init__(self):
        _check_order(self.m)

    @property
    def coefficients(self) -> tuple[float, ...]:
        return binomial_coefficients(self.m)

    def __call__(self, x):
        return p_poly_eval(self.m, x)


def p_poly_eval(m: int, x):
    """Evaluate P_{m-1} at ``x`` by Horner's scheme (scalar or array)."""
    coeffs = binomial_coefficients(m)
    x = np.asarray(x, dtype=float)
    acc = np.full_like(x, coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc if acc.ndim else float(acc)


@lru_cache(maxsize=None)
def c_m(m: int) -> float:
    """Normaliser ``Gamma(m+1/2) / (sqrt(pi) Gamma(m))``.

    Equals ``1 / int_0^pi sin(u)**(2m-1) du``. Computed by the recurrence
    ``c_1 = 1/2``, ``c_m = c_{m-1} (2m-1)/(2m-2)``, which never overflows.
    """
    m = _check_order(m)
    if m > MAX_ORDER:
        raise ValueError(f"order m={m} is implausibly large (limit {MAX_ORDER})")
    value = 0.5
    for n in range(2, m + 1):
        value *= (2 * n - 1) / (2 * n - 2)
    return value


def _as_output(values, like):
    return values if np.ndim(like) else float(values)


def h_mag2(m: int, omega):
    """``|H_m(omega)|^2``; 2*pi-periodic, even, with values in [0, 1]."""
    omega = np.asarray(omega, dtype=float)
    half = 0.5 * omega
    c2 = np.cos(half) ** 2
    s2 = np.sin(half) ** 2
    # Exact values lie in [0, 1]; clip rounding overshoot.
    return _as_output(np.clip(c2**m * p_poly_eval(m, s2), 0.0, 1.0), omega)


def h_mag2_highpass(m: int, omega):
    """``|H_m(omega + pi)|^2`` evaluated without forming ``omega + pi``.

    Uses ``sin^2(w/2)^m * P_{m-1}(cos^2(w/2))`` so that the zero of order 2m
    at ``omega = 0`` keeps full relative accuracy.
    """
    omega = np.asarray(omega, dtype=float)
    half = 0.5 * omega
    c2 = np.cos(half) ** 2
    s2 = np.sin(half) ** 2
    return _as_output(np.clip(s2**m * p_poly_eval(m, c2), 0.0, 1.0), omega)


def _reduce_to_half_period(omega: float) -> float:
    reduced = math.fmod(abs(omega), 2.0 * math.pi)
    return 2.0 * math.pi - reduced if reduced > math.pi else reduced


def h_mag2_integral(m: int, omega: float, tol: float = 1e-10) -> float:
    """``|H_m(omega)|^2`` from the integral form ``1 - c_m int_0^w sin^(2m-1)``.

    The form is native to ``[0, pi]``; other arguments are folded back by
    evenness and 2*pi-periodicity.

    Raises
    ------
    ConvergenceError
        If the quadrature cannot reach ``tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    w = _reduce_to_half_period(float(omega))
    if w == 0.0:
        return 1.0
    cm = c_m(m)
    power = 2 * m - 1
    cfg = QuadratureConfig(abs_tol=tol / cm, rel_tol=tol)
    res = integrate(lambda u: np.sin(u) ** power, 0.0, w, cfg).check(
        f"h_mag2_integral(m={m}, omega={omega})"
    )
    return 1.0 - cm * res.value


@dataclass(frozen=True)
class FilterSpec:
    """One Daubechies filter: order ``m`` and optional coefficients ``h[0..2m-1]``."""

    m: int
    coefficients: tuple[float, ...] | None = None

    def __post_init__(self):
        _check_order(self.m)
        if self.coefficients is None:
            return
        h = tuple(float(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", h)
        if len(h) != 2 * self.m:
            raise ValueError(f"expected {2 * self.m} coefficients, got {len(h)}")
        if abs(math.fsum(h) - SQRT2) > _SUM_TOL:
            raise ValueError(f"coefficients must sum to sqrt(2), got {math.fsum(h)!r}")
        err = magnitude_residual(self.m, h)
        if err > _MAG_TOL:
            raise ValueError(f"coefficients do not reproduce |H_m|^2 (residual {err:.3g})")

    @property
    def has_coefficients(self) -> bool:
        return self.coefficients is not None

    def require_coefficients(self) -> np.ndarray:
        if self.coefficients is None:
            raise PreconditionError(f"filter of order {self.m} carries no coefficients")
        return np.asarray(self.coefficients)


def _trig_poly(h, omega):
    omega = np.asarray(omega, dtype=float)
    phase = np.exp(1j * np.multiply.outer(omega, np.arange(len(h))))
    return (phase @ np.asarray(h, dtype=float)) / SQRT2


def magnitude_residual(m: int, h, grid=_CHECK_GRID) -> float:
    """Sup-norm distance between ``|sum h e^{ilw}|^2 / 2`` and ``h_mag2``."""
    values = np.abs(_trig_poly(h, grid)) ** 2
    return float(np.max(np.abs(values - h_mag2(m, grid))))


def h_complex(spec: FilterSpec, omega):
    """Complex value of ``H_m(omega)`` from the filter coefficients."""
    h = spec.require_coefficients()
    out = _trig_poly(h, omega)
    return out if np.ndim(omega) else complex(out)


def _polish_root(coeffs: np.ndarray, root: complex, steps: int = 5) -> complex:
    deriv = np.polyder(coeffs)
    for _ in range(steps):
        d = np.polyval(deriv, root)
        if d == 0:
            break
        root = root - np.polyval(coeffs, root) / d
    return complex(root)


@lru_cache(maxsize=None)
def _factorize(m: int) -> tuple[float, ...]:
    if m == 1:
        return (1.0 / SQRT2, 1.0 / SQRT2)
    # P_{m-1} in descending powers of y = sin^2(w/2).
    poly = np.asarray(binomial_coefficients(m)[::-1])
    y_roots = [_polish_root(poly, r) for r in np.roots(poly)]

    # y = (2 - z - 1/z)/4  <=>  z^2 - (2 - 4y) z + 1 = 0; keep |z| > 1 so that
    # the polynomial in z^-1 (the causal transfer function) is minimum phase.
    z_roots = []
    for y in y_roots:
        b = 2.0 - 4.0 * y
        disc = np.sqrt(b * b - 4.0 + 0j)
        pair = ((b + disc) / 2.0, (b - disc) / 2.0)
        z_roots.append(max(pair, key=abs))

    poly_z = np.poly1d([1.0])
    for z in z_roots:
        poly_z *= np.poly1d([1.0, -z])
    # (1 + z)^m / 2^m carries the zeros at w = pi.
    poly_z *= np.poly1d([0.5, 0.5]) ** m
    ascending = poly_z.coeffs[::-1]
    if np.max(np.abs(ascending.imag)) > 1e-9 * np.max(np.abs(ascending)):
        raise FactorizationError(f"non-real factor for m={m}")
    ascending = ascending.real / np.sum(ascending.real)
    h = SQRT2 * ascending
    if h[0] < 0:
        h = -h
    return tuple(float(v) for v in h)


def spectral_factorize(m: int) -> FilterSpec:
    """Minimum-phase coefficients ``h_m(0..2m-1)`` with ``sum h = sqrt(2)``.

    Raises
    ------
    UnsupportedOrderError
        For ``m > 12``, where double-precision root finding is too
        ill-conditioned.
    FactorizationError
        If the reconstructed ``|H_m|^2`` misses ``h_mag2`` by more than 1e-7.
    """
    m = _check_order(m)
    if m > MAX_FACTOR_ORDER:
        raise UnsupportedOrderError(
            f"spectral factorisation supports 1 <= m <= {MAX_FACTOR_ORDER}, got {m}"
        )
    h = _factorize(m)
    residual = magnitude_residual(m, h)
    if residual > _FACTOR_TOL:
        raise FactorizationError(f"factorisation residual {residual:.3g} for m={m}")
    return FilterSpec(m, h)
