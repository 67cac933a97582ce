"""Fourier transforms of the Daubechies scaling function and wavelet.

With the unitary transform ``f^(w) = (2 pi)**-0.5 int f(x) exp(-1j w x) dx``::

    |phi^(w)|^2 = 1/(2 pi) * prod_{l>=1} |H_m(w 2**-l)|^2
    |psi^(w)|^2 = |H_m(w/2 + pi)|^2 * |phi^(w/2)|^2

The magnitude path uses only ``|H_m|^2`` and works for any order. The complex
path needs filter coefficients and is meant for inner-product checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filterbank import (
    SQRT2,
    FilterSpec,
    c_m,
    h_complex,
    h_mag2,
    h_mag2_highpass,
    spectral_factorize,
)

INV_2PI = 1.0 / (2.0 * math.pi)
DEFAULT_MIN_DEPTH = 20


def truncation_depth(omega, m: int, tol: float, min_depth: int = DEFAULT_MIN_DEPTH):
    """Number of product factors needed at ``omega`` for relative accuracy ``tol``.

    Since ``1 - |H_m(t)|^2 <= c_m |t|^(2m) / (2m)``, dropping the factors
    ``l > L`` changes the product by at most
    ``c_m |w|^(2m) / (2m) * sum_{l>L} 2**(-2ml)``. The smallest ``L >= min_depth``
    keeping this below ``tol`` is returned (elementwise for arrays).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    omega = np.abs(np.asarray(omega, dtype=float))
    two_m = 2 * m
    const = (
        math.log2(c_m(m) / two_m) - math.log2(1.0 - 4.0**-m) - math.log2(tol)
    ) / two_m
    with np.errstate(divide="ignore"):
        raw = const + np.log2(omega) - 1.0
    depth = np.where(omega > 0, np.ceil(raw), min_depth)
    depth = np.maximum(depth, min_depth).astype(int)
    return depth if depth.ndim else int(depth)


def haar_phi_hat_mag2(omega):
    """Closed form ``|phi^|^2`` for m = 1: ``(1/2pi) (sin(w/2)/(w/2))^2``."""
    omega = np.asarray(omega, dtype=float)
    return INV_2PI * np.sinc(omega / (2.0 * math.pi)) ** 2


def haar_psi_hat_mag2(omega):
    """Closed form ``|psi^|^2`` for m = 1: ``(1/2pi) sin^4(w/4) / (w/4)^2``."""
    omega = np.asarray(omega, dtype=float)
    quarter = omega / 4.0
    return INV_2PI * np.sin(quarter) ** 2 * np.sinc(quarter / math.pi) ** 2


@dataclass(frozen=True)
class SpectrumEvaluator:
    """Evaluate ``|phi^_m|^2``, ``|psi^_m|^2`` and, with coefficients, ``psi^_m``.

    Parameters
    ----------
    spec : FilterSpec
    truncation_tol : float
        Relative budget for the omitted tail of the infinite product.
    min_depth : int
        Lower bound on the number of product factors.
    """

    spec: FilterSpec
    truncation_tol: float = 1e-12
    min_depth: int = DEFAULT_MIN_DEPTH

    def __post_init__(self):
        if not self.truncation_tol > 0:
            raise ValueError("truncation_tol must be positive")
        if self.min_depth < 1:
            raise ValueError("min_depth must be a positive integer")

    @classmethod
    def for_order(cls, m: int, with_coefficients: bool = False, **kwargs) -> "SpectrumEvaluator":
        spec = spectral_factorize(m) if with_coefficients else FilterSpec(m)
        return cls(spec, **kwargs)

    @property
    def m(self) -> int:
        return self.spec.m

    def depth(self, omega):
        return truncation_depth(omega, self.m, self.truncation_tol, self.min_depth)

    def _lowpass_product(self, omega: np.ndarray) -> np.ndarray:
        # Factors past an element's own depth are replaced by 1 so that each
        # value depends only on its own argument.
        depth = self.depth(omega)
        prod = np.ones_like(omega)
        scaled = omega.copy()
        for level in range(1, int(np.max(depth, initial=0)) + 1):
            scaled *= 0.5
            active = depth >= level
            prod = np.where(active, prod * h_mag2(self.m, scaled), prod)
        return prod

    def phi_hat_mag2(self, omega):
        """``|phi^_m(omega)|^2``, in ``[0, 1/(2 pi)]``."""
        w = np.asarray(omega, dtype=float)
        flat = np.abs(np.atleast_1d(w)).ravel()
        out = INV_2PI * self._lowpass_product(flat)
        return out.reshape(w.shape) if w.ndim else float(out[0])

    def psi_hat_mag2(self, omega):
        """``|psi^_m(omega)|^2 = |H_m(w/2 + pi)|^2 |phi^_m(w/2)|^2``."""
        w = np.asarray(omega, dtype=float)
        flat = np.abs(np.atleast_1d(w)).ravel()
        half = 0.5 * flat
        out = h_mag2_highpass(self.m, half) * INV_2PI * self._lowpass_product(half)
        return out.reshape(w.shape) if w.ndim else float(out[0])

    def psi_hat_modulus(self, omega):
        return np.sqrt(self.psi_hat_mag2(omega))

    # complex path --------------------------------------------------------

    def _complex_depth(self, omega: np.ndarray) -> np.ndarray:
        # |H(t) - 1| <= |t| * sum_l l|h_l| / sqrt(2): the phase of the omitted
        # factors only decays like 2**-L, unlike the modulus.
        h = self.spec.require_coefficients()
        slope = float(np.sum(np.arange(h.size) * np.abs(h))) / SQRT2
        with np.errstate(divide="ignore"):
            raw = np.ceil(np.log2(np.abs(omega) * slope / self.truncation_tol))
        raw = np.where(omega != 0, raw, 0)
        return np.maximum(self.depth(omega), raw).astype(int)

    def phi_hat_complex(self, omega):
        """``phi^_m(omega) = (2 pi)**-0.5 prod_{l>=1} H_m(w 2**-l)``."""
        w = np.asarray(omega, dtype=float)
        flat = np.atleast_1d(w).astype(float).ravel()
        depth = self._complex_depth(flat)
        prod = np.ones(flat.shape, dtype=complex)
        scaled = flat.copy()
        for level in range(1, int(np.max(depth, initial=0)) + 1):
            scaled *= 0.5
            prod = np.where(depth >= level, prod * h_complex(self.spec, scaled), prod)
        out = prod * math.sqrt(INV_2PI)
        return out.reshape(w.shape) if w.ndim else complex(out[0])

    def psi_hat_complex(self, omega):
        """``psi^_m(w) = exp(-1j w/2) conj(H_m(w/2 + pi)) phi^_m(w/2)``.

        Requires filter coefficients (``m <= 12``).
        """
        w = np.asarray(omega, dtype=float)
        flat = np.atleast_1d(w).astype(float).ravel()
        h = self.spec.require_coefficients()
        alternating = h * (-1.0) ** np.arange(h.size)
        half = 0.5 * flat
        phase = np.exp(1j * np.multiply.outer(half, np.arange(h.size)))
        highpass = (phase @ alternating) / SQRT2
        out = np.exp(-0.5j * flat) * np.conj(highpass) * self.phi_hat_complex(half)
        return out.reshape(w.shape) if w.ndim else complex(out[0])
