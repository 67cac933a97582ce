"""Sharp wavelet-coefficient constants for Daubechies wavelets."""

from .constants import (
    ConstantReport,
    NormRequest,
    ReferenceSpectrum,
    condition_i,
    condition_ii,
    constant_ratio,
    eq7_limit,
    lemma_limit,
    theorem_limit,
    weighted_norm,
)
from .filterbank import BinomialPolynomial, FilterSpec, c_m, h_complex, h_mag2, h_mag2_integral, spectral_factorize
from .quadrature import IntegralResult, QuadratureConfig, integrate, integrate_weighted_line
from .spectrum import SpectrumEvaluator, truncation_depth

__version__ = "0.1.0"
