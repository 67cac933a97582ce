"""Weighted Fourier norms and the sharp constants C_{k;p,q}.

``C_{k;p,q}(psi) = || |w|^-k psi^ ||_p / || psi^ ||_q``. As m grows the
Daubechies spectrum approaches the brick-wall spectrum
``(2 pi)**-0.5 * 1_{pi <= |w| <= 2 pi}``, and the constant tends to

    (2 pi)^(1/p - 1/q) pi^-k ((1 - 2^(1-pk)) / (pk - 1))^(1/p).

Two hypotheses control that limit: the mass of the weighted spectrum near
the origin (``condition_i``) and the L_p distance to the brick wall
(``condition_ii``); both must tend to 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError
from .filterbank import c_m
from .quadrature import IntegralResult, QuadratureConfig, integrate, integrate_weighted_line
from .spectrum import SpectrumEvaluator

PI = math.pi
TWO_PI = 2.0 * math.pi
LOG_2PI = math.log(TWO_PI)
BREAKPOINTS = (PI, TWO_PI)
DEFAULT_EPSILON = 0.5


def conjugate_exponent(p: float) -> float:
    """Hoelder conjugate ``p' = p / (p - 1)``."""
    if not p > 1:
        raise DomainError(f"need p > 1, got {p}")
    return p / (p - 1.0)


@dataclass(frozen=True)
class NormRequest:
    """The norm ``|| |w|^-k psi^_m ||_p``."""

    m: int
    k: int
    p: float

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m!r}")
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 0:
            raise DomainError(f"k must be a non-negative integer, got {self.k!r}")
        if not (1 < self.p < math.inf):
            raise DomainError(f"p must lie in (1, inf), got {self.p!r}")
        if self.k > self.m:
            raise DomainError(f"k={self.k} exceeds the number of zero moments m={self.m}")
        if self.k >= 1 and not self.p * self.k > 1:
            raise DomainError(f"need p*k > 1, got p*k={self.p * self.k}")


class ReferenceSpectrum:
    """Brick-wall modulus ``(2 pi)**-0.5`` on ``pi <= |w| <= 2 pi``."""

    height = 1.0 / math.sqrt(TWO_PI)

    def modulus(self, omega):
        w = np.abs(np.asarray(omega, dtype=float))
        return np.where((w >= PI) & (w <= TWO_PI), self.height, 0.0)

    def __call__(self, omega):
        return self.modulus(omega)

    def mag2(self, omega):
        return self.modulus(omega) ** 2

    @staticmethod
    def norm(p: float) -> float:
        """``|| Psi^ ||_p = (2 pi)^(1/p - 1/2)``, exact."""
        return math.exp((1.0 / p - 0.5) * LOG_2PI)


REFERENCE = ReferenceSpectrum()


# closed forms -------------------------------------------------------------


def _limit_log(k: int, p: float) -> float:
    pk = p * k
    if not pk > 1:
        raise DomainError(f"closed form needs p*k > 1, got p*k={pk}")
    # 1 - 2^(1-pk) via expm1 keeps precision when pk is close to 1.
    numerator = -math.expm1((1.0 - pk) * math.log(2.0))
    return -k * math.log(PI) + math.log(numerator / (pk - 1.0)) / p


def lemma_limit(k: int, p: float) -> float:
    """``|| |w|^-k Psi^ ||_p`` for the brick-wall spectrum (needs ``pk > 1``)."""
    return math.exp((1.0 / p - 0.5) * LOG_2PI + _limit_log(k, p))


def eq7_limit(q: float) -> float:
    """Limit of ``|| psi^_m ||_q``, i.e. ``(2 pi)^(1/q - 1/2)``."""
    if not q >= 1:
        raise DomainError(f"need q >= 1, got {q}")
    return ReferenceSpectrum.norm(q)


def theorem_limit(k: int, p: float, q: float) -> float:
    """Limit of ``C_{k;p,q}(psi_m)`` as ``m -> inf``, for ``k >= 1`` and ``pk > 1``.

    For ``k = 0`` the expression is meaningless; use
    ``eq7_limit(p) / eq7_limit(q)`` (see :func:`limit_of_constant`).
    """
    if k == 0:
        raise DomainError("theorem_limit needs k >= 1; for k = 0 use eq7_limit(p) / eq7_limit(q)")
    if not (1 < p < math.inf and 1 < q < math.inf):
        raise DomainError(f"p and q must lie in (1, inf), got p={p}, q={q}")
    return math.exp((1.0 / p - 1.0 / q) * LOG_2PI + _limit_log(k, p))


def limit_of_constant(k: int, p: float, q: float) -> float:
    """Limit of the constant for any ``k >= 0``."""
    if k == 0:
        return eq7_limit(p) / eq7_limit(q)
    return theorem_limit(k, p, q)


def condition_i_bound(m: int, k: int, p: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """Explicit upper bound ``2^(-p(1/2+k)+1) (c_m/pi)^(p/2) (eps/2)^(pm-pk+1)``, ``m > k``."""
    if not m > k:
        raise DomainError(f"bound needs m > k, got m={m}, k={k}")
    if not 0 < epsilon < 1:
        raise DomainError(f"bound needs 0 < epsilon < 1, got {epsilon}")
    log_value = (
        (-p * (0.5 + k) + 1.0) * math.log(2.0)
        + 0.5 * p * math.log(c_m(m) / PI)
        + (p * m - p * k + 1.0) * math.log(0.5 * epsilon)
    )
    return math.exp(log_value)


# norms ----------------------------------------------------------------------


def _panel_width(m: int) -> float:
    # |H_m(w/2 + pi)|^2 has frequencies up to (2m - 1)/2 in w.
    return min(PI / 4.0, 2.0 * PI / (2 * m - 1))


def weighted_integral(req: NormRequest, ev: SpectrumEvaluator, cfg: QuadratureConfig) -> IntegralResult:
    """``int_R |w|^(-pk) |psi^_m(w)|^p dw`` with diagnostics."""
    if ev.m != req.m:
        raise ValueError(f"evaluator order {ev.m} does not match request m={req.m}")
    half_p = 0.5 * req.p
    return integrate_weighted_line(
        lambda w: ev.psi_hat_mag2(w) ** half_p,
        -req.p * req.k,
        BREAKPOINTS,
        cfg,
        panel_width=_panel_width(req.m),
    )


def weighted_norm(req: NormRequest, ev: SpectrumEvaluator, cfg: QuadratureConfig | None = None) -> float:
    """``|| |w|^-k psi^_m ||_p``.

    Raises
    ------
    ConvergenceError
        If the underlying integral does not converge.
    """
    cfg = cfg or QuadratureConfig()
    res = weighted_integral(req, ev, cfg).check(f"weighted norm {req}")
    return res.value ** (1.0 / req.p)


def condition_i(
    m: int,
    k: int,
    p: float,
    epsilon: float = DEFAULT_EPSILON,
    ev: SpectrumEvaluator | None = None,
    cfg: QuadratureConfig | None = None,
) -> float:
    """``int_{|w| < eps} |w|^(-pk) |psi^_m(w)|^p dw``.

    The value becomes astronomically small as m grows, so the integral is
    controlled in relative terms only.
    """
    return condition_i_result(m, k, p, epsilon, ev, cfg).check("condition (i)").value


def condition_i_result(m, k, p, epsilon=DEFAULT_EPSILON, ev=None, cfg=None) -> IntegralResult:
    req = NormRequest(m, k, p)
    if not 0 < epsilon < PI:
        raise DomainError(f"epsilon must lie in (0, pi), got {epsilon}")
    ev = ev or SpectrumEvaluator.for_order(m)
    cfg = cfg or QuadratureConfig()
    rel = QuadratureConfig(abs_tol=1e-300, rel_tol=cfg.rel_tol, max_depth=cfg.max_depth)
    half_p, alpha = 0.5 * p, -p * k

    def integrand(w):
        w = np.asarray(w, dtype=float)
        values = ev.psi_hat_mag2(w) ** half_p
        return values if alpha == 0 else values * w**alpha

    res = integrate(integrand, 0.0, epsilon, rel)
    return IntegralResult(2.0 * res.value, 2.0 * res.error_estimate, 0, res.converged, res.evaluations)


def lp_distance_to_reference(
    modulus: Callable[[np.ndarray], np.ndarray],
    p: float,
    cfg: QuadratureConfig | None = None,
    weight_exponent: float = 0.0,
    panel_width: float = PI / 4,
) -> IntegralResult:
    """``int_R |w|^alpha | modulus(w) - Psi^(w) |^p dw`` for an even ``modulus``.

    The result carries the p-th power; take the ``1/p`` root for the norm.
    """
    cfg = cfg or QuadratureConfig()

    def g(w):
        return np.abs(np.asarray(modulus(w), dtype=float) - REFERENCE.modulus(w)) ** p

    return integrate_weighted_line(g, weight_exponent, BREAKPOINTS, cfg, panel_width=panel_width)


def condition_ii_result(m, p, ev=None, cfg=None, complex_mode=False) -> IntegralResult:
    if not 1 < p < math.inf:
        raise DomainError(f"p must lie in (1, inf), got {p}")
    cfg = cfg or QuadratureConfig()
    if complex_mode:
        ev = ev if ev is not None and ev.spec.has_coefficients else SpectrumEvaluator.for_order(m, True)

        def distance(w):
            return np.abs(ev.psi_hat_complex(w) - REFERENCE.modulus(w)) ** p

        return integrate_weighted_line(distance, 0.0, BREAKPOINTS, cfg, panel_width=_panel_width(m))
    ev = ev or SpectrumEvaluator.for_order(m)
    return lp_distance_to_reference(ev.psi_hat_modulus, p, cfg, panel_width=_panel_width(m))


def condition_ii(
    m: int,
    p: float,
    ev: SpectrumEvaluator | None = None,
    cfg: QuadratureConfig | None = None,
    complex_mode: bool = False,
) -> float:
    """L_p distance between the Daubechies spectrum and the brick wall.

    By default the moduli are compared, ``|| |psi^_m| - Psi^ ||_p``, which
    works for every m. With ``complex_mode=True`` the complex transform
    (m <= 12) is used instead; its phase keeps that distance away from 0.
    """
    res = condition_ii_result(m, p, ev, cfg, complex_mode).check("condition (ii)")
    return res.value ** (1.0 / p)


def minkowski_gap(req: NormRequest, ev: SpectrumEvaluator, cfg: QuadratureConfig | None = None) -> float:
    """``|| |w|^-k (|psi^_m| - Psi^) ||_p``, which bounds ``|weighted_norm - lemma_limit|``."""
    res = lp_distance_to_reference(
        ev.psi_hat_modulus, req.p, cfg, weight_exponent=-req.p * req.k, panel_width=_panel_width(req.m)
    ).check("Minkowski gap")
    return res.value ** (1.0 / req.p)


# report ---------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantReport:
    m: int
    k: int
    p: float
    q: float
    weighted_norm: float
    denominator_norm: float
    constant: float
    theorem_limit: float
    abs_error: float
    rel_error: float
    condition_i: float
    condition_ii: float
    quadrature_diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def converged(self) -> bool:
        return all(d.get("converged", True) for d in self.quadrature_diagnostics.values())


def _diagnostic(res: IntegralResult) -> dict:
    return {
        "error_estimate": res.error_estimate,
        "blocks_used": res.blocks_used,
        "converged": res.converged,
    }


def constant_ratio(
    m: int,
    k: int,
    p: float,
    q: float,
    ev: SpectrumEvaluator | None = None,
    cfg: QuadratureConfig | None = None,
    epsilon: float = DEFAULT_EPSILON,
    with_conditions: bool = True,
    strict: bool = True,
) -> ConstantReport:
    """Compute ``C_{k;p,q}(psi_m)`` and compare it with its limit.

    Parameters
    ----------
    with_conditions : bool
        Also evaluate condition (i) at ``epsilon`` and condition (ii) at ``p``.
        Skipped values are reported as NaN.
    strict : bool
        Raise :class:`ConvergenceError` on any unconverged integral. With
        ``strict=False`` the report is returned with its diagnostics flagged.
    """
    req = NormRequest(m, k, p)
    if not 1 < q < math.inf:
        raise DomainError(f"q must lie in (1, inf), got {q}")
    ev = ev or SpectrumEvaluator.for_order(m)
    cfg = cfg or QuadratureConfig()
    limit = limit_of_constant(k, p, q)
    diagnostics: dict[str, dict] = {}

    num = weighted_integral(req, ev, cfg)
    diagnostics["numerator"] = _diagnostic(num)
    numerator = num.value ** (1.0 / p)
    if k == 0 and p == q:
        denominator, constant = numerator, 1.0
    else:
        den = weighted_integral(NormRequest(m, 0, q), ev, cfg)
        diagnostics["denominator"] = _diagnostic(den)
        denominator = den.value ** (1.0 / q)
        constant = numerator / denominator

    cond_i = cond_ii = math.nan
    if with_conditions:
        res_i = condition_i_result(m, k, p, epsilon, ev, cfg)
        res_ii = condition_ii_result(m, p, ev, cfg)
        diagnostics["condition_i"] = _diagnostic(res_i)
        diagnostics["condition_ii"] = _diagnostic(res_ii)
        cond_i, cond_ii = res_i.value, res_ii.value ** (1.0 / p)

    report = ConstantReport(
        m=m, k=k, p=p, q=q,
        weighted_norm=numerator,
        denominator_norm=denominator,
        constant=constant,
        theorem_limit=limit,
        abs_error=abs(constant - limit),
        rel_error=abs(constant - limit) / limit,
        condition_i=cond_i,
        condition_ii=cond_ii,
        quadrature_diagnostics=diagnostics,
    )
    if strict and not report.converged:
        failed = [name for name, d in diagnostics.items() if not d["converged"]]
        raise ConvergenceError(f"quadrature did not converge for {', '.join(failed)}", result=report)
    return report
