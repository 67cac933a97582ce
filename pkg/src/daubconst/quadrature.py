"""Adaptive quadrature on intervals and on the half line.

Every integral in the package goes through :func:`integrate`. It is a
vectorised adaptive bisection: all active subintervals of one level are
evaluated in a single call of the integrand, so integrands must accept and
return 1-D numpy arrays.

Improper integrals of even, non-negative spectra are handled by
:func:`integrate_weighted_line`, which integrates ``[0, 2*pi]`` with forced
breakpoints and then accumulates dyadic blocks ``[2**j * 2*pi, 2**(j+1) * 2*pi]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConvergenceError

TWO_PI = 2.0 * math.pi

# (low, high) Gauss-Legendre pair on [-1, 1]; |high - low| is the error estimate.
_X_LO, _W_LO = leggauss(10)
_X_HI, _W_HI = leggauss(20)
_NODES = np.concatenate([_X_LO, _X_HI])
_N_LO = _X_LO.size

# Intervals whose estimate is at rounding level are accepted regardless of tol.
_ROUNDOFF = 64.0 * np.finfo(float).eps
# Hard cap on simultaneously active subintervals.
_MAX_ACTIVE = 1 << 21
# Integrand evaluations per vectorised call.
_CHUNK = 1 << 20
# Tail blocks required before the extrapolated tail may be trusted.
_MIN_TAIL_BLOCKS = 3

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for :func:`integrate` and :func:`integrate_weighted_line`.

    Parameters
    ----------
    abs_tol, rel_tol : float
        A result is accepted when its error estimate is below
        ``max(abs_tol, rel_tol * |value|)``.
    max_depth : int
        Maximum number of bisection levels.
    tail_block_tol : float
        Relative change of the extrapolated half-line total below which the
        dyadic tail is considered converged.
    max_tail_blocks : int
        Maximum number of dyadic blocks beyond ``2*pi``.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 60
    tail_block_tol: float = 1e-10
    max_tail_blocks: int = 60

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "tail_block_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if self.max_depth < 10:
            raise ValueError(f"max_depth must be >= 10, got {self.max_depth}")
        if self.max_tail_blocks < 1:
            raise ValueError(f"max_tail_blocks must be >= 1, got {self.max_tail_blocks}")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    blocks_used: int = 0
    converged: bool = True
    evaluations: int = 0

    def check(self, what: str = "integral") -> "IntegralResult":
        """Return self, or raise :class:`ConvergenceError` if not converged."""
        if not self.converged:
            raise ConvergenceError(
                f"{what} did not converge (value={self.value:.6g}, "
                f"error_estimate={self.error_estimate:.3g}, blocks={self.blocks_used})",
                result=self,
            )
        return self


def _evaluate(f: Integrand, x: np.ndarray) -> np.ndarray:
    flat = x.ravel()
    out = np.empty_like(flat)
    for start in range(0, flat.size, _CHUNK):
        stop = start + _CHUNK
        out[start:stop] = np.asarray(f(flat[start:stop]), dtype=float)
    if not np.all(np.isfinite(out)):
        raise ValueError("integrand returned a non-finite value")
    return out.reshape(x.shape)


def _panel_rules(f: Integrand, lo: np.ndarray, hi: np.ndarray):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    vals = _evaluate(f, mid[:, None] + half[:, None] * _NODES)
    low = half * (vals[:, :_N_LO] @ _W_LO)
    high = half * (vals[:, _N_LO:] @ _W_HI)
    magnitude = half * (np.abs(vals[:, _N_LO:]) @ _W_HI)
    return high, np.abs(high - low), magnitude, vals.size


def _initial_edges(a: float, b: float, points: Iterable[float], panel_width: float | None):
    cuts = sorted({a, b, *(float(p) for p in points if a < p < b)})
    edges = [cuts[0]]
    for left, right in zip(cuts[:-1], cuts[1:]):
        n = 1
        if panel_width is not None:
            n = max(1, math.ceil((right - left) / panel_width))
        edges.extend(np.linspace(left, right, n + 1)[1:].tolist())
        edges[-1] = right
    return np.asarray(edges)


def integrate(
    f: Integrand,
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
    points: Sequence[float] = (),
    panel_width: float | None = None,
) -> IntegralResult:
    """Adaptively integrate ``f`` over ``[a, b]``.

    The global tolerance ``max(abs_tol, rel_tol * |I|)`` is split across
    subintervals in proportion to their length. Subintervals that fail their
    share are bisected, up to ``cfg.max_depth`` levels; anything still
    unresolved then is accepted as-is and the result is flagged as not
    converged.

    Parameters
    ----------
    f : callable
        Vectorised integrand, ``f(ndarray) -> ndarray``.
    a, b : float
        Finite limits with ``a <= b``.
    cfg : QuadratureConfig, optional
    points : sequence of float
        Mandatory subdivision points (jumps, kinks) inside ``(a, b)``.
    panel_width : float, optional
        Maximum width of the initial subintervals. Use it for oscillatory
        integrands so that the first error estimates are not aliased.
    """
    cfg = cfg or QuadratureConfig()
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integration limits must be finite")
    if a > b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    if a == b:
        return IntegralResult(0.0, 0.0)

    span = b - a
    edges = _initial_edges(a, b, points, panel_width)
    lo, hi = edges[:-1], edges[1:]

    accepted_values: list[float] = []
    accepted_error = 0.0
    evaluations = 0
    forced = False
    for depth in range(cfg.max_depth + 1):
        value, error, magnitude, n_eval = _panel_rules(f, lo, hi)
        evaluations += n_eval
        running = math.fsum(accepted_values) + float(value.sum())
        share = cfg.tolerance(running) * (hi - lo) / span
        ok = (error <= share) | (error <= _ROUNDOFF * magnitude)
        if depth == cfg.max_depth or 2 * np.count_nonzero(~ok) > _MAX_ACTIVE:
            forced = not ok.all()
            ok[:] = True
        accepted_values.append(math.fsum(value[ok]))
        accepted_error += float(error[ok].sum())
        if ok.all():
            break
        lo, hi = lo[~ok], hi[~ok]
        mid = 0.5 * (lo + hi)
        lo, hi = np.column_stack([lo, mid]).ravel(), np.column_stack([mid, hi]).ravel()

    total = math.fsum(accepted_values)
    converged = not forced and accepted_error <= cfg.tolerance(total) * (1.0 + 1e-9)
    # Rounding-level acceptances may leave an estimate just above a tiny tol.
    if not forced and not converged:
        converged = accepted_error <= _ROUNDOFF * max(abs(total), cfg.abs_tol) * 16
    return IntegralResult(total, accepted_error, 0, converged, evaluations)


def integrate_weighted_line(
    g: Integrand,
    weight_exponent: float,
    breakpoints: Sequence[float] = (math.pi, TWO_PI),
    cfg: QuadratureConfig | None = None,
    panel_width: float = math.pi / 4,
) -> IntegralResult:
    """Compute ``2 * int_0^inf g(w) * w**weight_exponent dw`` for an even ``g >= 0``.

    ``[0, 2*pi]`` is integrated with forced subdivision at ``breakpoints``;
    dyadic blocks ``[2**j * 2*pi, 2**(j+1) * 2*pi]`` follow. The remainder
    after block ``J`` is estimated as the geometric series continuing the
    ratio of the last two blocks, and accumulation stops once that
    extrapolated total changes by at most ``cfg.tail_block_tol`` (relative,
    with ``cfg.abs_tol`` as an absolute floor) on two consecutive blocks.

    The integrand is taken to be 0 at ``w = 0``; callers must make sure that
    ``g(w) * w**weight_exponent`` really tends to 0 there.
    """
    cfg = cfg or QuadratureConfig()
    alpha = float(weight_exponent)
    if alpha > 0:
        raise ValueError(f"weight_exponent must be <= 0, got {alpha}")

    def integrand(w):
        w = np.asarray(w, dtype=float)
        values = np.asarray(g(w), dtype=float)
        if alpha == 0.0:
            return values
        safe = np.where(w == 0.0, 1.0, np.abs(w))
        return np.where(w == 0.0, 0.0, values * safe**alpha)

    core = integrate(integrand, 0.0, TWO_PI, cfg, points=breakpoints, panel_width=panel_width)
    partial = [core.value]
    error = core.error_estimate
    evaluations = core.evaluations
    converged = core.converged

    blocks: list[float] = []
    previous_total = None
    calm = 0
    tail_error = math.inf
    tail_converged = False
    for j in range(cfg.max_tail_blocks):
        left = TWO_PI * 2.0**j
        block = integrate(integrand, left, 2.0 * left, cfg, panel_width=panel_width)
        evaluations += block.evaluations
        error += block.error_estimate
        converged &= block.converged
        blocks.append(block.value)
        partial.append(block.value)
        total = math.fsum(partial) + _geometric_remainder(blocks)
        if previous_total is not None:
            change = abs(total - previous_total)
            tail_error = change
            floor = max(abs(total), cfg.abs_tol)
            calm = calm + 1 if change <= cfg.tail_block_tol * floor else 0
            if calm >= 2 and len(blocks) >= _MIN_TAIL_BLOCKS:
                tail_converged = True
                break
        previous_total = total

    total = math.fsum(partial) + _geometric_remainder(blocks)
    if not tail_converged:
        tail_error = max(tail_error if math.isfinite(tail_error) else 0.0, abs(blocks[-1]))
    return IntegralResult(
        value=2.0 * total,
        error_estimate=2.0 * (error + tail_error),
        blocks_used=len(blocks),
        converged=bool(converged and tail_converged),
        evaluations=evaluations,
    )


def _geometric_remainder(blocks: Sequence[float]) -> float:
    """Sum of the geometric series continuing the last two block values."""
    if len(blocks) < 2:
        return 0.0
    last, before = abs(blocks[-1]), abs(blocks[-2])
    if last == 0.0 or before == 0.0:
        return 0.0
    ratio = last / before
    if ratio >= 1.0:
        return 0.0
    return math.copysign(last * ratio / (1.0 - ratio), blocks[-1])
