"""Command-line interface.

Usage::

    daubconst limit --k 1 --p 2 --q 2
    daubconst constant --m 8 --k 1 --p 2 --q 2
    daubconst sweep --m 1..16 --k 1 --p 2 --q 2
    daubconst lemma --m 2,4,8,16 --k 1 --p 2 --eps 0.5
    daubconst spectrum --m 4 --omega-max 50 --points 1001
    daubconst filter --m 2
    daubconst bound-demo --m 4 --k 1 --p 2 --q 2
    daubconst crosscheck --m 2,4,8 --iterations 10,12
    daubconst selfcheck

Exit status: 0 on success, 1 for invalid arguments, 2 when a quadrature or
verification failed (rows are still written, with the failure flagged).
Default tolerances can be overridden through ``SWC_ABS_TOL``,
``SWC_TAIL_TOL`` and ``SWC_TRUNCATION_TOL``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import constants, filterbank, oracle
from .errors import DaubconstError
from .quadrature import QuadratureConfig, integrate_weighted_line
from .spectrum import SpectrumEvaluator

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2

DEFAULT_ABS_TOL = 1e-9
DEFAULT_TAIL_TOL = 1e-10
DEFAULT_TRUNCATION_TOL = 1e-12
ENV_PREFIX = "SWC_"

COLUMNS = {
    "limit": ["k", "p", "q", "limit", "lemma_limit", "eq7_limit"],
    "constant": ["m", "k", "p", "q", "C", "limit", "abs_err", "rel_err", "num_norm", "den_norm",
                 "cond_i", "cond_ii", "quad_flag"],
    "sweep": ["m", "k", "p", "q", "C", "limit", "abs_err", "rel_err", "cond_i", "cond_ii", "quad_flag"],
    "lemma": ["m", "k", "p", "eps", "cond_i", "cond_i_bound", "cond_ii", "quad_flag"],
    "spectrum": ["omega", "psi_hat_sq"],
    "filter": ["l", "h"],
    "bound-demo": ["m", "k", "p", "q", "j", "v", "inner_product", "bound", "ratio"],
    "crosscheck": ["m", "iterations", "max_deviation", "l2_norm"],
    "selfcheck": ["check", "value", "tolerance", "passed"],
}

BOUND_NOTE = (
    "bound = C_{k;p,q} * 2^(-j(k-1/p+1/q)) * ||psi^||_q for test functions with "
    "||(iw)^k f^||_{p'} = 1; C uses the L_p norm of |w|^-k psi^ in the numerator"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_int_list(text: str) -> list[int]:
    """Parse ``"1..16"``, ``"2,4,8"`` or a mix such as ``"1..4,8,16"``."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            values.extend(range(lo_i, hi_i + 1))
        else:
            values.append(int(part))
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _int_list(text):
    try:
        return parse_int_list(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{ENV_PREFIX}{name}={raw!r} is not a number") from None


@dataclass
class RunConfig:
    subcommand: str
    m: list[int] = field(default_factory=lambda: [4])
    k: int = 1
    p: float = 2.0
    q: float = 2.0
    eps: float = constants.DEFAULT_EPSILON
    abs_tol: float = DEFAULT_ABS_TOL
    tail_tol: float = DEFAULT_TAIL_TOL
    truncation_tol: float = DEFAULT_TRUNCATION_TOL
    output_format: str = "csv"
    output: str | None = None
    j: list[int] = field(default_factory=lambda: list(range(6)))
    v: list[int] = field(default_factory=lambda: [0, 1, 5])
    iterations: list[int] = field(default_factory=lambda: [10, 12])
    omega_min: float = 0.0
    omega_max: float = 8.0 * math.pi
    points: int = 513

    needs_coefficients = ("filter", "bound-demo", "crosscheck")

    def validate(self) -> None:
        """Check module preconditions before any computation."""
        for name in ("abs_tol", "tail_tol", "truncation_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise UsageError(f"{name} must be positive, got {value}")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.output_format!r}")
        if self.subcommand in ("selfcheck",):
            return
        if not self.p > 1 or not math.isfinite(self.p):
            raise UsageError(f"p must lie in (1, inf), got {self.p}")
        if not self.q > 1 or not math.isfinite(self.q):
            raise UsageError(f"q must lie in (1, inf), got {self.q}")
        if self.k < 0:
            raise UsageError(f"k must be non-negative, got {self.k}")
        if self.k >= 1 and not self.p * self.k > 1:
            raise UsageError(f"need p*k > 1, got {self.p * self.k}")
        if self.subcommand == "limit":
            return
        if min(self.m) < 1:
            raise UsageError("orders m must be positive")
        if self.subcommand in ("constant", "sweep", "lemma", "bound-demo") and self.k > min(self.m):
            raise UsageError(f"k={self.k} exceeds min(m)={min(self.m)}")
        if self.subcommand in self.needs_coefficients and max(self.m) > filterbank.MAX_FACTOR_ORDER:
            raise UsageError(f"{self.subcommand} needs m <= {filterbank.MAX_FACTOR_ORDER}")
        if self.subcommand == "lemma" and not 0 < self.eps < math.pi:
            raise UsageError(f"eps must lie in (0, pi), got {self.eps}")
        if self.subcommand == "spectrum":
            if self.points < 2 or not self.omega_max > self.omega_min:
                raise UsageError("spectrum needs points >= 2 and omega-max > omega-min")
        if self.subcommand == "crosscheck" and not all(1 <= it <= oracle.MAX_ITERATIONS for it in self.iterations):
            raise UsageError(f"iterations must lie in 1..{oracle.MAX_ITERATIONS}")

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(abs_tol=self.abs_tol, rel_tol=self.abs_tol, tail_block_tol=self.tail_tol)

    def evaluator(self, m: int, with_coefficients: bool = False) -> SpectrumEvaluator:
        return SpectrumEvaluator.for_order(m, with_coefficients, truncation_tol=self.truncation_tol)


@dataclass
class Report:
    columns: list[str]
    rows: list[dict]
    failed: bool = False
    note: str | None = None


# subcommands ----------------------------------------------------------------


def _flag(ok: bool) -> str:
    return "ok" if ok else "unconverged"


def cmd_limit(cfg: RunConfig) -> Report:
    k, p, q = cfg.k, cfg.p, cfg.q
    row = {
        "k": k, "p": p, "q": q,
        "limit": constants.limit_of_constant(k, p, q),
        "lemma_limit": constants.lemma_limit(k, p) if k >= 1 else constants.eq7_limit(p),
        "eq7_limit": constants.eq7_limit(q),
    }
    return Report(COLUMNS["limit"], [row])


def _constant_row(cfg: RunConfig, m: int) -> dict:
    rep = constants.constant_ratio(
        m, cfg.k, cfg.p, cfg.q, cfg.evaluator(m), cfg.quadrature(), epsilon=cfg.eps, strict=False
    )
    return {
        "m": m, "k": cfg.k, "p": cfg.p, "q": cfg.q,
        "C": rep.constant, "limit": rep.theorem_limit,
        "abs_err": rep.abs_error, "rel_err": rep.rel_error,
        "num_norm": rep.weighted_norm, "den_norm": rep.denominator_norm,
        "cond_i": rep.condition_i, "cond_ii": rep.condition_ii,
        "quad_flag": _flag(rep.converged),
    }


def cmd_constant(cfg: RunConfig) -> Report:
    rows = [_constant_row(cfg, m) for m in cfg.m]
    return Report(COLUMNS["constant"], rows, any(r["quad_flag"] != "ok" for r in rows))


def cmd_sweep(cfg: RunConfig) -> Report:
    rows = [_constant_row(cfg, m) for m in sorted(set(cfg.m))]
    return Report(COLUMNS["sweep"], rows, any(r["quad_flag"] != "ok" for r in rows))


def cmd_lemma(cfg: RunConfig) -> Report:
    rows = []
    quad = cfg.quadrature()
    for m in sorted(set(cfg.m)):
        ev = cfg.evaluator(m)
        res_i = constants.condition_i_result(m, cfg.k, cfg.p, cfg.eps, ev, quad)
        res_ii = constants.condition_ii_result(m, cfg.p, ev, quad)
        bound = None
        if m > cfg.k and cfg.eps < 1:
            bound = constants.condition_i_bound(m, cfg.k, cfg.p, cfg.eps)
        rows.append({
            "m": m, "k": cfg.k, "p": cfg.p, "eps": cfg.eps,
            "cond_i": res_i.value, "cond_i_bound": bound,
            "cond_ii": res_ii.value ** (1.0 / cfg.p),
            "quad_flag": _flag(res_i.converged and res_ii.converged),
        })
    return Report(COLUMNS["lemma"], rows, any(r["quad_flag"] != "ok" for r in rows))


def cmd_spectrum(cfg: RunConfig) -> Report:
    ev = cfg.evaluator(cfg.m[0])
    omega = np.linspace(cfg.omega_min, cfg.omega_max, cfg.points)
    values = ev.psi_hat_mag2(omega)
    rows = [{"omega": float(w), "psi_hat_sq": float(s)} for w, s in zip(omega, values)]
    return Report(COLUMNS["spectrum"], rows)


def cmd_filter(cfg: RunConfig) -> Report:
    spec = filterbank.spectral_factorize(cfg.m[0])
    rows = [{"l": l, "h": h} for l, h in enumerate(spec.coefficients)]
    return Report(COLUMNS["filter"], rows)


def cmd_bound_demo(cfg: RunConfig) -> Report:
    rows = []
    failed = False
    for m in cfg.m:
        result = oracle.bound_demo(
            m, cfg.k, cfg.p, cfg.q, cfg.j, cfg.v, ev=cfg.evaluator(m, True), cfg=cfg.quadrature()
        )
        for r in result:
            failed |= r.violated
            rows.append({
                "m": r.m, "k": r.k, "p": r.p, "q": r.q, "j": r.j, "v": r.v,
                "inner_product": r.inner_product, "bound": r.bound, "ratio": r.ratio,
            })
    return Report(COLUMNS["bound-demo"], rows, failed, note=BOUND_NOTE)


def cmd_crosscheck(cfg: RunConfig) -> Report:
    rows = []
    for m in cfg.m:
        spec = filterbank.spectral_factorize(m)
        ev = SpectrumEvaluator(spec, truncation_tol=cfg.truncation_tol)
        for it in cfg.iterations:
            cr = oracle.cascade(spec, it)
            rows.append({
                "m": m, "iterations": it,
                "max_deviation": oracle.spectrum_crosscheck(cr, ev),
                "l2_norm": cr.l2_norm(),
            })
    return Report(COLUMNS["crosscheck"], rows)


def selfcheck_suite(cfg: RunConfig) -> list[tuple[str, Callable[[], float], float]]:
    """Fast invariant checks as ``(name, compute, tolerance)``; passing means value <= tol."""
    quad = cfg.quadrature()

    def qmf():
        grid = np.linspace(-math.pi, math.pi, 4096)
        return max(
            float(np.max(np.abs(filterbank.h_mag2(m, grid) + filterbank.h_mag2(m, grid + math.pi) - 1)))
            for m in range(1, 21)
        )

    def integral_form():
        grid = np.linspace(0, math.pi, 33)
        return max(abs(filterbank.h_mag2(m, w) - filterbank.h_mag2_integral(m, w, 1e-11))
                   for m in (1, 5, 20) for w in grid)

    def closed_forms():
        worst = 0.0
        for k, p in ((1, 2.0), (2, 2.0), (1, 3.0), (3, 1.5)):
            res = integrate_weighted_line(
                lambda w: constants.REFERENCE.modulus(w) ** p, -p * k, cfg=quad
            )
            worst = max(worst, abs(res.value ** (1 / p) - constants.lemma_limit(k, p)))
        return worst

    def plancherel():
        return max(abs(constants.weighted_norm(constants.NormRequest(m, 0, 2.0), cfg.evaluator(m), quad) - 1)
                   for m in (2, 4, 8))

    def calderon():
        worst = 0.0
        for m in (1, 4):
            ev = cfg.evaluator(m)
            for w0 in (1.0, 2.5):
                total = math.fsum(ev.psi_hat_mag2(2.0**j * w0) for j in range(-40, 41))
                worst = max(worst, abs(total - 1 / (2 * math.pi)))
        return worst

    def factorization():
        return max(filterbank.magnitude_residual(m, filterbank.spectral_factorize(m).coefficients)
                   for m in range(1, 13))

    return [
        ("qmf_identity", qmf, 1e-10),
        ("integral_form", integral_form, 1e-8),
        ("reference_norms", closed_forms, 1e-9),
        ("plancherel", plancherel, 1e-6),
        ("calderon", calderon, 1e-6),
        ("factorization", factorization, 1e-7),
    ]


def cmd_selfcheck(cfg: RunConfig) -> Report:
    rows = []
    for name, compute, tol in selfcheck_suite(cfg):
        value = compute()
        rows.append({"check": name, "value": value, "tolerance": tol, "passed": value <= tol})
    return Report(COLUMNS["selfcheck"], rows, not all(r["passed"] for r in rows))


COMMANDS = {
    "limit": cmd_limit,
    "constant": cmd_constant,
    "sweep": cmd_sweep,
    "lemma": cmd_lemma,
    "spectrum": cmd_spectrum,
    "filter": cmd_filter,
    "bound-demo": cmd_bound_demo,
    "crosscheck": cmd_crosscheck,
    "selfcheck": cmd_selfcheck,
}


# output -------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return float(f"{value:.12g}") if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def render(report: Report, subcommand: str, output_format: str) -> str:
    if output_format == "json":
        payload = {
            "command": subcommand,
            "columns": report.columns,
            "rows": [{c: _json_value(row.get(c)) for c in report.columns} for row in report.rows],
        }
        if report.note:
            payload["note"] = report.note
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    if report.note:
        buf.write(f"# {report.note}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_fmt(row.get(c)) for c in report.columns])
    return buf.getvalue()


# argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    abs_tol = _env_float("ABS_TOL", DEFAULT_ABS_TOL)
    tail_tol = _env_float("TAIL_TOL", DEFAULT_TAIL_TOL)
    trunc_tol = _env_float("TRUNCATION_TOL", DEFAULT_TRUNCATION_TOL)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    common.add_argument("--tol", dest="abs_tol", type=float, default=abs_tol,
                        help=f"quadrature tolerance (default {abs_tol:g}; env {ENV_PREFIX}ABS_TOL)")
    common.add_argument("--tail-tol", dest="tail_tol", type=float, default=tail_tol,
                        help=f"dyadic tail tolerance (default {tail_tol:g}; env {ENV_PREFIX}TAIL_TOL)")
    common.add_argument("--truncation-tol", dest="truncation_tol", type=float, default=trunc_tol,
                        help=f"infinite-product truncation tolerance (default {trunc_tol:g})")

    parser = _Parser(prog="daubconst", description="Sharp wavelet-coefficient constants for Daubechies wavelets.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name, help_text, m_default=None, m_list=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if m_default is not None:
            p.add_argument("--m", type=_int_list if m_list else _single_int, default=m_default)
        return p

    p = add("limit", "closed-form limits")
    _kpq(p)
    p = add("constant", "C_{k;p,q} for one or more orders", m_default=[8])
    _kpq(p)
    p.add_argument("--eps", type=float, default=constants.DEFAULT_EPSILON)
    p = add("sweep", "convergence table over m", m_default=list(range(1, 17)))
    _kpq(p)
    p.add_argument("--eps", type=float, default=constants.DEFAULT_EPSILON)
    p = add("lemma", "conditions (i) and (ii) over m", m_default=[2, 4, 8, 16])
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--eps", type=float, default=constants.DEFAULT_EPSILON)
    p = add("spectrum", "dump |psi^|^2 on a grid", m_default=[4], m_list=False)
    p.add_argument("--omega-min", type=float, default=0.0)
    p.add_argument("--omega-max", type=float, default=8.0 * math.pi)
    p.add_argument("--points", type=int, default=513)
    add("filter", "spectral-factorisation coefficients", m_default=[2], m_list=False)
    p = add("bound-demo", "coefficient inequality on test functions", m_default=[4])
    _kpq(p)
    p.add_argument("--j", type=_int_list, default=list(range(6)))
    p.add_argument("--v", type=_int_list, default=[0, 1, 5])
    p = add("crosscheck", "cascade vs product-formula spectrum", m_default=[2, 4, 8])
    p.add_argument("--iterations", type=_int_list, default=[10, 12])
    add("selfcheck", "run the invariant suite")
    return parser


def _single_int(text):
    try:
        return [int(text)]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _kpq(p):
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--q", type=float, default=2.0)


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    return RunConfig(**fields)


def run(config: RunConfig, stdout=None) -> int:
    """Validate, dispatch, emit; return the exit status."""
    stdout = stdout or sys.stdout
    try:
        config.validate()
    except UsageError as exc:
        print(f"daubconst: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = COMMANDS[config.subcommand](config)
    except DaubconstError as exc:
        print(f"daubconst: {config.subcommand} failed: {exc}", file=sys.stderr)
        return EXIT_FAILED if not isinstance(exc, ValueError) else EXIT_USAGE
    text = render(report, config.subcommand, config.output_format)
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if report.failed:
        print(f"daubconst: {config.subcommand}: some rows failed (see flags)", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser()
    except UsageError as exc:
        print(f"daubconst: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ns = parser.parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
