"""Both limit hypotheses over m, with the explicit bound for condition (i).

Also reports the Minkowski gap, which bounds |weighted_norm - lemma_limit|.

    python3 scripts/lemma_diagnostics.py --m 2,4,8,16 --k 1 --p 2
"""

import argparse
import csv
import sys

from daubconst.cli import parse_int_list
from daubconst.constants import (
    NormRequest,
    condition_i,
    condition_i_bound,
    condition_ii,
    lemma_limit,
    minkowski_gap,
    weighted_norm,
)
from daubconst.quadrature import QuadratureConfig
from daubconst.spectrum import SpectrumEvaluator


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=parse_int_list, default=[2, 4, 8, 16])
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--eps", type=float, default=0.5)
    args = ap.parse_args(argv)

    cfg = QuadratureConfig(abs_tol=1e-10, rel_tol=1e-10)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["m", "cond_i", "cond_i_bound", "cond_ii", "norm_gap", "minkowski_gap"])
    for m in args.m:
        ev = SpectrumEvaluator.for_order(m)
        req = NormRequest(m, args.k, args.p)
        bound = condition_i_bound(m, args.k, args.p, args.eps) if m > args.k else float("nan")
        gap = abs(weighted_norm(req, ev, cfg) - lemma_limit(args.k, args.p))
        out.writerow([
            m,
            f"{condition_i(m, args.k, args.p, args.eps, ev, cfg):.6e}",
            f"{bound:.6e}",
            f"{condition_ii(m, args.p, ev, cfg):.8f}",
            f"{gap:.6e}",
            f"{minkowski_gap(req, ev, cfg):.6e}",
        ])


if __name__ == "__main__":
    main()
