"""Convergence of C_{k;p,q}(psi_m) towards its limit, as CSV on stdout.

    python3 scripts/convergence_table.py --m 1..16 --triples 1,2,2 2,2,2 1,3,1.5
"""

import argparse
import csv
import sys

from daubconst.cli import parse_int_list
from daubconst.constants import constant_ratio
from daubconst.quadrature import QuadratureConfig
from daubconst.spectrum import SpectrumEvaluator


def triple(text):
    k, p, q = text.split(",")
    return int(k), float(p), float(q)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=parse_int_list, default=list(range(1, 17)))
    ap.add_argument("--triples", type=triple, nargs="+", default=[(1, 2.0, 2.0), (2, 2.0, 2.0), (1, 3.0, 1.5)])
    ap.add_argument("--tol", type=float, default=1e-10)
    args = ap.parse_args(argv)

    cfg = QuadratureConfig(abs_tol=args.tol, rel_tol=args.tol)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["k", "p", "q", "m", "C", "limit", "rel_err", "converged"])
    for m in args.m:
        ev = SpectrumEvaluator.for_order(m)
        for k, p, q in args.triples:
            if k > m:
                continue
            rep = constant_ratio(m, k, p, q, ev, cfg, with_conditions=False, strict=False)
            out.writerow([k, p, q, m, f"{rep.constant:.12g}", f"{rep.theorem_limit:.12g}",
                          f"{rep.rel_error:.6g}", rep.converged])


if __name__ == "__main__":
    main()
