"""Estimate how often a random w.d.d. L0-matrix is a nonsingular M-matrix.

For each (order, max nonzeros per row) cell, samples matrices, runs the
fast test, and prints the empirical probability with a 99% Wilson score
interval.  The probability drops with the order: the more rows a walk has
to cross before it can reach a strictly dominant one, the more ways there
are for it never to get there.

    python3 scripts/verdict_probability.py
    python3 scripts/verdict_probability.py --sizes 8,32,128 --trials 2000 --csv out.csv
"""

import argparse
import sys

from mcheck.cli import wilson_interval
from mcheck.mtest import is_nonsingular_m_matrix
from mcheck.sampler import SampleConfig, sample_wdd_l0


def cell(n, nnz, trials, seed):
    hits = 0
    for t in range(trials):
        A = sample_wdd_l0(SampleConfig(n=n, nnz=nnz, seed=seed + t))
        hits += bool(is_nonsingular_m_matrix(A))
    return hits


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="4,8,16,32,64")
    ap.add_argument("--nnz", default="2,6,12")
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    nnzs = [int(s) for s in args.nnz.split(",") if s.strip()]
    rows = ["n,nnz,trials,hits,p,wilson_lo,wilson_hi"]
    print(f"{args.trials} trials per cell, 99% Wilson intervals")
    for n in sizes:
        for nnz in nnzs:
            if nnz > n:
                continue
            hits = cell(n, nnz, args.trials, args.seed + 7919 * n + nnz)
            p = hits / args.trials
            lo, hi = wilson_interval(hits, args.trials)
            print(f"  n={n:>4} nnz={nnz:>3}  P = {p:.3f}  [{lo:.3f}, {hi:.3f}]")
            rows.append(f"{n},{nnz},{args.trials},{hits},{p!r},{lo!r},{hi!r}")
    if args.csv is not None:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(rows) + "\n")
    sys.exit(0)
