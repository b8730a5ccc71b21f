"""Measure how the test's run time grows when the order doubles.

Samples a few matrices per size, times repeated runs, and prints the median
per size together with the ratio between consecutive sizes.  The sparse path
should roughly double per doubling, the dense path should roughly quadruple.
Run on an idle machine; the medians are stable but not immune to load.

    python3 scripts/scaling_experiment.py
    python3 scripts/scaling_experiment.py --sizes 4096,8192,16384 --runs 20
"""

import argparse
import sys
import time

import numpy as np

from mcheck.mtest import is_nonsingular_m_matrix, is_nonsingular_m_matrix_dense
from mcheck.sampler import SampleConfig, sample_wdd_l0


def median_run_time(make, run, n, nnz, seeds, runs):
    mats = [make(SampleConfig(n=n, nnz=nnz, seed=s)) for s in seeds]
    run(mats[0])  # warm caches and compiled kernels
    ts = []
    for M in mats:
        for _ in range(runs):
            t0 = time.perf_counter()
            run(M)
            ts.append(time.perf_counter() - t0)
    return float(np.median(ts))


def report(label, sizes, make, run, nnz, seed, runs):
    print(f"{label}:")
    meds = []
    for k, n in enumerate(sizes):
        med = median_run_time(make, run, n, nnz,
                              (seed + 3 * k, seed + 3 * k + 1, seed + 3 * k + 2),
                              runs)
        ratio = "" if not meds else f"  x{med / meds[-1]:.2f}"
        meds.append(med)
        print(f"  n={n:>7}  median {med * 1e3:9.3f} ms{ratio}")
    return meds


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="16384,32768,65536",
                    help="comma-separated orders for the sparse path")
    ap.add_argument("--dense-sizes", default="256,512,1024")
    ap.add_argument("--nnz", type=int, default=6)
    ap.add_argument("--runs", type=int, default=10,
                    help="timed runs per sampled matrix (3 matrices per size)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-dense", action="store_true")
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    report("sparse test, time per run", sizes,
           sample_wdd_l0, is_nonsingular_m_matrix,
           args.nnz, args.seed, args.runs)
    if not args.skip_dense:
        dsizes = [int(s) for s in args.dense_sizes.split(",") if s.strip()]
        report("dense test, time per run", dsizes,
               lambda cfg: sample_wdd_l0(cfg).to_array(),
               is_nonsingular_m_matrix_dense,
               args.nnz, args.seed + 1000, args.runs)
    sys.exit(0)
