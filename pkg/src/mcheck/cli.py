"""Command-line front end: mcheck check|index|sample|oracle|bench.

Exit codes are a contract shared by all subcommands: 0 means yes (verdict
true / index finite), 1 means a definitive no, 2 means the input or the
invocation was bad.  Commands never raise out of main().

The bench subcommand times the linear sparse test against the quadratic
dense path and the cubic elimination oracle on freshly sampled matrices and
emits one CSV row per (n, nnz, trial, method).  Timing uses the monotonic
clock with 3 discarded warmup runs per cell; the warmups also absorb kernel
compilation.  MCHECK_TOL in the environment overrides the default tolerance
wherever --tol is not given.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .contraction import index_by_brute_force, index_of_contraction
from .errors import InvalidArgs, McheckError
from .matcore import ContractionIndex, Tolerance
from .mmio import read_matrix_market, write_matrix_market
from .mtest import (
    is_nonsingular_m_matrix,
    is_nonsingular_m_matrix_dense,
    monotone_oracle,
    point_jacobi,
)
from .sampler import SampleConfig, sample_substochastic, sample_wdd_l0

WILSON_Z_99 = 2.5758293035489
CSV_HEADER = "n,nnz,trial,method,wall_time_s,verdict,index"


@dataclass(frozen=True)
class BenchRecord:
    n: int
    nnz: int
    trial: int
    method: str  # bfs_sparse | bfs_dense | oracle_cubic
    wall_time: float
    verdict: bool
    index: Optional[ContractionIndex]

    def csv_row(self) -> str:
        idx = "" if self.index is None else str(self.index)
        verdict = "true" if self.verdict else "false"
        return (f"{self.n},{self.nnz},{self.trial},{self.method},"
                f"{self.wall_time!r},{verdict},{idx}")


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z_99):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise InvalidArgs("trials must be positive")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials
                         + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _resolve_tol(args) -> Optional[Tolerance]:
    tol = getattr(args, "tol", None)
    if tol is None:
        env = os.environ.get("MCHECK_TOL")
        if env is None:
            return None
        tol = float(env)
    return Tolerance(float(tol))


def _bool_word(b) -> str:
    return "true" if b else "false"


def cmd_check(args) -> int:
    A = read_matrix_market(args.input)
    v = is_nonsingular_m_matrix(A, _resolve_tol(args))
    if args.format == "json":
        print(json.dumps({
            "schema": 1,
            "is_square": v.is_square,
            "is_z": v.is_z,
            "is_l0": v.is_l0,
            "is_l": v.is_l,
            "is_wdd": v.is_wdd,
            "is_sdd": v.is_sdd,
            "index": None if v.index is None else str(v.index),
            "is_nonsingular_m_matrix": v.is_nonsingular_m_matrix,
        }))
    else:
        print(f"square: {_bool_word(v.is_square)}")
        print(f"Z: {_bool_word(v.is_z)}")
        print(f"L0: {_bool_word(v.is_l0)}")
        print(f"L: {_bool_word(v.is_l)}")
        print(f"w.d.d.: {_bool_word(v.is_wdd)}")
        print(f"s.d.d.: {_bool_word(v.is_sdd)}")
        print(f"index: {'n/a' if v.index is None else v.index}")
        print(f"nonsingular M-matrix: {_bool_word(v.is_nonsingular_m_matrix)}")
    return 0 if v.is_nonsingular_m_matrix else 1


def cmd_index(args) -> int:
    B = read_matrix_market(args.input)
    index = index_of_contraction(B, _resolve_tol(args))
    print(index)
    return 0 if index.is_finite else 1


def cmd_sample(args) -> int:
    cfg = SampleConfig(n=args.n, nnz=args.nnz, seed=args.seed)
    M = sample_substochastic(cfg) if args.substochastic else sample_wdd_l0(cfg)
    if args.output is None:
        write_matrix_market(M, sys.stdout)
    else:
        write_matrix_market(M, args.output)
    return 0


def cmd_oracle(args) -> int:
    A = read_matrix_market(args.input)
    verdict = monotone_oracle(A)
    fast = is_nonsingular_m_matrix(A, _resolve_tol(args))
    try:
        brute = str(index_by_brute_force(point_jacobi(A)))
    except McheckError:
        brute = "n/a"  # no point Jacobi matrix outside square w.d.d. L0
    print(f"monotone oracle: {_bool_word(verdict)}")
    print(f"brute-force index: {brute}")
    print(f"fast test: {_bool_word(fast.is_nonsingular_m_matrix)}")
    print("AGREE" if verdict == fast.is_nonsingular_m_matrix else "DISAGREE")
    return 0 if verdict else 1


def _parse_int_list(text: str, what: str):
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InvalidArgs(f"bad {what} list {text!r}") from None
    if not out or any(x < 1 for x in out):
        raise InvalidArgs(f"{what} must be positive integers, got {text!r}")
    return out


def run_bench(sizes, nnzs, trials, seed, oracle_cap=1024, dense_cap=4096,
              tol=None):
    """Run the benchmark grid and return (records, summary lines)."""
    if trials < 1:
        raise InvalidArgs("trials must be >= 1")
    master = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    records = []
    summary = []
    for n in sizes:
        for nnz in nnzs:
            methods = ["bfs_sparse"]
            if n <= dense_cap:
                methods.append("bfs_dense")
            if n <= oracle_cap:
                methods.append("oracle_cubic")
            warm = sample_wdd_l0(SampleConfig(n, nnz, int(master.integers(2**63))))
            warm_dense = warm.to_array() if len(methods) > 1 else None
            for _ in range(3):
                is_nonsingular_m_matrix(warm, tol)
                if "bfs_dense" in methods:
                    is_nonsingular_m_matrix_dense(warm_dense, tol)
                if "oracle_cubic" in methods:
                    monotone_oracle(warm_dense, order_cap=oracle_cap)
            times = {m: [] for m in methods}
            verdicts = []
            for trial in range(trials):
                cfg = SampleConfig(n, nnz, int(master.integers(2**63)))
                A = sample_wdd_l0(cfg)
                t0 = time.perf_counter()
                v = is_nonsingular_m_matrix(A, tol)
                dt = time.perf_counter() - t0
                records.append(BenchRecord(
                    n, nnz, trial, "bfs_sparse", dt,
                    bool(v.is_nonsingular_m_matrix), v.index))
                times["bfs_sparse"].append(dt)
                verdicts.append(bool(v.is_nonsingular_m_matrix))
                if "bfs_dense" in methods or "oracle_cubic" in methods:
                    M = A.to_array()
                if "bfs_dense" in methods:
                    t0 = time.perf_counter()
                    vd = is_nonsingular_m_matrix_dense(M, tol)
                    dt = time.perf_counter() - t0
                    records.append(BenchRecord(
                        n, nnz, trial, "bfs_dense", dt,
                        bool(vd.is_nonsingular_m_matrix), vd.index))
                    times["bfs_dense"].append(dt)
                if "oracle_cubic" in methods:
                    t0 = time.perf_counter()
                    vo = monotone_oracle(M, order_cap=oracle_cap)
                    dt = time.perf_counter() - t0
                    records.append(BenchRecord(
                        n, nnz, trial, "oracle_cubic", dt, bool(vo), None))
                    times["oracle_cubic"].append(dt)
            means = ", ".join(
                f"{m} {sum(ts) / len(ts):.6g} s" for m, ts in times.items())
            lo, hi = wilson_interval(sum(verdicts), len(verdicts))
            p = sum(verdicts) / len(verdicts)
            summary.append(
                f"n={n} nnz={nnz}: {means}; P(M-matrix) = {p:.3f} "
                f"[{lo:.3f}, {hi:.3f}] (99% Wilson)")
    return records, summary


def cmd_bench(args) -> int:
    sizes = _parse_int_list(args.sizes, "sizes")
    nnzs = _parse_int_list(args.nnz, "nnz")
    records, summary = run_bench(
        sizes, nnzs, args.trials, args.seed,
        oracle_cap=args.oracle_cap, dense_cap=args.dense_cap,
        tol=_resolve_tol(args))
    csv_lines = [CSV_HEADER] + [r.csv_row() for r in records]
    if args.csv is None:
        for line in summary:
            print(line, file=sys.stderr)
        for line in csv_lines:
            print(line)
    else:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(csv_lines) + "\n")
        for line in summary:
            print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mcheck",
        description="Linear-time nonsingular M-matrix test for weakly "
                    "diagonally dominant matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="classify a matrix and test it")
    c.add_argument("input", help="Matrix Market file")
    c.add_argument("--tol", type=float, default=None)
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("index", help="index of contraction of a substochastic matrix")
    c.add_argument("input", help="Matrix Market file")
    c.add_argument("--tol", type=float, default=None)
    c.set_defaults(func=cmd_index)

    c = sub.add_parser("sample", help="sample a random w.d.d. L0-matrix")
    c.add_argument("-n", type=int, required=True, help="order")
    c.add_argument("--nnz", type=int, required=True, help="max nonzeros per row")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    c.add_argument("--substochastic", action="store_true",
                   help="write B instead of I - B")
    c.set_defaults(func=cmd_sample)

    c = sub.add_parser("oracle", help="dense oracles on a small matrix")
    c.add_argument("input", help="Matrix Market file")
    c.add_argument("--tol", type=float, default=None)
    c.set_defaults(func=cmd_oracle)

    c = sub.add_parser("bench", help="benchmark the test methods")
    c.add_argument("--sizes", default="256,512,1024")
    c.add_argument("--nnz", default="6,12,24,48")
    c.add_argument("--trials", type=int, default=10)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--csv", default=None, help="CSV output path (default stdout)")
    c.add_argument("--oracle-cap", type=int, default=1024,
                   help="skip the cubic oracle above this order")
    c.add_argument("--dense-cap", type=int, default=4096,
                   help="skip the dense path above this order")
    c.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except McheckError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        raise
    except Exception as e:  # the exit-code contract: never panic
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
