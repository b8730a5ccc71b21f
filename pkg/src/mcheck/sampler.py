"""Random w.d.d. L0-matrices for testing and benchmarking.

Per row, a nonzero count m ~ Unif{1..nnz} and a target row sum s (drawn from
Unif[0,1] with probability 1/n, else exactly 1) are combined with a uniform
point of the simplex to make a substochastic row; the output matrix is
A = I - B.  Sampling is deterministic: the seed is split into one child
stream per row index, so row i's entries do not depend on how many draws the
other rows consumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import InvalidArgs, InvalidConfig
from .matcore import EPS, CsrMatrix, _csr_from_arrays


@dataclass(frozen=True)
class SampleConfig:
    """Sampler parameters.

    deficient_row_probability is the chance that a row draws its sum from
    Unif[0,1] instead of being exactly stochastic; None means 1/n.
    """

    n: int
    nnz: int
    seed: int
    deficient_row_probability: Optional[float] = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidConfig(f"order must be >= 1, got {self.n}")
        if not 1 <= self.nnz <= self.n:
            raise InvalidConfig(
                f"nnz must be in [1, {self.n}], got {self.nnz}")
        if not 0 <= self.seed < 2**64:
            raise InvalidConfig("seed must fit in 64 bits")
        if self.deficient_row_probability is None:
            object.__setattr__(self, "deficient_row_probability", 1.0 / self.n)
        p = self.deficient_row_probability
        if not (0.0 < p <= 1.0):
            raise InvalidConfig(
                f"deficient_row_probability must be in (0, 1], got {p}")


def dirichlet_uniform(m: int, rng: np.random.Generator) -> list:
    """A uniform sample of the unit simplex in R^m.

    Normalizes m independent standard-exponential draws; the components are
    nonnegative and sum to 1 within 4 eps (the normalizer is a compensated
    sum, so the only error is the final divisions).
    """
    if m < 1:
        raise InvalidArgs(f"dimension must be >= 1, got {m}")
    return [float(x) for x in _dirichlet(m, rng)]


def _dirichlet(m: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        e = rng.standard_exponential(m)
        denom = math.fsum(e)
        if denom > 0.0:
            return e / denom


def sample_without_replacement(n: int, m: int, rng: np.random.Generator) -> list:
    """m distinct indices from {0..n-1}, uniform over ordered m-subsets.

    Partial Fisher-Yates over a virtual array (a dict records displaced
    entries), so cost is O(m) regardless of n.
    """
    if not 0 <= m <= n:
        raise InvalidArgs(f"need 0 <= m <= n, got m={m} n={n}")
    displaced = {}
    out = []
    for k in range(m):
        j = int(rng.integers(k, n))
        vj = displaced.get(j, j)
        out.append(vj)
        displaced[j] = displaced.get(k, k)
    return out


def _shave_to_target(v: np.ndarray, s: float) -> None:
    """Nudge row values down by ulps until their exact real sum is <= s.

    The running subtraction bounds the computed residual, but the emitted
    row must be substochastic in exact arithmetic too: a stochastic row
    whose stored values sum to 1 + eps/4 would make a row of I - B fail
    weak dominance outright, with no tolerance band able to absorb an
    error that is relative to 1 rather than to the row's own scale.
    """
    excess = sum(map(Fraction, v.tolist()), Fraction(0)) - Fraction(s)
    while excess > 0:
        j = int(np.argmax(v))
        if v[j] <= 0.0:
            break
        down = math.nextafter(v[j], 0.0)
        excess -= Fraction(v[j]) - Fraction(down)
        v[j] = down


def _sample_rows(cfg: SampleConfig):
    n = cfg.n
    p = cfg.deficient_row_probability
    children = np.random.SeedSequence(cfg.seed).spawn(n)
    rows = []
    cols = []
    vals = []
    for i in range(n):
        rng = np.random.Generator(np.random.PCG64(children[i]))
        m = int(rng.integers(1, cfg.nnz + 1))
        u = rng.random()
        s = rng.random() if u < p else 1.0
        j = sample_without_replacement(n, m, rng)
        v = np.empty(m)
        if m == 1:
            v[0] = s
        else:
            w = _dirichlet(m, rng)
            b1 = s
            for k in range(1, m):
                bk = s * w[k]
                v[k] = bk
                b1 -= bk
            # the running subtraction only loses eps-level mass
            assert b1 >= -8.0 * EPS * s
            v[0] = b1 if b1 > 0.0 else 0.0
            _shave_to_target(v, s)
        rows.append(np.full(m, i, dtype=np.int64))
        cols.append(np.asarray(j, dtype=np.int64))
        vals.append(v)
    return (np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))


def sample_substochastic(cfg: SampleConfig) -> CsrMatrix:
    """The substochastic matrix B behind sample_wdd_l0; same streams, so
    sample_wdd_l0(cfg) equals I minus this exactly."""
    r, c, v = _sample_rows(cfg)
    return _csr_from_arrays(cfg.n, cfg.n, r, c, v)


def sample_wdd_l0(cfg: SampleConfig) -> CsrMatrix:
    """Draw a random w.d.d. L0-matrix A = I - B.

    B's rows follow the per-row recipe in the module docstring; the diagonal
    unit is summed with any sampled b_ii, so a_ii = 1 - b_ii when row i drew
    its own index (a fully stochastic single-entry row at the diagonal yields
    an exactly zero row of A, a legitimate singular sample).
    """
    B = sample_substochastic(cfg)
    rb, cb, vb = B.triplets()
    n = cfg.n
    rows = np.concatenate((np.arange(n, dtype=np.int64), rb))
    cols = np.concatenate((np.arange(n, dtype=np.int64), cb))
    vals = np.concatenate((np.ones(n), -vb))
    return _csr_from_arrays(n, n, rows, cols, vals)
