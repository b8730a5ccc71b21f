"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the package's own algorithms: row sums
and classification are exact rational arithmetic, the reference index is a
per-start forward search (not the contracted reversed BFS), nonsingularity
is a fraction-free integer determinant, and inverse nonnegativity is a
rational Gauss-Jordan.  Sampled matrices keep their entries on coarse dyadic
grids so that every float sum the library computes is exact and every margin
sits far outside the tolerance band.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

import numpy as np

from mcheck import ContractionIndex, CsrMatrix, csr_from_triplets

# ---------------------------------------------------------------------------
# exact-arithmetic oracles


def exact_row_sums(B: CsrMatrix):
    """Row sums as exact rationals (binary64 values are exact fractions)."""
    sums = []
    for i in range(B.nrows):
        lo, hi = B.row_ptr[i], B.row_ptr[i + 1]
        sums.append(sum((Fraction(float(v)) for v in B.values[lo:hi]),
                        Fraction(0)))
    return sums


def exact_jhat(B: CsrMatrix):
    return [s < 1 for s in exact_row_sums(B)]


def reference_index(B: CsrMatrix, jhat=None) -> ContractionIndex:
    """Index of contraction by per-start forward BFS with exact row sums.

    Structurally independent of the library: no contraction, no edge
    reversal, one search per non-deficient row.
    """
    n = B.nrows
    if jhat is None:
        jhat = exact_jhat(B)
    adj = [list(B.col_idx[B.row_ptr[i]:B.row_ptr[i + 1]]) for i in range(n)]
    worst = 0
    for start in range(n):
        if jhat[start]:
            continue
        dist = {start: 0}
        q = deque([start])
        found = None
        while q and found is None:
            v = q.popleft()
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    if jhat[w]:
                        found = dist[w]
                        break
                    q.append(w)
        if found is None:
            return ContractionIndex.infinite()
        worst = max(worst, found)
    return ContractionIndex.finite(worst)


def bareiss_det(M) -> int:
    """Fraction-free determinant of an integer matrix."""
    a = [[int(x) for x in row] for row in M]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def exact_monotone(A) -> bool:
    """Rational Gauss-Jordan verdict: nonsingular with nonnegative inverse.

    The Z sign check is the caller's business; this decides monotonicity of
    an arbitrary square rational matrix exactly.
    """
    n = len(A)
    if n == 0:
        return True
    aug = [[Fraction(A[i][j]) for j in range(n)]
           + [Fraction(1 if j == i else 0) for j in range(n)]
           for i in range(n)]
    for k in range(n):
        piv = None
        for p in range(k, n):
            if aug[p][k] != 0:
                piv = p
                break
        if piv is None:
            return False
        aug[k], aug[piv] = aug[piv], aug[k]
        pv = aug[k][k]
        aug[k] = [x / pv for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k] != 0:
                f = aug[i][k]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    return all(aug[i][j] >= 0 for i in range(n) for j in range(n, 2 * n))


def dense_fractions(M: CsrMatrix):
    a = [[Fraction(0)] * M.ncols for _ in range(M.nrows)]
    rows, cols, vals = M.triplets()
    for r, c, v in zip(rows, cols, vals):
        a[r][c] = Fraction(float(v))
    return a


# ---------------------------------------------------------------------------
# named fixture matrices


def fig_chain(n: int) -> CsrMatrix:
    """Subdiagonal ones; row 0 empty.  Index n - 1, deficient set {0}."""
    return csr_from_triplets(n, n, [(i, i - 1, 1.0) for i in range(1, n)])


def bidiagonal_l(n: int) -> CsrMatrix:
    """Unit diagonal, -1 subdiagonal: the w.c.d.d. L-matrix whose point
    Jacobi matrix is fig_chain(n)."""
    trips = [(i, i, 1.0) for i in range(n)]
    trips += [(i, i - 1, -1.0) for i in range(1, n)]
    return csr_from_triplets(n, n, trips)


def eight_vertex() -> CsrMatrix:
    """8-vertex example with deficient rows {6, 7} (0-indexed); index 2.

    Edges (1-indexed) 1>2; 2>3,4,7; 3>1,7; 4>5,8; 5>4,6; 6>5,8; rows 7 and 8
    empty.  Weights are dyadic and rows 1..6 sum to exactly 1.
    """
    e = {
        0: [(1, Fraction(1))],
        1: [(2, Fraction(1, 4)), (3, Fraction(1, 4)), (6, Fraction(1, 2))],
        2: [(0, Fraction(1, 2)), (6, Fraction(1, 2))],
        3: [(4, Fraction(1, 2)), (7, Fraction(1, 2))],
        4: [(3, Fraction(1, 2)), (5, Fraction(1, 2))],
        5: [(4, Fraction(1, 2)), (7, Fraction(1, 2))],
    }
    trips = [(i, j, float(w)) for i, row in e.items() for j, w in row]
    return csr_from_triplets(8, 8, trips)


def b_nu(n: int, nu: Fraction) -> CsrMatrix:
    """Superdiagonal ones; last row (1/n - nu, 1/n, ..., 1/n).

    The entries are rounded to binary64 at construction, which is the point:
    for tiny nu the corner entry rounds to exactly 1/n.
    """
    trips = [(i, i + 1, 1.0) for i in range(n - 1)]
    trips.append((n - 1, 0, float(Fraction(1, n) - nu)))
    trips += [(n - 1, j, float(Fraction(1, n))) for j in range(1, n)]
    return csr_from_triplets(n, n, trips)


def alternating_pair():
    """Order-2 pair whose products never contract: odd steps 2->1, even
    steps 1->2, each a single stochastic row."""
    b_odd = csr_from_triplets(2, 2, [(1, 0, 1.0)])
    b_even = csr_from_triplets(2, 2, [(0, 1, 1.0)])
    return b_odd, b_even


# ---------------------------------------------------------------------------
# dyadic random samplers (all sums exact in binary64)


def _compose(rng, total: int, parts: int):
    """Random composition of `total` into `parts` nonnegative integers."""
    if parts == 1:
        return [total]
    cuts = np.sort(rng.integers(0, total + 1, size=parts - 1))
    out = np.diff(np.concatenate(([0], cuts, [total])))
    return [int(x) for x in out]


def random_dyadic_substochastic(rng, n: int, max_nnz=None, denom=16,
                                stochastic_p=0.5) -> CsrMatrix:
    """Random substochastic matrix on the 1/denom grid.

    Each row is exactly stochastic with probability stochastic_p, else its
    sum is a uniformly drawn multiple of 1/denom below 1.  With denom a
    power of two and n small, every row sum the library computes is exact.
    """
    if max_nnz is None:
        max_nnz = n
    trips = []
    for i in range(n):
        m = int(rng.integers(1, max_nnz + 1))
        total = denom if rng.random() < stochastic_p \
            else int(rng.integers(0, denom))
        cols = rng.choice(n, size=m, replace=False)
        for j, part in zip(cols, _compose(rng, total, m)):
            if part:
                trips.append((i, int(j), part / denom))
    return csr_from_triplets(n, n, trips)


def random_dyadic_wdd_l0(rng, n: int, max_nnz=None, denom=16) -> CsrMatrix:
    """Random w.d.d. L0-matrix A = I - B with B on the 1/denom grid.

    Dominance margins are either exactly 0 (stochastic rows of B) or at
    least 1/denom, so the classification never sits near the band.
    """
    B = random_dyadic_substochastic(rng, n, max_nnz, denom)
    rows, cols, vals = B.triplets()
    trips = [(i, i, 1.0) for i in range(n)]
    trips += [(int(r), int(c), -float(v)) for r, c, v in zip(rows, cols, vals)]
    return csr_from_triplets(n, n, trips)


def random_permutation_similarity(rng, B: CsrMatrix):
    """(P B P^T as CsrMatrix, perm array) for a random permutation."""
    perm = rng.permutation(B.nrows)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(B.nrows)
    rows, cols, vals = B.triplets()
    trips = [(int(inv[r]), int(inv[c]), float(v))
             for r, c, v in zip(rows, cols, vals)]
    return csr_from_triplets(B.nrows, B.ncols, trips), perm


def random_block_triangular(rng, denom=16):
    """Convergent block upper-triangular substochastic matrix.

    Returns (B, block index lists).  Diagonal blocks are resampled until
    convergent (exact reference check); row budgets are split between the
    diagonal block and the strictly-upper part so the whole matrix stays on
    the grid and substochastic.
    """
    nblocks = int(rng.integers(2, 5))
    sizes = [int(rng.integers(1, 9)) for _ in range(nblocks)]
    offsets = np.concatenate(([0], np.cumsum(sizes)))
    n = int(offsets[-1])
    trips = []
    for b, size in enumerate(sizes):
        base = int(offsets[b])
        while True:
            blk = random_dyadic_substochastic(rng, size, denom=denom)
            if reference_index(blk).is_finite:
                break
        # leave room for upper coupling except in the last block
        rows, cols, vals = blk.triplets()
        sums = np.zeros(size)
        for r, c, v in zip(rows, cols, vals):
            trips.append((base + int(r), base + int(c), float(v)))
            sums[r] += v
        if b + 1 < nblocks:
            for r in range(size):
                room = int(round((1.0 - sums[r]) * denom))
                if room <= 0 or rng.random() < 0.5:
                    continue
                spend = int(rng.integers(1, room + 1))
                j = int(rng.integers(offsets[b + 1], n))
                trips.append((base + r, j, spend / denom))
    B = csr_from_triplets(n, n, trips)
    blocks = [list(range(int(offsets[b]), int(offsets[b + 1])))
              for b in range(nblocks)]
    return B, blocks


def submatrix(B: CsrMatrix, idx) -> CsrMatrix:
    pos = {v: k for k, v in enumerate(idx)}
    rows, cols, vals = B.triplets()
    trips = [(pos[r], pos[c], float(v)) for r, c, v in zip(rows, cols, vals)
             if r in pos and c in pos]
    return csr_from_triplets(len(idx), len(idx), trips)


def graph_stationary_sequence(rng, n: int, length: int, denom=16):
    """Sequence of substochastic matrices with stationary graph and
    stationary deficient set.

    Every entry stays positive on the grid and each row is either exactly
    stochastic in every layer or deficient in every layer, so the graphs
    and the deficient sets coincide across the sequence while the entry
    values vary.
    """
    pattern = []
    stochastic = []
    for i in range(n):
        m = int(rng.integers(1, min(4, n) + 1))
        pattern.append(sorted(int(c) for c in rng.choice(n, size=m, replace=False)))
        stochastic.append(bool(rng.random() < 0.5))
    out = []
    for _ in range(length):
        trips = []
        for i, cols in enumerate(pattern):
            m = len(cols)
            # parts stay >= 1 so the graph never loses an edge; deficient
            # rows stay strictly below denom so the classification is fixed
            total = denom if stochastic[i] else int(rng.integers(m, denom))
            parts = [1] * m
            for p, extra in zip(range(m), _compose(rng, total - m, m)):
                parts[p] += extra
            for j, part in zip(cols, parts):
                trips.append((i, j, part / denom))
        out.append(csr_from_triplets(n, n, trips))
    return out


def fuzz_sparse(rng, max_order=100, denom=128) -> CsrMatrix:
    """Fast vectorized random substochastic matrix for fuzzing.

    Duplicate column draws are summed by the builder; sums stay on the
    1/denom grid, so substochasticity is exact by construction.
    """
    n = int(rng.integers(1, max_order + 1))
    m = int(rng.integers(1, min(5, n) + 1))
    rows = np.repeat(np.arange(n, dtype=np.int64), m)
    cols = rng.integers(0, n, size=n * m)
    totals = np.where(rng.random(n) < 0.5, denom,
                      rng.integers(0, denom, size=n))
    if m == 1:
        parts = totals[:, None]
    else:
        cuts = np.sort(rng.integers(0, totals[:, None] + 1, size=(n, m - 1)),
                       axis=1)
        parts = np.diff(np.concatenate(
            (np.zeros((n, 1), np.int64), cuts, totals[:, None]), axis=1), axis=1)
    vals = parts.ravel() / denom
    keep = vals != 0.0
    return csr_from_triplets(
        n, n, list(zip(rows[keep].tolist(), cols[keep].tolist(),
                       vals[keep].tolist())))


def long_chain(n: int) -> CsrMatrix:
    """fig_chain at scale, built with arrays (no python triplet list)."""
    import mcheck.matcore as mcore
    rows = np.arange(1, n, dtype=np.int64)
    cols = np.arange(0, n - 1, dtype=np.int64)
    vals = np.ones(n - 1)
    return mcore._csr_from_arrays(n, n, rows, cols, vals)
