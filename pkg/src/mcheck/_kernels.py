"""Compiled kernels (numba) for the hot paths.

Everything here is private plumbing.  The kernels are deliberately loop-based:
the sparse test must traverse a breadth-first frontier that can be a million
levels deep (a path graph), which rules out level-synchronous vectorization.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def kahan_row_sums(row_ptr, values, nrows):
    """Compensated row sums for all rows."""
    out = np.empty(nrows, np.float64)
    for i in range(nrows):
        s = 0.0
        c = 0.0
        for k in range(row_ptr[i], row_ptr[i + 1]):
            y = values[k] - c
            t = s + y
            c = (t - s) - y
            s = t
        out[i] = s
    return out


@njit(cache=True)
def classify_row_sums(row_ptr, values, nrows, cutoff):
    """Row sums with the plain/Kahan switch at `cutoff` stored entries."""
    out = np.empty(nrows, np.float64)
    for i in range(nrows):
        lo = row_ptr[i]
        hi = row_ptr[i + 1]
        if hi - lo <= cutoff:
            s = 0.0
            for k in range(lo, hi):
                s += values[k]
            out[i] = s
        else:
            s = 0.0
            c = 0.0
            for k in range(lo, hi):
                y = values[k] - c
                t = s + y
                c = (t - s) - y
                s = t
            out[i] = s
    return out


@njit(cache=True)
def build_reversed_contracted(row_ptr, col_idx, in_jhat, n):
    """Reversed adjacency of the contracted graph.

    Vertex 0 is the contraction of the deficient rows; row i becomes vertex
    i + 1.  For every edge i -> j of the matrix with i outside the deficient
    set and j != i (self-loops and edges leaving deficient rows are pruned,
    which does not change any shortest distance), the reversed edge lands in
    the list of vertex 0 when j is deficient, else in the list of vertex
    j + 1.  Lists are filled in increasing row order, so traversal is
    deterministic.  Parallel edges into vertex 0 are kept; BFS ignores
    repeats.
    """
    counts = np.zeros(n + 2, np.int64)
    for i in range(n):
        if in_jhat[i]:
            continue
        for k in range(row_ptr[i], row_ptr[i + 1]):
            j = col_idx[k]
            if j == i:
                continue
            t = 0 if in_jhat[j] else j + 1
            counts[t + 1] += 1
    indptr = np.cumsum(counts)
    indices = np.empty(indptr[n + 1], np.int64)
    fill = indptr[:-1].copy()
    for i in range(n):
        if in_jhat[i]:
            continue
        for k in range(row_ptr[i], row_ptr[i + 1]):
            j = col_idx[k]
            if j == i:
                continue
            t = 0 if in_jhat[j] else j + 1
            indices[fill[t]] = i + 1
            fill[t] += 1
    return indptr, indices


@njit(cache=True)
def bfs_contracted(indptr, indices, in_jhat, n):
    """BFS from the contracted vertex 0 over the reversed adjacency.

    The mark array S doubles as the deficient-row flag and the visited flag;
    s counts marked rows.  Returns (max distance reached, whether every row
    ended up marked, S, distances, queue, queue length).  Unreached rows mean
    some row outside the deficient set has no walk into it: the index is
    infinite.
    """
    S = np.zeros(n + 1, np.uint8)
    S[0] = 1
    s = 0
    for i in range(n):
        if in_jhat[i]:
            S[i + 1] = 1
            s += 1
    queue = np.empty(n + 1, np.int64)
    dist = np.zeros(n + 1, np.int64)
    queue[0] = 0
    head = 0
    tail = 1
    maxd = 0
    while head < tail:
        v = queue[head]
        head += 1
        d = dist[v]
        if d > maxd:
            maxd = d
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if S[u] == 0:
                S[u] = 1
                s += 1
                dist[u] = d + 1
                queue[tail] = u
                tail += 1
    return maxd, s == n, S, dist, queue, tail


@njit(cache=True)
def dominance_sums(row_ptr, col_idx, values, nrows, cutoff):
    """Per-row (|a_ii|, sum of off-diagonal |a_ij|) for CSR storage, with the
    plain/Kahan switch at `cutoff` stored entries.  An unstored diagonal
    counts as 0."""
    diag = np.zeros(nrows, np.float64)
    off = np.empty(nrows, np.float64)
    for i in range(nrows):
        lo = row_ptr[i]
        hi = row_ptr[i + 1]
        if hi - lo <= cutoff:
            s = 0.0
            for k in range(lo, hi):
                if col_idx[k] == i:
                    diag[i] = abs(values[k])
                else:
                    s += abs(values[k])
            off[i] = s
        else:
            s = 0.0
            c = 0.0
            for k in range(lo, hi):
                if col_idx[k] == i:
                    diag[i] = abs(values[k])
                    continue
                y = abs(values[k]) - c
                t = s + y
                c = (t - s) - y
                s = t
            off[i] = s
    return diag, off


@njit(cache=True)
def dense_row_sums(M, cutoff):
    """Row sums of a dense array with the plain/Kahan switch on row length."""
    nrows, ncols = M.shape
    out = np.empty(nrows, np.float64)
    for i in range(nrows):
        if ncols <= cutoff:
            s = 0.0
            for j in range(ncols):
                s += M[i, j]
            out[i] = s
        else:
            s = 0.0
            c = 0.0
            for j in range(ncols):
                y = M[i, j] - c
                t = s + y
                c = (t - s) - y
                s = t
            out[i] = s
    return out


@njit(cache=True)
def dense_bfs_contracted(M, in_jhat):
    """Quadratic-path twin of build+bfs: scans the dense array directly.

    Popping the contracted vertex scans the whole matrix for edges into the
    deficient set; popping vertex j + 1 scans column j.  Self-loops and
    deficient sources are skipped as in the sparse kernel.
    """
    n = M.shape[0]
    S = np.zeros(n + 1, np.uint8)
    S[0] = 1
    s = 0
    for i in range(n):
        if in_jhat[i]:
            S[i + 1] = 1
            s += 1
    queue = np.empty(n + 1, np.int64)
    dist = np.zeros(n + 1, np.int64)
    queue[0] = 0
    head = 0
    tail = 1
    maxd = 0
    while head < tail:
        v = queue[head]
        head += 1
        d = dist[v]
        if d > maxd:
            maxd = d
        if v == 0:
            for i in range(n):
                if S[i + 1] != 0:
                    continue
                for j in range(n):
                    if j != i and in_jhat[j] and M[i, j] != 0.0:
                        S[i + 1] = 1
                        s += 1
                        dist[i + 1] = d + 1
                        queue[tail] = i + 1
                        tail += 1
                        break
        else:
            j = v - 1
            for i in range(n):
                if S[i + 1] == 0 and i != j and M[i, j] != 0.0:
                    S[i + 1] = 1
                    s += 1
                    dist[i + 1] = d + 1
                    queue[tail] = i + 1
                    tail += 1
    return maxd, s == n


@njit(cache=True)
def dense_dominance_sums(A, cutoff):
    """Per-row (|a_ii|, sum of off-diagonal |a_ij|) for a dense square array,
    with the plain/Kahan switch on row length."""
    n = A.shape[0]
    diag = np.empty(n, np.float64)
    off = np.empty(n, np.float64)
    for i in range(n):
        diag[i] = abs(A[i, i])
        if n <= cutoff:
            s = 0.0
            for j in range(n):
                if j != i:
                    s += abs(A[i, j])
            off[i] = s
        else:
            s = 0.0
            c = 0.0
            for j in range(n):
                if j != i:
                    y = abs(A[i, j]) - c
                    t = s + y
                    c = (t - s) - y
                    s = t
            off[i] = s
    return diag, off


@njit(cache=True)
def dense_point_jacobi(A):
    """Dense point Jacobi transform: row i of the result is -A[i, :] / a_ii
    with a zero diagonal; a zero-diagonal row becomes the unit row e_i (its
    sum is exactly one, keeping it out of the deficient set)."""
    n = A.shape[0]
    B = np.zeros((n, n))
    for i in range(n):
        d = A[i, i]
        if d == 0.0:
            B[i, i] = 1.0
        else:
            for j in range(n):
                if j != i:
                    B[i, j] = -A[i, j] / d
    return B
