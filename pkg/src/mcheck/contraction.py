"""Index of contraction: graph contraction + reversed-edge BFS, the sequence
generalization, and dense brute-force oracles.

The index of a square substochastic matrix B is the largest, over rows i whose
row-sum equals one, of the shortest walk length in graph B from i to a row
with sum below one; 0 when every row-sum is deficient; infinite when some row
has no such walk.  It is computed in time linear in the stored entries: the
deficient rows are contracted into a single vertex, edges are reversed, and a
single BFS from the contracted vertex yields every distance at once.

The brute-force oracles characterize the same quantity through powers: the
index equals the first exponent alpha at which the sup-norm of B^(alpha+1)
drops below one (and is infinite exactly when no power ever contracts, which
happens iff I - B is singular).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    IncompatibleDimensions,
    InvalidArgs,
    NotSquare,
    NotSubstochastic,
    OrderTooLargeForFloat,
    OrderTooLargeForOracle,
)
from .matcore import (
    EPS,
    PLAIN_SUMMATION_CUTOFF,
    ContractionIndex,
    CsrMatrix,
    DenseMatrix,
    RowClass,
    SubstochasticReport,
    Tolerance,
    classify_rows,
    default_tolerance,
    validate_substochastic,
)

ORACLE_ORDER_CAP = 64
"""The dense oracles refuse matrices larger than this rather than silently
going quartic."""

#: Result type for sequence operations; structurally identical to the
#: fixed-matrix index, and kept the same class so the two compare equal.
SequenceIndex = ContractionIndex


@dataclass(frozen=True)
class BfsWorkspace:
    """State of one contracted-BFS run, exposed for inspection and testing.

    indptr/indices hold the reversed neighbor lists (vertex 0 is the
    contracted deficient set; row i is vertex i + 1).  visited doubles as the
    deficient-row mark and the BFS mark.  queue[:queue_len] is the dequeue
    order; distances are BFS distances from vertex 0 (meaningful for visited
    vertices only).
    """

    indptr: np.ndarray
    indices: np.ndarray
    visited: np.ndarray
    distances: np.ndarray
    queue: np.ndarray
    queue_len: int


def _default_tol(B: CsrMatrix, tol) -> Tolerance:
    if tol is None:
        return default_tolerance(max(B.max_row_nnz(), 1))
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(float(tol))


def index_of_contraction(B: CsrMatrix, tol=None, *, return_workspace: bool = False):
    """Index of contraction of a square substochastic matrix.

    Classifies the rows (sum < 1 - tol), contracts the deficient rows into a
    single vertex, and runs one BFS over the reversed edges.  Self-loops and
    edges leaving deficient rows are pruned; neither affects any shortest
    distance.  The result is Finite(max BFS distance) when every row is
    reached (or deficient), else Infinite.

    Parameters
    ----------
    B : CsrMatrix
        Square substochastic matrix.
    tol : Tolerance or float, optional
        Classification tolerance; defaults to the matrix's default tolerance.
    return_workspace : bool
        Also return the BfsWorkspace of the run.

    Raises
    ------
    NotSquare, NotSubstochastic, OrderTooLargeForFloat
    """
    if not B.is_square:
        raise NotSquare(f"expected a square matrix, got {B.nrows}x{B.ncols}")
    n = B.nrows
    if n * EPS > 1.0:
        raise OrderTooLargeForFloat("matrix order violates n*eps <= 1")
    report = validate_substochastic(B)
    if not report:
        raise NotSubstochastic(report)
    tol = _default_tol(B, tol)
    rc = classify_rows(B, tol)
    index, ws = _contracted_bfs(B.row_ptr, B.col_idx, rc.in_jhat, n)
    if return_workspace:
        return index, ws
    return index


def _contracted_bfs(row_ptr, col_idx, in_jhat, n):
    indptr, indices = _kernels.build_reversed_contracted(row_ptr, col_idx, in_jhat, n)
    maxd, covered, S, dist, queue, qlen = _kernels.bfs_contracted(indptr, indices, in_jhat, n)
    if covered:
        index = ContractionIndex.finite(int(maxd))
        assert index.value < max(n, 1)  # finite index is strictly below the order
    else:
        index = ContractionIndex.infinite()
    ws = BfsWorkspace(indptr, indices, S.astype(bool), dist, queue, int(qlen))
    return index, ws


def index_of_contraction_dense(B, tol=None) -> ContractionIndex:
    """Quadratic-path twin of index_of_contraction for dense storage.

    Scans the dense array directly (row sums, then a BFS that reads columns in
    place), so it takes time proportional to n^2 regardless of sparsity.
    """
    if isinstance(B, DenseMatrix):
        M = B.data
    else:
        M = DenseMatrix.from_array(B).data
    if M.shape[0] != M.shape[1]:
        raise NotSquare(f"expected a square matrix, got {M.shape[0]}x{M.shape[1]}")
    n = M.shape[0]
    if n * EPS > 1.0:
        raise OrderTooLargeForFloat("matrix order violates n*eps <= 1")
    if n and M.min() < 0.0:
        k = int(np.flatnonzero(M.ravel() < 0.0)[0])
        raise NotSubstochastic(SubstochasticReport(
            False, k // n, "NegativeEntry", float(M.ravel()[k])))
    sums = _kernels.dense_row_sums(M, 0)  # cutoff 0: compensated everywhere
    if tol is None:
        tol = default_tolerance(max(n, 1))
    elif not isinstance(tol, Tolerance):
        tol = Tolerance(float(tol))
    over = np.flatnonzero(sums > 1.0 + tol.tol)
    if len(over):
        raise NotSubstochastic(SubstochasticReport(
            False, int(over[0]), "RowSumExceedsOne", float(sums[over[0]])))
    if n == 0:
        return ContractionIndex.finite(0)
    class_sums = _kernels.dense_row_sums(M, PLAIN_SUMMATION_CUTOFF)
    in_jhat = class_sums < 1.0 - tol.tol
    maxd, covered = _kernels.dense_bfs_contracted(M, in_jhat)
    if covered:
        return ContractionIndex.finite(int(maxd))
    return ContractionIndex.infinite()


def _dense_square_oracle_input(B, cap: int = ORACLE_ORDER_CAP) -> np.ndarray:
    if isinstance(B, CsrMatrix):
        M = B.to_array() if B.nrows <= cap and B.is_square else None
        nrows, ncols = B.nrows, B.ncols
    else:
        M = DenseMatrix.from_array(B.data if isinstance(B, DenseMatrix) else B).data
        nrows, ncols = M.shape
    if nrows != ncols:
        raise NotSquare(f"expected a square matrix, got {nrows}x{ncols}")
    if nrows > cap:
        raise OrderTooLargeForOracle(f"order {nrows} exceeds the oracle cap {cap}")
    return M


def _sup_norm(M: np.ndarray) -> float:
    if M.shape[0] == 0:
        return 0.0
    return float(np.abs(M).sum(axis=1).max())


def is_contraction_power(B, k: int) -> bool:
    """Oracle: does the k-th power of B contract in the sup norm?

    True iff the maximum absolute row sum of B^k is < 1, with B^0 = I and the
    power formed by repeated multiplication in order.  Any matrix fails at
    k = 0 (the identity has norm one).
    """
    if k < 0:
        raise InvalidArgs("power must be nonnegative")
    M = _dense_square_oracle_input(B)
    C = np.eye(M.shape[0])
    for _ in range(k):
        C = C @ M
    return _sup_norm(C) < 1.0


def index_by_brute_force(B) -> ContractionIndex:
    """Oracle: the index as the first power at which the sup norm drops.

    Returns the smallest alpha with norm(B^(alpha+1)) < 1 if one exists, else
    Infinite.  A finite index of an order-m matrix is strictly below m, so the
    search stops at the m-th power.
    """
    M = _dense_square_oracle_input(B)
    m = M.shape[0]
    if m == 0:
        return ContractionIndex.finite(0)
    C = np.eye(m)
    for alpha in range(m):
        C = C @ M
        if _sup_norm(C) < 1.0:
            return ContractionIndex.finite(alpha)
    return ContractionIndex.infinite()


def _check_chain(Bs) -> None:
    if not Bs:
        raise InvalidArgs("expected a nonempty list of matrices")
    for k in range(len(Bs) - 1):
        if Bs[k].ncols != Bs[k + 1].nrows:
            raise IncompatibleDimensions(
                f"matrix {k} has {Bs[k].ncols} columns but matrix {k + 1} "
                f"has {Bs[k + 1].nrows} rows")


def sequence_index(Bs, tol=None) -> SequenceIndex:
    """Index of contraction of a finite sequence of compatible substochastic
    matrices.

    A walk takes its k-th step along an edge of the k-th matrix and terminates
    successfully when its current row is deficient in the NEXT matrix of the
    sequence.  The result is the max over non-deficient starting rows of the
    minimal successful walk length.

    A finite input list can only certify termination within the matrices
    provided: a walk whose certificate would need a matrix beyond the end of
    the list does not count, and anything left uncertified makes the result
    Infinite.  In other words, a finite prefix can certify a finite index but
    can never refute one.
    """
    _check_chain(Bs)
    for k, B in enumerate(Bs):
        report = validate_substochastic(B)
        if not report:
            raise NotSubstochastic(report)
    marks = []
    for B in Bs:
        t = _default_tol(B, tol)
        marks.append(classify_rows(B, t).in_jhat)
    L = len(Bs)
    INF = float("inf")
    # g[v] = minimal remaining steps from row v after k steps; backward layers
    g_next = [INF] * Bs[L - 1].ncols
    for k in range(L - 1, -1, -1):
        B = Bs[k]
        g = [INF] * B.nrows
        for v in range(B.nrows):
            if marks[k][v]:
                g[v] = 0.0
                continue
            cols, _ = B.row(v)
            best = INF
            for w in cols:
                if g_next[w] + 1.0 < best:
                    best = g_next[w] + 1.0
            g[v] = best
        g_next = g
    start_vals = [g_next[i] for i in range(Bs[0].nrows) if not marks[0][i]]
    if not start_vals:
        return ContractionIndex.finite(0)
    worst = max(start_vals)
    if worst == INF:
        return ContractionIndex.infinite()
    return ContractionIndex.finite(int(worst))


def prefix_product_norms(Bs, upto: int) -> list[float]:
    """Sup norms of the prefix products C_0 = I, C_k = B_1 ... B_k.

    Returns [norm(C_0), ..., norm(C_upto)] by dense left-to-right products.
    """
    _check_chain(Bs)
    if upto > len(Bs) or upto < 0:
        raise InvalidArgs(f"upto={upto} outside [0, {len(Bs)}]")
    for B in Bs:
        if max(B.nrows, B.ncols) > ORACLE_ORDER_CAP:
            raise OrderTooLargeForOracle(
                f"dimension exceeds the oracle cap {ORACLE_ORDER_CAP}")
    C = np.eye(Bs[0].nrows)
    norms = [_sup_norm(C)] if Bs[0].nrows else [0.0]
    for k in range(upto):
        C = C @ Bs[k].to_array()
        norms.append(_sup_norm(C))
    return norms


def scc_normal_form(B: CsrMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Permutation and block boundaries of the normal form of B.

    Returns (perm, boundaries) such that arranging rows and columns by perm
    makes the matrix block upper-triangular, with the diagonal blocks the
    strongly connected components of graph B (or 1x1 zero blocks) in
    topological order of the condensation.  boundaries[k]:boundaries[k+1]
    delimits block k; boundaries has one more entry than there are blocks.
    """
    if not B.is_square:
        raise NotSquare(f"expected a square matrix, got {B.nrows}x{B.ncols}")
    n = B.nrows
    comps = _tarjan(B.row_ptr, B.col_idx, n)
    comps.reverse()  # Tarjan pops sinks first; reverse for topological order
    perm = np.empty(n, dtype=np.int64)
    boundaries = np.empty(len(comps) + 1, dtype=np.int64)
    boundaries[0] = 0
    pos = 0
    for k, comp in enumerate(comps):
        comp.sort()
        for v in comp:
            perm[pos] = v
            pos += 1
        boundaries[k + 1] = pos
    return perm, boundaries


def _tarjan(row_ptr, col_idx, n):
    """Iterative Tarjan; components are emitted in reverse topological order."""
    UNSEEN = -1
    index = np.full(n, UNSEEN, dtype=np.int64)
    low = np.zeros(n, dtype=np.int64)
    on_stack = np.zeros(n, dtype=bool)
    stack = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] != UNSEEN:
            continue
        work = [(root, row_ptr[root])]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, ptr = work[-1]
            if ptr < row_ptr[v + 1]:
                work[-1] = (v, ptr + 1)
                w = col_idx[ptr]
                if index[w] == UNSEEN:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, row_ptr[w]))
                elif on_stack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    if low[v] < low[parent]:
                        low[parent] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(comp)
    return comps
