"""Core matrix types, row-sum classification, and the graph view.

A sparse matrix is stored in compressed sparse row (CSR) form and is
simultaneously treated as its directed graph: there is an edge i -> j exactly
when the entry (i, j) is stored (stored zeros are forbidden, so stored means
nonzero).  Row-sum classification decides, with a rigorous floating-point
tolerance, which rows of a substochastic matrix have sum strictly less than
one; everything downstream (the contraction index, the M-matrix test) is built
on top of that classification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .errors import (
    IndexOutOfRange,
    InvalidArgs,
    NonFiniteValue,
    OrderTooLargeForFloat,
    ToleranceTooSmall,
)
from . import _kernels

EPS = 2.0 ** -53
"""Unit roundoff of binary64."""

PLAIN_SUMMATION_CUTOFF = 64
"""Rows with at most this many stored entries are summed by plain left-to-right
accumulation; longer rows use Kahan compensated summation.  The cutoff keeps
the plain-summation error coefficient gamma_{nnz-1} at roughly 63*eps."""


def gamma(k: int) -> float:
    """Error coefficient gamma_k = k*eps / (1 - k*eps) of plain summation.

    The forward error of left-to-right summation of k+1 nonnegative terms is
    at most gamma_k times the exact sum.
    """
    if k < 0:
        raise InvalidArgs("gamma is defined for k >= 0")
    return k * EPS / (1.0 - k * EPS)


@dataclass(frozen=True)
class Tolerance:
    """Classification threshold: a row counts as deficient only if its
    computed sum is < 1 - tol.

    The value must exceed the summation error coefficient gamma_{nnz-1} of the
    matrix it is used with; that context-dependent condition is checked by
    classify_rows, not here.
    """

    tol: float

    def __post_init__(self):
        if not (0.0 < self.tol < 1.0) or self.tol != self.tol:
            raise InvalidArgs(f"tolerance must lie in (0, 1), got {self.tol!r}")


def _as_tolerance(tol) -> "Tolerance":
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(float(tol))


def default_tolerance(max_nnz: int) -> Tolerance:
    """Default classification tolerance for a matrix with at most max_nnz
    stored entries per row.

    Returns 2 * gamma_{max_nnz - 1}, floored at 2^-50.  The factor 2 gives
    slack over the bare summation bound (deficient sums at most 1 - 2*tol are
    then classified exactly); the floor guards max_nnz = 1, where gamma_0 = 0.
    """
    if max_nnz < 1:
        raise InvalidArgs(f"max_nnz must be >= 1, got {max_nnz}")
    return Tolerance(max(2.0 * gamma(max_nnz - 1), 2.0 ** -50))


@dataclass(frozen=True)
class CsrMatrix:
    """Sparse rectangular real matrix in CSR form.

    Fields
    ------
    nrows, ncols : int
        Matrix dimensions.
    row_ptr : int64 array, length nrows + 1
        row_ptr[i]:row_ptr[i+1] slices col_idx/values for row i.
    col_idx : int64 array
        Column indices, strictly increasing within each row.
    values : float64 array
        Stored entries; finite and nonzero (a stored zero would create a
        phantom edge in the graph of the matrix, so construction forbids it).

    The matrix doubles as its digraph: i -> j is an edge iff (i, j) is stored.
    Arrays are frozen after construction; instances are safe to share.
    """

    nrows: int
    ncols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        row_ptr = np.ascontiguousarray(self.row_ptr, dtype=np.int64)
        col_idx = np.ascontiguousarray(self.col_idx, dtype=np.int64)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        object.__setattr__(self, "row_ptr", row_ptr)
        object.__setattr__(self, "col_idx", col_idx)
        object.__setattr__(self, "values", values)
        if self.nrows < 0 or self.ncols < 0:
            raise InvalidArgs("matrix dimensions must be nonnegative")
        if row_ptr.shape != (self.nrows + 1,):
            raise InvalidArgs("row_ptr must have length nrows + 1")
        if row_ptr[0] != 0 or row_ptr[-1] != len(col_idx) or len(col_idx) != len(values):
            raise InvalidArgs("row_ptr endpoints must match the index/value arrays")
        if np.any(np.diff(row_ptr) < 0):
            raise InvalidArgs("row_ptr must be nondecreasing")
        if len(col_idx):
            if col_idx.min() < 0 or col_idx.max() >= self.ncols:
                raise IndexOutOfRange("column index out of range")
            # strict increase within rows: adjacent pairs that belong to the
            # same row must increase; pairs split across a row boundary may not
            same_row = np.ones(len(col_idx) - 1, dtype=bool)
            boundaries = row_ptr[1:-1]
            same_row[boundaries[(boundaries > 0) & (boundaries < len(col_idx))] - 1] = False
            if np.any(same_row & (np.diff(col_idx) <= 0)):
                raise InvalidArgs("column indices must be strictly increasing within each row")
        if not np.all(np.isfinite(values)):
            raise NonFiniteValue("stored values must be finite")
        if np.any(values == 0.0):
            raise InvalidArgs("explicitly stored zeros are forbidden")
        for a in (row_ptr, col_idx, values):
            a.setflags(write=False)

    @property
    def nnz(self) -> int:
        return len(self.values)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def max_row_nnz(self) -> int:
        if self.nrows == 0:
            return 0
        return int(np.diff(self.row_ptr).max())

    def row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Column indices and values of row i."""
        lo, hi = self.row_ptr[i], self.row_ptr[i + 1]
        return self.col_idx[lo:hi], self.values[lo:hi]

    def triplets(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(rows, cols, values) arrays in row-major order."""
        rows = np.repeat(np.arange(self.nrows, dtype=np.int64), np.diff(self.row_ptr))
        return rows, self.col_idx.copy(), self.values.copy()

    def to_dense(self) -> "DenseMatrix":
        a = np.zeros((self.nrows, self.ncols))
        rows, cols, vals = self.triplets()
        a[rows, cols] = vals
        return DenseMatrix.from_array(a)

    def to_array(self) -> np.ndarray:
        return self.to_dense().data

    def __eq__(self, other) -> bool:
        if not isinstance(other, CsrMatrix):
            return NotImplemented
        return (
            self.nrows == other.nrows
            and self.ncols == other.ncols
            and np.array_equal(self.row_ptr, other.row_ptr)
            and np.array_equal(self.col_idx, other.col_idx)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self) -> str:
        return f"CsrMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


@dataclass(frozen=True)
class DenseMatrix:
    """Dense row-major real matrix; the quadratic-time code path and the
    oracles work on this type."""

    nrows: int
    ncols: int
    data: np.ndarray

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.float64)
        if data.shape != (self.nrows, self.ncols):
            raise InvalidArgs("data must be nrows x ncols")
        if not np.all(np.isfinite(data)):
            raise NonFiniteValue("entries must be finite")
        object.__setattr__(self, "data", data)
        data.setflags(write=False)

    @classmethod
    def from_array(cls, a) -> "DenseMatrix":
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2:
            raise InvalidArgs("expected a 2-d array")
        return cls(a.shape[0], a.shape[1], a)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return (
            self.nrows == other.nrows
            and self.ncols == other.ncols
            and np.array_equal(self.data, other.data)
        )


@dataclass(frozen=True)
class RowClass:
    """Per-row deficiency classification of a substochastic matrix.

    in_jhat[i] is True when the computed sum of row i is provably < 1 (that
    is, below 1 - tol); jhat_count is the number of such rows.
    """

    in_jhat: np.ndarray
    jhat_count: int

    def __post_init__(self):
        in_jhat = np.ascontiguousarray(self.in_jhat, dtype=bool)
        object.__setattr__(self, "in_jhat", in_jhat)
        in_jhat.setflags(write=False)
        if self.jhat_count != int(np.count_nonzero(in_jhat)):
            raise InvalidArgs("jhat_count does not match the mark array")


@dataclass(frozen=True)
class ContractionIndex:
    """Tagged index value: Finite(k) with k a nonnegative integer, or
    Infinite.

    A sentinel integer is deliberately avoided so the bound "Finite(k) implies
    k < order" stays checkable as an invariant rather than colliding with a
    magic number.
    """

    is_finite: bool
    value: Optional[int] = None

    def __post_init__(self):
        if self.is_finite:
            if self.value is None or self.value < 0:
                raise InvalidArgs("a finite index needs a nonnegative value")
        elif self.value is not None:
            raise InvalidArgs("an infinite index carries no value")

    @classmethod
    def finite(cls, k: int) -> "ContractionIndex":
        return cls(True, int(k))

    @classmethod
    def infinite(cls) -> "ContractionIndex":
        return cls(False, None)

    def __str__(self) -> str:
        return str(self.value) if self.is_finite else "infinite"


@dataclass(frozen=True)
class SubstochasticReport:
    """Result of validate_substochastic: ok, or the first offending row with
    the reason ("NegativeEntry" or "RowSumExceedsOne") and offending value."""

    ok: bool
    row: Optional[int] = None
    reason: Optional[str] = None
    detail: Optional[float] = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"row {self.row}: {self.reason} ({self.detail!r})"


def csr_from_triplets(nrows: int, ncols: int, triplets) -> CsrMatrix:
    """Build a CSR matrix from (row, col, value) triplets.

    Duplicate (row, col) pairs are summed in sorted order; entries that are
    exactly zero after summation are dropped.

    Raises
    ------
    IndexOutOfRange
        If any index falls outside [0, nrows) x [0, ncols).
    NonFiniteValue
        If any value is NaN or infinite.
    """
    triplets = list(triplets)
    if not triplets:
        return CsrMatrix(nrows, ncols, np.zeros(nrows + 1, np.int64),
                         np.zeros(0, np.int64), np.zeros(0, np.float64))
    rows = np.asarray([t[0] for t in triplets], dtype=np.int64)
    cols = np.asarray([t[1] for t in triplets], dtype=np.int64)
    vals = np.asarray([t[2] for t in triplets], dtype=np.float64)
    return _csr_from_arrays(nrows, ncols, rows, cols, vals)


def _csr_from_arrays(nrows, ncols, rows, cols, vals) -> CsrMatrix:
    if len(rows) and (rows.min() < 0 or rows.max() >= nrows
                      or cols.min() < 0 or cols.max() >= ncols):
        raise IndexOutOfRange("triplet index out of range")
    if not np.all(np.isfinite(vals)):
        raise NonFiniteValue("triplet values must be finite")
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    # group boundaries of equal (row, col); duplicates summed left to right
    new_group = np.empty(len(rows), dtype=bool)
    new_group[0] = True
    new_group[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
    starts = np.flatnonzero(new_group)
    sums = np.add.reduceat(vals, starts)
    rows, cols = rows[starts], cols[starts]
    keep = sums != 0.0
    rows, cols, sums = rows[keep], cols[keep], sums[keep]
    row_ptr = np.zeros(nrows + 1, np.int64)
    np.cumsum(np.bincount(rows, minlength=nrows), out=row_ptr[1:])
    return CsrMatrix(nrows, ncols, row_ptr, cols, sums)


def csr_from_dense(a) -> CsrMatrix:
    """CSR view of a dense array (or DenseMatrix); zeros are not stored."""
    if isinstance(a, DenseMatrix):
        a = a.data
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise InvalidArgs("expected a 2-d array")
    if not np.all(np.isfinite(a)):
        raise NonFiniteValue("entries must be finite")
    rows, cols = np.nonzero(a)
    row_ptr = np.zeros(a.shape[0] + 1, np.int64)
    np.cumsum(np.bincount(rows, minlength=a.shape[0]), out=row_ptr[1:])
    return CsrMatrix(a.shape[0], a.shape[1], row_ptr,
                     cols.astype(np.int64), a[rows, cols])


def validate_substochastic(B: CsrMatrix, tol_report=None) -> SubstochasticReport:
    """Check that B has nonnegative entries and row-sums at most one.

    Row sums are computed with compensated (Kahan) summation and compared
    against 1 + tol_report; tol_report defaults to the default classification
    tolerance for B's maximum row nnz.  Returns a report rather than raising;
    the report names the first offending row.
    """
    if tol_report is None:
        tol_report = default_tolerance(max(B.max_row_nnz(), 1)).tol
    else:
        tol_report = _as_tolerance(tol_report).tol
    neg_row = None
    if len(B.values):
        bad = np.flatnonzero(B.values < 0.0)
        if len(bad):
            k = bad[0]
            neg_row = int(np.searchsorted(B.row_ptr, k, side="right") - 1)
            neg_val = float(B.values[k])
    sums = _kernels.kahan_row_sums(B.row_ptr, B.values, B.nrows)
    over = np.flatnonzero(sums > 1.0 + tol_report)
    over_row = int(over[0]) if len(over) else None
    if neg_row is not None and (over_row is None or neg_row <= over_row):
        return SubstochasticReport(False, neg_row, "NegativeEntry", neg_val)
    if over_row is not None:
        return SubstochasticReport(False, over_row, "RowSumExceedsOne", float(sums[over_row]))
    return SubstochasticReport(True)


def classify_rows(B: CsrMatrix, tol, cutoff: int = PLAIN_SUMMATION_CUTOFF) -> RowClass:
    """Mark the rows of B whose row-sum is provably below one.

    Row i lands in the deficient set exactly when its computed sum is
    < 1 - tol.  Rows with at most `cutoff` stored entries are summed by plain
    left-to-right accumulation (forward error at most gamma_{nnz-1} times the
    sum); longer rows use Kahan compensated summation, whose error is about
    2*eps and independent of the row length.

    Parameters
    ----------
    B : CsrMatrix
        Should pass validate_substochastic; this is not re-checked here.
    tol : Tolerance or float
        Must exceed gamma_{nnz-1} for the largest plain-summed row.

    Raises
    ------
    ToleranceTooSmall
        If tol does not dominate the plain-summation error bound.
    OrderTooLargeForFloat
        If the matrix is so large that n*eps > 1 (the error analysis requires
        n*eps <= 1).
    """
    tol = _as_tolerance(tol)
    if max(B.nrows, B.ncols) * EPS > 1.0:
        raise OrderTooLargeForFloat("matrix order violates n*eps <= 1")
    if B.nrows == 0:
        return RowClass(np.zeros(0, dtype=bool), 0)
    row_nnz = np.diff(B.row_ptr)
    plain = row_nnz[row_nnz <= cutoff]
    max_plain = int(plain.max()) if len(plain) else 0
    if max_plain > 0 and tol.tol <= gamma(max_plain - 1):
        raise ToleranceTooSmall(
            f"tol={tol.tol!r} does not exceed gamma_{max_plain - 1}="
            f"{gamma(max_plain - 1)!r} for a {max_plain}-entry row")
    sums = _kernels.classify_row_sums(B.row_ptr, B.values, B.nrows, cutoff)
    in_jhat = sums < 1.0 - tol.tol
    return RowClass(in_jhat, int(np.count_nonzero(in_jhat)))


def graph_edges(B: CsrMatrix, row: int) -> Iterator[int]:
    """Stored-column indices of a row, viewing B as its digraph.

    A rectangular matrix is implicitly zero-padded to the smallest enclosing
    square: rows at or beyond nrows exist but have no edges.
    """
    if not (0 <= row < max(B.nrows, B.ncols)):
        raise IndexOutOfRange(f"row {row} outside the padded square")
    if row >= B.nrows:
        return iter(())
    cols, _ = B.row(row)
    return iter(int(c) for c in cols)
