"""Matrix Market text I/O.

Covers the slice of the exchange format the tool needs: coordinate and array
formats, real and integer fields, general and symmetric storage.  Pattern and
complex files are rejected up front.  Indices are 1-based on disk and 0-based
in memory; the conversion happens here and nowhere else.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .errors import IndexOutOfRange, IoError, ParseError, UnsupportedHeader
from .matcore import CsrMatrix, csr_from_triplets

_FORMATS = ("coordinate", "array")
_FIELDS = ("real", "integer")
_SYMMETRIES = ("general", "symmetric")


@dataclass(frozen=True)
class MatrixMarketHeader:
    """Parsed banner line; only matrix objects in the combinations above."""

    format: str
    field: str
    symmetry: str

    def __post_init__(self):
        if self.format not in _FORMATS:
            raise UnsupportedHeader(f"unsupported format {self.format!r}")
        if self.field not in _FIELDS:
            raise UnsupportedHeader(f"unsupported field {self.field!r}")
        if self.symmetry not in _SYMMETRIES:
            raise UnsupportedHeader(f"unsupported symmetry {self.symmetry!r}")


def _parse_banner(line: str) -> MatrixMarketHeader:
    tokens = line.strip().split()
    if not tokens or not tokens[0].lower().startswith("%%matrixmarket"):
        raise ParseError(1, "missing %%MatrixMarket banner")
    if len(tokens) != 5:
        raise ParseError(1, "banner must have 5 fields")
    if tokens[1].lower() != "matrix":
        raise UnsupportedHeader(f"unsupported object {tokens[1]!r}")
    return MatrixMarketHeader(tokens[2].lower(), tokens[3].lower(), tokens[4].lower())


def _read_text(source) -> str:
    if isinstance(source, (str, os.PathLike)):
        try:
            with open(source, "r", encoding="utf-8") as fh:
                return fh.read()
        except OSError as e:
            raise IoError(str(e)) from e
    data = source if isinstance(source, bytes) else source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(0, f"not valid UTF-8: {e}") from e
    return data


def _parse_value(token: str, field: str, lineno: int) -> float:
    try:
        v = float(token) if field == "real" else float(int(token))
    except ValueError:
        raise ParseError(lineno, f"bad {field} value {token!r}") from None
    if not math.isfinite(v):
        raise ParseError(lineno, f"non-finite value {token!r}")
    return v


def read_matrix_market(source) -> CsrMatrix:
    """Read a Matrix Market file (path or open text/byte stream).

    Duplicate coordinate entries are summed and exact zeros dropped, matching
    the triplet constructor.  Symmetric storage must keep to the lower
    triangle and is expanded to general form on the spot.

    Raises
    ------
    ParseError, UnsupportedHeader, IndexOutOfRange, IoError
    """
    lines = _read_text(source).splitlines()
    if not lines:
        raise ParseError(1, "empty file")
    header = _parse_banner(lines[0])

    # (lineno, tokens) for every line that is neither comment nor blank
    content = [(ln, s.split()) for ln, s in enumerate(lines[1:], start=2)
               if s.strip() and not s.lstrip().startswith("%")]
    if not content:
        raise ParseError(len(lines) + 1, "missing size line")
    size_ln, size_tok = content[0]
    body = content[1:]

    if header.format == "coordinate":
        if len(size_tok) != 3:
            raise ParseError(size_ln, "coordinate size line needs 3 fields")
        try:
            nrows, ncols, count = (int(t) for t in size_tok)
        except ValueError:
            raise ParseError(size_ln, "bad size line") from None
        if nrows < 0 or ncols < 0 or count < 0:
            raise ParseError(size_ln, "negative size")
        if header.symmetry == "symmetric" and nrows != ncols:
            raise ParseError(size_ln, "symmetric matrix must be square")
        return _read_coordinate(header, nrows, ncols, count, body, len(lines))

    if len(size_tok) != 2:
        raise ParseError(size_ln, "array size line needs 2 fields")
    try:
        nrows, ncols = (int(t) for t in size_tok)
    except ValueError:
        raise ParseError(size_ln, "bad size line") from None
    if nrows < 0 or ncols < 0:
        raise ParseError(size_ln, "negative size")
    if header.symmetry == "symmetric" and nrows != ncols:
        raise ParseError(size_ln, "symmetric array must be square")
    return _read_array(header, nrows, ncols, body, len(lines))


def _read_coordinate(header, nrows, ncols, count, body, nlines) -> CsrMatrix:
    triplets = []
    seen = 0
    for ln, tok in body:
        if seen == count:
            raise ParseError(ln, "unexpected content after all entries")
        if len(tok) != 3:
            raise ParseError(ln, "coordinate entry needs 3 fields")
        try:
            r, c = int(tok[0]), int(tok[1])
        except ValueError:
            raise ParseError(ln, "bad entry indices") from None
        if not (1 <= r <= nrows and 1 <= c <= ncols):
            raise IndexOutOfRange(
                f"line {ln}: entry ({r}, {c}) outside {nrows}x{ncols}")
        v = _parse_value(tok[2], header.field, ln)
        if header.symmetry == "symmetric" and r < c:
            raise ParseError(ln, "symmetric entry above the diagonal")
        triplets.append((r - 1, c - 1, v))
        if header.symmetry == "symmetric" and r != c:
            triplets.append((c - 1, r - 1, v))
        seen += 1
    if seen < count:
        raise ParseError(nlines + 1, f"expected {count} entries, found {seen}")
    return csr_from_triplets(nrows, ncols, triplets)


def _array_positions(header, nrows, ncols):
    # column-major, lower triangle only when symmetric
    if header.symmetry == "symmetric":
        for j in range(ncols):
            for i in range(j, nrows):
                yield i, j
    else:
        for j in range(ncols):
            for i in range(nrows):
                yield i, j


def _read_array(header, nrows, ncols, body, nlines) -> CsrMatrix:
    positions = _array_positions(header, nrows, ncols)
    triplets = []
    for ln, tok in body:
        for t in tok:
            try:
                i, j = next(positions)
            except StopIteration:
                raise ParseError(ln, "more values than the size line admits") from None
            v = _parse_value(t, header.field, ln)
            if v != 0.0:
                triplets.append((i, j, v))
                if header.symmetry == "symmetric" and i != j:
                    triplets.append((j, i, v))
    try:
        next(positions)
    except StopIteration:
        return csr_from_triplets(nrows, ncols, triplets)
    raise ParseError(nlines + 1, "fewer values than the size line admits")


def write_matrix_market(M: CsrMatrix, sink) -> bool:
    """Write M as coordinate/real/general text, row-major, 1-indexed.

    Values are printed with 17 significant digits, so reading the file back
    reproduces the matrix bit for bit.
    """
    rows, cols, vals = M.triplets()
    out = [f"%%MatrixMarket matrix coordinate real general\n",
           f"{M.nrows} {M.ncols} {M.nnz}\n"]
    for r, c, v in zip(rows, cols, vals):
        out.append(f"{r + 1} {c + 1} {v:.17g}\n")
    text = "".join(out)
    if isinstance(sink, (str, os.PathLike)):
        try:
            with open(sink, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as e:
            raise IoError(str(e)) from e
        return True
    try:
        sink.write(text)
    except OSError as e:
        raise IoError(str(e)) from e
    return True
