"""Matrix Market coordinate I/O.

Reads and writes the plain-text coordinate format: a banner line, optional
%-comments, a size line ``m n nnz`` and one entry per line with 1-based
indices. Real, integer and complex fields are supported with general,
symmetric and hermitian symmetries; pattern and skew-symmetric files are
rejected. Duplicate entries are summed. Values are written with 17
significant digits, enough to round-trip float64 exactly.
"""

import numpy as np
import scipy.sparse as sp

from .exceptions import FormatError

__all__ = ["read_matrix_market", "write_matrix_market"]

_FIELDS = {"real", "integer", "complex"}
_SYMMETRIES = {"general", "symmetric", "hermitian"}


def read_matrix_market(path):
    """Parse a Matrix Market coordinate file into canonical CSR."""
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        banner = fh.readline()
        if not banner:
            raise FormatError("empty file", line=1)
        parts = banner.strip().split()
        if len(parts) != 5 or parts[0] != "%%MatrixMarket":
            raise FormatError(f"bad banner: {banner.strip()!r}", line=1)
        _, obj, fmt, field, symmetry = (p.lower() for p in parts)
        if obj != "matrix" or fmt != "coordinate":
            raise FormatError(
                f"only 'matrix coordinate' files are supported, got "
                f"'{obj} {fmt}'", line=1)
        if field not in _FIELDS:
            raise FormatError(f"unsupported field {field!r}", line=1)
        if symmetry not in _SYMMETRIES:
            raise FormatError(f"unsupported symmetry {symmetry!r}", line=1)

        lineno = 1
        size = None
        while size is None:
            raw = fh.readline()
            lineno += 1
            if not raw:
                raise FormatError("missing size line", line=lineno)
            stripped = raw.strip()
            if not stripped or stripped.startswith("%"):
                continue
            toks = stripped.split()
            if len(toks) != 3:
                raise FormatError(f"bad size line: {stripped!r}", line=lineno)
            try:
                size = tuple(int(t) for t in toks)
            except ValueError:
                raise FormatError(f"bad size line: {stripped!r}", line=lineno)
        m, n, nnz = size
        if m < 0 or n < 0 or nnz < 0:
            raise FormatError("negative dimension in size line", line=lineno)

        want = 4 if field == "complex" else 3
        rows = np.empty(nnz, dtype=np.int64)
        cols = np.empty(nnz, dtype=np.int64)
        vals = np.empty(nnz, dtype=np.complex128 if field == "complex" else np.float64)
        k = 0
        for raw in fh:
            lineno += 1
            stripped = raw.strip()
            if not stripped or stripped.startswith("%"):
                continue
            if k >= nnz:
                raise FormatError(
                    f"more than the declared {nnz} entries", line=lineno)
            toks = stripped.split()
            if len(toks) != want:
                raise FormatError(
                    f"expected {want} tokens, got {len(toks)}", line=lineno)
            try:
                i = int(toks[0])
                j = int(toks[1])
                if field == "complex":
                    v = complex(float(toks[2]), float(toks[3]))
                else:
                    v = float(toks[2])
            except ValueError:
                raise FormatError(f"bad entry: {stripped!r}", line=lineno)
            if not (1 <= i <= m) or not (1 <= j <= n):
                raise FormatError(
                    f"index ({i}, {j}) outside 1-based bounds "
                    f"({m}, {n})", line=lineno)
            rows[k] = i - 1
            cols[k] = j - 1
            vals[k] = v
            k += 1
        if k != nnz:
            raise FormatError(
                f"declared {nnz} entries but found {k}", line=lineno + 1)

    if symmetry in ("symmetric", "hermitian"):
        if m != n:
            raise FormatError(f"{symmetry} matrix must be square", line=2)
        off = rows != cols
        extra_vals = vals[off]
        if symmetry == "hermitian":
            extra_vals = np.conj(extra_vals)
        r0, c0 = rows, cols
        rows = np.concatenate([r0, c0[off]])
        cols = np.concatenate([c0, r0[off]])
        vals = np.concatenate([vals, extra_vals])

    A = sp.coo_matrix((vals, (rows, cols)), shape=(m, n)).tocsr()
    A.sum_duplicates()
    A.sort_indices()
    return A


def _fmt(x):
    return f"{x:.17g}"


def write_matrix_market(path, A, symmetry="general", comment=None):
    """Write a sparse matrix in coordinate format.

    ``symmetry='symmetric'`` (or ``'hermitian'``) stores only the lower
    triangle and requires the matrix to actually have that symmetry.
    """
    if symmetry not in _SYMMETRIES:
        raise ValueError(f"unsupported symmetry {symmetry!r}")
    A = sp.coo_matrix(A)
    complex_field = np.iscomplexobj(A.data)
    field = "complex" if complex_field else "real"

    rows, cols, vals = A.row, A.col, A.data
    if symmetry != "general":
        if A.shape[0] != A.shape[1]:
            raise ValueError(f"{symmetry} output requires a square matrix")
        Ac = A.tocsr()
        other = Ac.conj().T if symmetry == "hermitian" else Ac.T
        mismatch = abs(Ac - other.tocsr()).max()
        if mismatch > 0:
            raise ValueError(
                f"matrix is not {symmetry} (max asymmetry {mismatch:.3g})")
        keep = rows >= cols
        rows, cols, vals = rows[keep], cols[keep], vals[keep]

    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]

    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"%%MatrixMarket matrix coordinate {field} {symmetry}\n")
        if comment:
            for line in str(comment).splitlines():
                fh.write(f"% {line}\n")
        fh.write(f"{A.shape[0]} {A.shape[1]} {len(vals)}\n")
        if complex_field:
            for i, j, v in zip(rows, cols, vals):
                fh.write(f"{i + 1} {j + 1} {_fmt(v.real)} {_fmt(v.imag)}\n")
        else:
            for i, j, v in zip(rows, cols, vals):
                fh.write(f"{i + 1} {j + 1} {_fmt(v)}\n")
