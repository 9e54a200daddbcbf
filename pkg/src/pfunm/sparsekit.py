"""Small sparse/banded toolkit.

CSR matrices are scipy's; this module adds the pieces the rest of the
package needs on top of them: band extraction into LAPACK-layout storage,
banded LU with partial pivoting (gbtrf/gbtrs), a fill-in measure for
factor pairs, and a couple of thin CSR helpers with shape checks.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.linalg import get_lapack_funcs

from .exceptions import SingularMatrixError
from .validation import as_csr, require_square

__all__ = [
    "BandedMatrix",
    "band_extract",
    "BandedLU",
    "banded_lu",
    "banded_solve",
    "matvec",
    "transpose",
    "fill_in",
]


@dataclass
class BandedMatrix:
    """Square banded matrix in LAPACK band storage.

    ``data`` has shape (kl+ku+1, n) and ``data[ku + i - j, j] == A[i, j]``
    for ``-ku <= i - j <= kl``; entries outside the band are structurally
    zero. ``n`` is the matrix order.
    """

    n: int
    kl: int
    ku: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        expected = (self.kl + self.ku + 1, self.n)
        if self.data.shape != expected:
            raise ValueError(
                f"band storage shape {self.data.shape} does not match "
                f"(kl+ku+1, n) = {expected}"
            )

    @property
    def dtype(self):
        return self.data.dtype

    @classmethod
    def zeros(cls, n, kl, ku, dtype=np.float64):
        return cls(n, kl, ku, np.zeros((kl + ku + 1, n), dtype=dtype))

    @classmethod
    def from_csr(cls, A, kl=None, ku=None):
        """Pack a CSR matrix into band storage.

        Bandwidths default to the smallest that hold every stored entry.
        Entries outside explicitly requested bandwidths raise ValueError.
        """
        A = as_csr(A)
        n = require_square(A)
        coo = A.tocoo()
        off = coo.row - coo.col
        lo = int(max(off.max(initial=0), 0))
        hi = int(max((-off).max(initial=0), 0))
        if kl is None:
            kl = lo
        if ku is None:
            ku = hi
        if lo > kl or hi > ku:
            raise ValueError(
                f"matrix has bandwidths ({lo}, {hi}), larger than requested "
                f"({kl}, {ku})"
            )
        B = cls.zeros(n, kl, ku, dtype=A.dtype)
        B.data[ku + off, coo.col] = coo.data
        return B

    @classmethod
    def from_dense(cls, A, kl=None, ku=None):
        return cls.from_csr(sp.csr_matrix(np.asarray(A)), kl=kl, ku=ku)

    @classmethod
    def identity(cls, n, dtype=np.float64):
        B = cls.zeros(n, 0, 0, dtype=dtype)
        B.data[0, :] = 1.0
        return B

    def to_csr(self):
        rows, cols, vals = [], [], []
        for d in range(-self.ku, self.kl + 1):
            j0 = max(0, -d)
            j1 = min(self.n, self.n - d)
            j = np.arange(j0, j1)
            rows.append(j + d)
            cols.append(j)
            vals.append(self.data[self.ku + d, j])
        M = sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.n, self.n),
        )
        M.sum_duplicates()
        M.sort_indices()
        return M

    def to_dense(self):
        return self.to_csr().toarray()

    def matvec(self, x):
        x = np.asarray(x)
        y = np.zeros(self.n, dtype=np.result_type(self.dtype, x.dtype))
        for d in range(-self.ku, self.kl + 1):
            j0 = max(0, -d)
            j1 = min(self.n, self.n - d)
            j = np.arange(j0, j1)
            y[j + d] += self.data[self.ku + d, j] * x[j]
        return y

    def diagonal(self):
        return self.data[self.ku, :].copy()

    def astype(self, dtype):
        return BandedMatrix(self.n, self.kl, self.ku, self.data.astype(dtype))

    def scaled(self, s):
        return BandedMatrix(self.n, self.kl, self.ku, self.data * s)

    def add_diagonal(self, d):
        """Return self + diag(d) (d scalar or length-n vector)."""
        out = self.data.astype(np.result_type(self.dtype, np.asarray(d).dtype))
        out = out.copy()
        out[self.ku, :] = out[self.ku, :] + d
        return BandedMatrix(self.n, self.kl, self.ku, out)


def band_extract(A, m):
    """Extract the band |i - j| <= m of a CSR matrix into a BandedMatrix."""
    A = as_csr(A)
    n = require_square(A)
    if m < 0:
        raise ValueError("bandwidth m must be >= 0")
    m = min(m, n - 1)
    coo = A.tocoo()
    keep = np.abs(coo.row - coo.col) <= m
    B = BandedMatrix.zeros(n, m, m, dtype=A.dtype)
    np.add.at(B.data, (m + coo.row[keep] - coo.col[keep], coo.col[keep]), coo.data[keep])
    return B


class BandedLU:
    """LU factorization of a BandedMatrix with partial pivoting (gbtrf)."""

    def __init__(self, B):
        if not isinstance(B, BandedMatrix):
            raise TypeError("BandedLU expects a BandedMatrix")
        self.n = B.n
        self.kl = B.kl
        self.ku = B.ku
        # gbtrf wants kl extra superdiagonal rows of workspace on top.
        ab = np.zeros((2 * B.kl + B.ku + 1, B.n), dtype=B.dtype, order="F")
        ab[B.kl:, :] = B.data
        gbtrf, = get_lapack_funcs(("gbtrf",), (ab,))
        lu, ipiv, info = gbtrf(ab, B.kl, B.ku)
        if info < 0:
            raise ValueError(f"illegal argument {-info} to gbtrf")
        if info > 0:
            raise SingularMatrixError(
                f"banded matrix is singular: zero pivot at index {info - 1}",
                index=info - 1,
            )
        self._lu = lu
        self._ipiv = ipiv
        self._gbtrs, = get_lapack_funcs(("gbtrs",), (lu,))

    def solve(self, b, trans=0):
        b = np.asarray(b)
        squeeze = b.ndim == 1
        B = b.reshape(self.n, -1)
        if np.iscomplexobj(B) and not np.iscomplexobj(self._lu):
            x_re, info = self._gbtrs(self._lu, self.kl, self.ku, B.real.copy(order="F"),
                                     self._ipiv, trans=trans)
            x_im, info2 = self._gbtrs(self._lu, self.kl, self.ku, B.imag.copy(order="F"),
                                      self._ipiv, trans=trans)
            info = info or info2
            x = x_re + 1j * x_im
        else:
            x, info = self._gbtrs(self._lu, self.kl, self.ku,
                                  np.asfortranarray(B, dtype=self._lu.dtype),
                                  self._ipiv, trans=trans)
        if info != 0:
            raise ValueError(f"gbtrs failed with info = {info}")
        return x[:, 0] if squeeze else x


def banded_lu(B):
    return BandedLU(B)


def banded_solve(B, b):
    """Solve B x = b for a BandedMatrix B (factor once, solve once)."""
    return BandedLU(B).solve(b)


def matvec(A, x):
    """CSR matrix-vector product with a shape check."""
    A = as_csr(A)
    x = np.asarray(x)
    if x.shape[0] != A.shape[1]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, x has length {x.shape[0]}")
    return A @ x


def transpose(A, conjugate=False):
    """Sorted-CSR (conjugate) transpose."""
    A = as_csr(A)
    T = A.conj().T if conjugate else A.T
    T = T.tocsr()
    T.sort_indices()
    return T


def fill_in(Z, W, n=None):
    """Fill-in ratio of an inverse-factor pair: (nnz(Z) + nnz(W) - n) / n^2.

    The shared unit diagonal is stored explicitly in both factors, so it is
    counted once. When Z and W are the same object (Hermitian case) the
    formula is unchanged: the pair still represents two factors.
    """
    if n is None:
        n = Z.shape[0]
    return (Z.nnz + W.nnz - n) / float(n) ** 2
