"""Approximate inverse factorizations used as seed preconditioners.

Two routes produce the factored approximate inverse
``P0 = Z * inv(diag(d)) * W^H`` of a (possibly shifted) matrix:

* AINV: two-sided biconjugation with dropping. Columns of Z and W are
  built by an outer-product (right-looking) sweep; after each column
  update, entries below an absolute threshold are discarded. When the
  input is exactly Hermitian only the Z sweep runs and W is Z.
* INVT: ILUT (row-wise incomplete LDU with a row-relative drop rule,
  no fill cap) followed by exact column-wise inversion of each unit
  triangular factor with absolute post-sparsification.

Both store unit triangular factors with the unit diagonal explicitly
present in the CSR data (values exactly 1): Z and W are unit upper
triangular, and ILUT's L and U are unit lower triangular with the
factorization reading ``A ~ L * diag(d) * U^H``.

A seed built at shift ``xi0`` factors ``xi0*I - A`` (so ``xi0 = 0``
factors ``-A``); the stored ``shift_of_seed`` and the minus sign
convention make the shifted identity
``inv(xi*I - A) = Z * inv(D + (xi - xi0)*E) * W^H`` (E = W^H Z) hold
without sign juggling downstream.
"""

import heapq
import json
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
import scipy.linalg

from .exceptions import BreakdownError
from .mmio import read_matrix_market, write_matrix_market
from .sparsekit import fill_in
from .validation import as_csr, require_square

__all__ = [
    "IlutFactors",
    "InverseFactors",
    "ilut",
    "invert_sparsify_triangular",
    "ainv",
    "seed_preconditioner",
    "save_factors",
    "load_factors",
]


@dataclass
class IlutFactors:
    """Incomplete LDU data: A ~ L * diag(d) * U^H, L and U unit lower."""

    L: sp.csr_matrix = field(repr=False)
    d: np.ndarray = field(repr=False)
    U: sp.csr_matrix = field(repr=False)
    drop_tol_used: float = 0.0

    @property
    def n(self):
        return len(self.d)


@dataclass
class InverseFactors:
    """Factored approximate inverse P0 = Z inv(diag(d)) W^H.

    ``shift_of_seed`` is the xi0 at which the seed was built: the factors
    approximate inv(xi0*I - A) (xi0 = 0 means inv(-A)), recorded by
    ``sign_convention = "minus"``.
    """

    Z: sp.csr_matrix = field(repr=False)
    d: np.ndarray = field(repr=False)
    W: sp.csr_matrix = field(repr=False)
    shift_of_seed: complex = 0.0
    sign_convention: str = "minus"
    method: str = ""
    drop_tols: tuple = ()

    @property
    def n(self):
        return len(self.d)

    @property
    def hermitian_pair(self):
        return self.Z is self.W

    @property
    def fill_in(self):
        return fill_in(self.Z, self.W, self.n)

    def apply(self, v):
        """P0 @ v, i.e. approximately inv(shift*I - A) @ v."""
        return self.Z @ ((self.W.conj().T @ v) / self.d)


# ----------------------------------------------------------------------
# ILUT


def ilut(A, tau_l):
    """Row-wise incomplete LDU factorization with relative dropping.

    In each row, computed entries (multipliers and fill) whose magnitude
    falls below ``tau_l`` times the infinity norm of that row of A are
    dropped; there is no fill-count cap. With ``tau_l = 0`` the
    factorization is exact up to roundoff for breakdown-free matrices.
    """
    A = as_csr(A)
    n = require_square(A)
    if tau_l < 0:
        raise ValueError("tau_l must be >= 0")
    indptr, indices, data = A.indptr, A.indices, A.data
    dtype = A.dtype

    d = np.zeros(n, dtype=dtype)
    u_idx = [None] * n   # strictly-upper column indices of U_classic row k
    u_val = [None] * n   # matching values (unscaled: row k of A eliminated)
    l_entries = []       # (i, k, multiplier) strictly-lower entries of L

    for i in range(n):
        lo, hi = indptr[i], indptr[i + 1]
        cols = indices[lo:hi]
        vals = data[lo:hi]
        if len(cols) == 0:
            raise BreakdownError(f"zero pivot in row {i} (empty row)", index=i)
        thresh = tau_l * np.max(np.abs(vals))
        w = dict(zip(cols.tolist(), vals.tolist()))

        heap = [c for c in w if c < i]
        heapq.heapify(heap)
        while heap:
            k = heapq.heappop(heap)
            wk = w.pop(k)
            mult = wk / d[k]
            if abs(mult) < thresh:
                continue
            l_entries.append((i, k, mult))
            for c, uv in zip(u_idx[k], u_val[k]):
                if c in w:
                    w[c] -= mult * uv
                else:
                    w[c] = -mult * uv
                    if c < i:
                        heapq.heappush(heap, c)

        dv = w.pop(i, None)
        if dv is None or dv == 0:
            raise BreakdownError(f"zero pivot in row {i}", index=i)
        d[i] = dv
        kept = sorted((c, v) for c, v in w.items() if abs(v) >= thresh)
        u_idx[i] = [c for c, _ in kept]
        u_val[i] = [v for _, v in kept]

    # L: unit lower with explicit diagonal.
    li = np.fromiter((e[0] for e in l_entries), dtype=np.int64, count=len(l_entries))
    lk = np.fromiter((e[1] for e in l_entries), dtype=np.int64, count=len(l_entries))
    lv = np.array([e[2] for e in l_entries], dtype=dtype)
    eye_r = np.arange(n, dtype=np.int64)
    ones = np.ones(n, dtype=dtype)
    L = sp.coo_matrix(
        (np.concatenate([lv, ones]), (np.concatenate([li, eye_r]),
                                      np.concatenate([lk, eye_r]))),
        shape=(n, n)).tocsr()
    L.sort_indices()

    # Stored U is (inv(diag(d)) * U_classic)^H: unit lower, U[j, k] = conj(u_kj / d_k).
    ur, uc, uv = [], [], []
    for k in range(n):
        for c, v in zip(u_idx[k], u_val[k]):
            ur.append(c)
            uc.append(k)
            uv.append(np.conj(v / d[k]))
    U = sp.coo_matrix(
        (np.concatenate([np.asarray(uv, dtype=dtype), ones]),
         (np.concatenate([np.asarray(ur, dtype=np.int64), eye_r]),
          np.concatenate([np.asarray(uc, dtype=np.int64), eye_r]))),
        shape=(n, n)).tocsr()
    U.sort_indices()
    return IlutFactors(L=L, d=d, U=U, drop_tol_used=tau_l)


# ----------------------------------------------------------------------
# triangular inversion with post-sparsification


def _triangular_orientation(T):
    coo = T.tocoo()
    strict_lower = np.count_nonzero(coo.row > coo.col)
    strict_upper = np.count_nonzero(coo.row < coo.col)
    if strict_lower and strict_upper:
        raise ValueError("matrix is not triangular")
    return "lower" if strict_upper == 0 else "upper"


def invert_sparsify_triangular(T, tau_z, block=512, band_cap=64, dense_cap=4096):
    """Invert a unit triangular CSR matrix, dropping small entries.

    Columns of the exact inverse are computed independently (banded or
    dense triangular solves on identity blocks, falling back to sparse
    back-substitution for very large unbanded inputs); after each column,
    entries with ``|value| < tau_z`` are dropped. The unit diagonal is
    never dropped; the result keeps the input's orientation.
    """
    T = as_csr(T)
    n = require_square(T)
    if tau_z < 0:
        raise ValueError("tau_z must be >= 0")
    lower = _triangular_orientation(T) == "lower"
    diag = T.diagonal()
    if not np.all(diag == 1):
        raise ValueError("expected a unit triangular matrix (diagonal exactly 1)")

    work = T if lower else transpose_csr(T)
    # ``work`` is unit lower; invert it, then transpose back if needed.
    coo = work.tocoo()
    bw = int((coo.row - coo.col).max(initial=0))

    cols_out, rows_out, vals_out = [], [], []

    def keep_block(X, j0):
        # X holds columns j0:j0+X.shape[1] of the inverse (unit lower).
        for local in range(X.shape[1]):
            j = j0 + local
            col = X[:, local]
            idx = np.nonzero(np.abs(col) >= tau_z)[0]
            idx = idx[idx >= j]
            if j not in idx:
                idx = np.concatenate([[j], idx])
            rows_out.append(idx)
            cols_out.append(np.full(len(idx), j, dtype=np.int64))
            vals_out.append(col[idx].copy())
            vals_out[-1][idx == j] = 1.0

    if bw <= band_cap:
        ab = np.zeros((bw + 1, n), dtype=work.dtype)
        ab[coo.row - coo.col, coo.col] = coo.data
        for j0 in range(0, n, block):
            j1 = min(j0 + block, n)
            rhs = np.zeros((n, j1 - j0), dtype=work.dtype)
            rhs[np.arange(j0, j1), np.arange(j1 - j0)] = 1.0
            X = scipy.linalg.solve_banded((bw, 0), ab, rhs)
            keep_block(X, j0)
    elif n <= dense_cap:
        dense = work.toarray()
        for j0 in range(0, n, block):
            j1 = min(j0 + block, n)
            rhs = np.zeros((n, j1 - j0), dtype=work.dtype)
            rhs[np.arange(j0, j1), np.arange(j1 - j0)] = 1.0
            X = scipy.linalg.solve_triangular(dense, rhs, lower=True,
                                              unit_diagonal=True)
            keep_block(X, j0)
    else:
        csc = work.tocsc()
        for j in range(n):
            x = np.zeros(n, dtype=work.dtype)
            x[j] = 1.0
            for k in range(j, n):
                xk = x[k]
                if xk == 0:
                    continue
                seg = slice(csc.indptr[k], csc.indptr[k + 1])
                rows = csc.indices[seg]
                vals = csc.data[seg]
                below = rows > k
                x[rows[below]] -= xk * vals[below]
            keep_block(x.reshape(n, 1), j)

    inv = sp.coo_matrix(
        (np.concatenate(vals_out),
         (np.concatenate(rows_out), np.concatenate(cols_out))),
        shape=(n, n)).tocsr()
    inv.sort_indices()
    return inv if lower else transpose_csr(inv)


def transpose_csr(T):
    out = T.T.tocsr()
    out.sort_indices()
    return out


# ----------------------------------------------------------------------
# AINV biconjugation


def _is_hermitian(A):
    if A.shape[0] != A.shape[1]:
        return False
    diff = A - A.conj().T.tocsr()
    return diff.nnz == 0 or np.max(np.abs(diff.data)) == 0.0


def ainv(A, tau, workspace_cap=8000):
    """Two-sided biconjugation with dropping: W^H A Z = diag(d).

    Builds unit upper triangular Z, W column by column; at step i every
    later column is orthogonalized (in the A-inner-product sense) against
    column i, and entries below the absolute threshold ``tau`` are
    dropped right after each update. Exactly Hermitian input runs a
    single sweep with W = Z. The working set is dense (n x n), fine for
    the desk scales this package targets; ``workspace_cap`` guards
    against accidental huge allocations.
    """
    A = as_csr(A)
    n = require_square(A)
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if n > workspace_cap:
        raise ValueError(
            f"ainv uses a dense working set; n = {n} exceeds "
            f"workspace_cap = {workspace_cap} (use method='invt' instead)")
    hermitian = _is_hermitian(A)
    dtype = A.dtype

    Z = np.eye(n, dtype=dtype)
    W = Z if hermitian else np.eye(n, dtype=dtype)
    AT = None if hermitian else A.T.tocsr()
    d = np.zeros(n, dtype=dtype)

    for i in range(n):
        Az = A @ Z[:, i]
        di = np.vdot(W[:, i], Az)  # w_i^H A z_i
        if di == 0 or not np.isfinite(abs(di)):
            raise BreakdownError(f"biconjugation breakdown at column {i}",
                                 index=i)
        d[i] = di
        if i == n - 1:
            break
        tail = slice(i + 1, n)
        if hermitian:
            p = np.conj(Az) @ Z[:, tail]  # z_j^H A z_i conjugated = w_i^H A z_j
            Z[:, tail] -= np.outer(Z[:, i], p / di)
            block = Z[:, tail]
            block[np.abs(block) < tau] = 0.0
        else:
            s = AT @ np.conj(W[:, i])      # (w_i^H A)^T
            p = s @ Z[:, tail]             # w_i^H A z_j
            q = np.conj(Az) @ W[:, tail]   # conj(w_j^H A z_i)
            Z[:, tail] -= np.outer(Z[:, i], p / di)
            W[:, tail] -= np.outer(W[:, i], q / np.conj(di))
            for block in (Z[:, tail], W[:, tail]):
                block[np.abs(block) < tau] = 0.0

    np.fill_diagonal(Z, 1.0)
    if not hermitian:
        np.fill_diagonal(W, 1.0)
    Zc = sp.csr_matrix(Z)
    Zc.sort_indices()
    if hermitian:
        Wc = Zc
    else:
        Wc = sp.csr_matrix(W)
        Wc.sort_indices()
    return InverseFactors(Z=Zc, d=d, W=Wc, shift_of_seed=0.0,
                          sign_convention="plus", method="ainv",
                          drop_tols=(tau,))


# ----------------------------------------------------------------------
# seed pipeline


def seed_preconditioner(A, method="ainv", tau=0.1, tau_l=1e-3, tau_z=1e-3,
                        seed_shift=0.0):
    """Factored approximate inverse of ``seed_shift*I - A``.

    ``seed_shift = 0`` factors ``-A`` (the common case: one seed reused
    for every pole of an expansion). The AINV route requires a real
    shift so the factorization stays in real arithmetic for real input;
    the INVT route accepts complex shifts.
    """
    A = as_csr(A)
    n = require_square(A)
    if method not in ("ainv", "invt"):
        raise ValueError(f"unknown method {method!r}; use 'ainv' or 'invt'")
    shift = complex(seed_shift)
    if method == "ainv" and shift.imag != 0.0:
        raise ValueError(
            "ainv seeds require a real (or zero) seed_shift; "
            "use method='invt' for complex poles")
    if shift.imag == 0.0:
        shift = shift.real

    M = (sp.identity(n, dtype=A.dtype, format="csr") * shift - A).tocsr() \
        if shift != 0 else (-A).tocsr()
    M.sort_indices()

    if method == "ainv":
        F = ainv(M, tau)
        return replace(F, shift_of_seed=shift, sign_convention="minus",
                       method="ainv", drop_tols=(tau,))

    fac = ilut(M, tau_l)
    Z = transpose_csr(invert_sparsify_triangular(fac.U, tau_z).conj())
    W = transpose_csr(invert_sparsify_triangular(fac.L, tau_z).conj())
    return InverseFactors(Z=Z, d=fac.d, W=W, shift_of_seed=shift,
                          sign_convention="minus", method="invt",
                          drop_tols=(tau_l, tau_z))


# ----------------------------------------------------------------------
# fixture serialization


def save_factors(prefix, F):
    """Write factors as Matrix Market triples plus a JSON sidecar."""
    write_matrix_market(f"{prefix}.z.mtx", F.Z)
    write_matrix_market(f"{prefix}.d.mtx", sp.diags(F.d).tocoo())
    write_matrix_market(f"{prefix}.w.mtx", F.W)
    shift = complex(F.shift_of_seed)
    meta = {
        "shift_of_seed": [shift.real, shift.imag],
        "sign_convention": F.sign_convention,
        "method": F.method,
        "drop_tols": list(F.drop_tols),
    }
    with open(f"{prefix}.meta.json", "w") as fh:
        json.dump(meta, fh, indent=1)


def load_factors(prefix):
    Z = read_matrix_market(f"{prefix}.z.mtx")
    D = read_matrix_market(f"{prefix}.d.mtx")
    W = read_matrix_market(f"{prefix}.w.mtx")
    with open(f"{prefix}.meta.json") as fh:
        meta = json.load(fh)
    sre, sim = meta["shift_of_seed"]
    shift = complex(sre, sim)
    if shift.imag == 0.0:
        shift = shift.real
    return InverseFactors(Z=Z, d=D.diagonal(), W=W, shift_of_seed=shift,
                          sign_convention=meta["sign_convention"],
                          method=meta["method"],
                          drop_tols=tuple(meta["drop_tols"]))
