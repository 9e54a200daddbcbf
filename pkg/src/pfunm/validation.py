"""Input canonicalization helpers used at module boundaries.

Sparse matrices flow through the package as scipy CSR with sorted indices,
no duplicate entries, and float64 or complex128 data. Everything that
accepts a matrix from the caller goes through :func:`as_csr` once and then
relies on that canonical form.
"""

import os

import numpy as np
import scipy.sparse as sp

__all__ = [
    "as_csr",
    "require_square",
    "as_vector",
    "dense_cap",
    "to_dense_checked",
]

_DENSE_CAP_DEFAULT = 2000
_DENSE_CAP_ENV = "PFUNM_DENSE_CAP"


def as_csr(A, dtype=None):
    """Return ``A`` as a canonical CSR matrix.

    Accepts any scipy sparse matrix or a dense ndarray. Duplicate entries
    are summed, indices sorted, and the dtype promoted to float64 or
    complex128 (complex inputs stay complex; everything else becomes
    float64 unless ``dtype`` overrides).
    """
    if sp.issparse(A):
        M = A.tocsr(copy=True)
    else:
        arr = np.asarray(A)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
        M = sp.csr_matrix(arr)
    M.sum_duplicates()
    M.sort_indices()
    if dtype is None:
        dtype = np.complex128 if np.iscomplexobj(M.data) else np.float64
    if M.dtype != dtype:
        M = M.astype(dtype)
    return M


def require_square(A, name="A"):
    """Raise ValueError unless ``A`` is square; return its order."""
    m, n = A.shape
    if m != n:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    return n


def as_vector(v, n, name="v"):
    """Return ``v`` as a contiguous 1-d array of length ``n``."""
    arr = np.asarray(v)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.shape[0] != n:
        raise ValueError(f"{name} has length {arr.shape[0]}, expected {n}")
    if not np.iscomplexobj(arr):
        arr = arr.astype(np.float64, copy=False)
    else:
        arr = arr.astype(np.complex128, copy=False)
    return np.ascontiguousarray(arr)


def dense_cap(override=None):
    """Problem-size cap for dense fallbacks.

    ``override`` wins when given; otherwise the PFUNM_DENSE_CAP environment
    variable; otherwise 2000.
    """
    if override is not None:
        return int(override)
    env = os.environ.get(_DENSE_CAP_ENV)
    if env:
        return int(env)
    return _DENSE_CAP_DEFAULT


def to_dense_checked(A, cap=None, what="dense evaluation"):
    """Densify ``A`` after checking it is within the dense-path cap."""
    n = max(A.shape)
    limit = dense_cap(cap)
    if n > limit:
        raise ValueError(
            f"{what} is capped at n <= {limit} (got n = {n}); "
            f"raise the cap explicitly or via PFUNM_DENSE_CAP if you mean it"
        )
    return A.toarray() if sp.issparse(A) else np.asarray(A)
