"""Iterative solvers and Krylov projection for matrix-function actions.

Hand-rolled CG and BiCGSTAB over a minimal operator wrapper, a modified
Gram-Schmidt Arnoldi process with adaptive reorthogonalization, and
small dense kernels for ``psi(H)`` on the projected Hessenberg matrices.

Conventions
-----------
* Solvers never raise on stagnation or breakdown: they return the best
  iterate seen so far with ``converged=False``. A sweep over many
  shifted systems must keep running when a single shift misbehaves.
* BiCGSTAB applies the preconditioner on the right, so the recorded
  residuals belong to the original system and preconditioned versus
  unpreconditioned iteration counts are directly comparable. It reports
  half iterations (k - 0.5) when the residual test already passes after
  the first of the two update legs of step k.
* ``krylov_fun_action`` stops on the a-posteriori measure
  ``gamma = h[m+1, m] * |e_m^T psi(H_m) e_1| / ||psi(H_m) e_1||``
  evaluated with the target function itself (for psi=exp the numerator
  is the classical exponential estimate; other targets reuse the same
  recipe). The denominator makes gamma a relative-error estimate: for
  strongly dissipative operators the answer can sit ten orders of
  magnitude below ||v|| and an absolute test would fire at m=1, long
  before the projection carries any information.
"""

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .exceptions import NumericalError
from .rational import pade_log

__all__ = [
    "Operator",
    "IterStats",
    "ArnoldiDecomposition",
    "as_operator",
    "cg",
    "bicgstab",
    "arnoldi",
    "krylov_fun_action",
    "dense_fun",
]


# ----------------------------------------------------------------------
# operator plumbing


@dataclass
class Operator:
    """Matrix action with an optional approximate-inverse action.

    ``apply`` computes ``A @ v``. ``precondition``, when set, applies a
    fixed approximate inverse of A; the solvers treat it as one constant
    operator for the whole solve.
    """

    n: int
    apply: Callable
    precondition: Optional[Callable] = None
    dtype: np.dtype = np.dtype(np.float64)


def as_operator(A, precondition=None):
    """Wrap an ndarray, sparse matrix, banded matrix or Operator."""
    if isinstance(A, Operator):
        if precondition is None:
            return A
        return Operator(A.n, A.apply, precondition, A.dtype)
    if sp.issparse(A):
        M = A.tocsr()
        return Operator(M.shape[0], lambda v: M @ v, precondition,
                        np.dtype(M.dtype))
    if hasattr(A, "matvec") and hasattr(A, "data"):
        # banded storage: delegate to its own matvec
        return Operator(A.n, A.matvec, precondition, np.dtype(A.data.dtype))
    M = np.asarray(A)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"need a square matrix, got shape {M.shape}")
    return Operator(M.shape[0], lambda v: M @ v, precondition,
                    np.dtype(M.dtype))


@dataclass
class IterStats:
    """Per-solve bookkeeping for benchmark tables.

    ``iterations`` is real-valued because BiCGSTAB counts half steps.
    For Krylov function actions ``final_relative_residual`` holds the
    stopping measure gamma instead of a linear-system residual.
    """

    iterations: float = 0.0
    final_relative_residual: float = math.nan
    converged: bool = False
    elapsed_seconds: float = 0.0
    matvec_count: int = 0

    def row(self, solver, n):
        """One CSV-ready record."""
        return {
            "solver": solver,
            "n": n,
            "iters": self.iterations,
            "seconds": self.elapsed_seconds,
            "residual": self.final_relative_residual,
            "converged": self.converged,
        }


def _work_dtype(op, b):
    return np.result_type(op.dtype, np.asarray(b).dtype, np.float64)


# ----------------------------------------------------------------------
# solvers


def cg(op, b, tol=1e-9, maxit=1000):
    """Conjugate gradients for symmetric (Hermitian) positive definite ops.

    Runs preconditioned CG when ``op.precondition`` is set; the
    preconditioner acts as a symmetric approximate inverse, z = M r.
    Convergence is declared on the recursively updated residual relative
    to ``||b||``. On breakdown, or when ``maxit`` is exhausted, the best
    iterate seen so far comes back with ``converged=False``.
    """
    op = as_operator(op)
    t0 = time.perf_counter()
    dtype = _work_dtype(op, b)
    b = np.asarray(b, dtype=dtype)
    pre = op.precondition or (lambda v: v)
    stats = IterStats()

    x = np.zeros(op.n, dtype=dtype)
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        stats.final_relative_residual = 0.0
        stats.converged = True
        stats.elapsed_seconds = time.perf_counter() - t0
        return x, stats

    r = b.copy()
    z = pre(r)
    p = np.array(z, dtype=dtype)
    rz = np.vdot(r, z)
    best_x, best_res = x, 1.0
    relres = 1.0
    converged = False
    iters = 0.0
    for it in range(1, maxit + 1):
        Ap = op.apply(p)
        stats.matvec_count += 1
        pAp = np.vdot(p, Ap)
        if pAp == 0.0 or not np.isfinite(pAp):
            break
        alpha = rz / pAp
        x = x + alpha * p
        r = r - alpha * Ap
        iters = float(it)
        relres = np.linalg.norm(r) / bnorm
        if relres < best_res:
            best_x, best_res = x, relres
        if relres <= tol:
            converged = True
            break
        z = pre(r)
        rz_next = np.vdot(r, z)
        if rz_next == 0.0 or not np.isfinite(rz_next):
            break
        p = z + (rz_next / rz) * p
        rz = rz_next

    if not converged:
        x, relres = best_x, best_res
    stats.iterations = iters
    stats.final_relative_residual = float(relres)
    stats.converged = converged
    stats.elapsed_seconds = time.perf_counter() - t0
    return x, stats


def bicgstab(op, b, tol=1e-9, maxit=1000):
    """Stabilized bi-conjugate gradients, right-preconditioned.

    Works for general real or complex operators. The preconditioner is
    applied inside the recursion (p_hat = M p, s_hat = M s) so the
    iterate and residual always belong to the original system. Scalar
    recurrence breakdown (rho, omega, or t'.t vanishing) ends the solve
    with the best iterate and ``converged=False``.
    """
    op = as_operator(op)
    t0 = time.perf_counter()
    dtype = _work_dtype(op, b)
    b = np.asarray(b, dtype=dtype)
    pre = op.precondition or (lambda v: v)
    stats = IterStats()

    x = np.zeros(op.n, dtype=dtype)
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        stats.final_relative_residual = 0.0
        stats.converged = True
        stats.elapsed_seconds = time.perf_counter() - t0
        return x, stats

    r = b.copy()
    rhat = r.copy()
    v = np.zeros_like(b)
    p = np.zeros_like(b)
    rho_prev = 1.0
    alpha = 1.0
    omega = 1.0
    best_x, best_res = x, 1.0
    relres = 1.0
    converged = False
    iters = 0.0
    for it in range(1, maxit + 1):
        rho = np.vdot(rhat, r)
        if rho == 0.0 or omega == 0.0:
            break
        if it == 1:
            p = r.copy()
        else:
            beta = (rho / rho_prev) * (alpha / omega)
            p = r + beta * (p - omega * v)
        p_hat = pre(p)
        v = op.apply(p_hat)
        stats.matvec_count += 1
        denom = np.vdot(rhat, v)
        if denom == 0.0 or not np.isfinite(denom):
            break
        alpha = rho / denom
        x = x + alpha * p_hat
        s = r - alpha * v
        iters = it - 0.5
        relres = np.linalg.norm(s) / bnorm
        if relres < best_res:
            best_x, best_res = x, relres
        if relres <= tol:
            converged = True
            break
        s_hat = pre(s)
        t = op.apply(s_hat)
        stats.matvec_count += 1
        tt = np.vdot(t, t)
        if tt == 0.0 or not np.isfinite(tt):
            break
        omega = np.vdot(t, s) / tt
        x = x + omega * s_hat
        r = s - omega * t
        iters = float(it)
        relres = np.linalg.norm(r) / bnorm
        if relres < best_res:
            best_x, best_res = x, relres
        if relres <= tol:
            converged = True
            break
        rho_prev = rho

    if not converged:
        x, relres = best_x, best_res
    stats.iterations = iters
    stats.final_relative_residual = float(relres)
    stats.converged = converged
    stats.elapsed_seconds = time.perf_counter() - t0
    return x, stats


# ----------------------------------------------------------------------
# Arnoldi


_REORTH_ETA = 1.0 / math.sqrt(2.0)
_BREAKDOWN_RTOL = 1e-14


@dataclass
class ArnoldiDecomposition:
    """Orthonormal Krylov basis with its projected Hessenberg matrix.

    Satisfies ``A V = V H[:m, :] + H[m, m-1] * outer(v_next, e_m)`` with
    ``V^H V = I`` to roundoff. ``breakdown`` marks a happy breakdown:
    the basis spans an invariant subspace, the trailing subdiagonal
    entry is numerically zero and ``v_next`` is None.
    """

    V: np.ndarray
    H: np.ndarray
    m: int
    breakdown: bool = False
    v_next: Optional[np.ndarray] = None


def _orthogonalize(V, j, w, H):
    """One MGS sweep of w against V[:, :j+1], plus one repair pass.

    The repair pass runs when the sweep removed more than a factor
    1/sqrt(2) of the candidate's norm, the usual cheap guard against
    loss of orthogonality. Coefficients accumulate into column j of H.
    Returns the norm of w before orthogonalization.
    """
    norm_before = np.linalg.norm(w)
    for i in range(j + 1):
        hij = np.vdot(V[:, i], w)
        H[i, j] += hij
        w -= hij * V[:, i]
    if np.linalg.norm(w) < _REORTH_ETA * norm_before:
        for i in range(j + 1):
            cij = np.vdot(V[:, i], w)
            H[i, j] += cij
            w -= cij * V[:, i]
    return norm_before


def arnoldi(op, v, m):
    """Arnoldi factorization of dimension (at most) m.

    Modified Gram-Schmidt with one adaptive reorthogonalization pass
    per column. A vanishing subdiagonal entry truncates the
    factorization, sets ``breakdown`` and leaves ``v_next`` unset; the
    computed basis then spans an exactly invariant subspace.
    """
    op = as_operator(op)
    v = np.asarray(v)
    if v.shape != (op.n,):
        raise ValueError(f"starting vector has shape {v.shape}, need ({op.n},)")
    vnorm = np.linalg.norm(v)
    if vnorm == 0.0:
        raise ValueError("starting vector must be nonzero")
    if not 1 <= m <= op.n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={op.n}")

    dtype = _work_dtype(op, v)
    V = np.zeros((op.n, m + 1), dtype=dtype)
    H = np.zeros((m + 1, m), dtype=dtype)
    V[:, 0] = v / vnorm
    for j in range(m):
        w = np.array(op.apply(V[:, j]), dtype=dtype)
        norm_before = _orthogonalize(V, j, w, H)
        hnext = np.linalg.norm(w)
        H[j + 1, j] = hnext
        if hnext <= _BREAKDOWN_RTOL * norm_before:
            k = j + 1
            return ArnoldiDecomposition(V[:, :k].copy(), H[:k + 1, :k].copy(),
                                        k, breakdown=True)
        V[:, j + 1] = w / hnext
    return ArnoldiDecomposition(V[:, :m].copy(), H.copy(), m,
                                breakdown=False, v_next=V[:, m].copy())


def krylov_fun_action(op, v, psi="exp", gamma_tol=1e-6, m_max=100):
    """Approximate ``psi(A) v`` from a growing Arnoldi space.

    After each new column the projected approximation is
    ``y_m = ||v|| V_m psi(H_m) e_1``; growth stops once
    ``gamma = h[m+1, m] * |e_m^T psi(H_m) e_1| / ||psi(H_m) e_1||``
    drops below ``gamma_tol``, on happy breakdown (the projection is
    then exact), or at ``m_max`` columns, the last with
    ``converged=False``. Because ``||y_m|| = ||v|| ||psi(H_m) e_1||``,
    gamma estimates the error relative to the current approximation,
    which keeps the test meaningful when ``psi(A) v`` is many orders of
    magnitude smaller than ``v``. The gamma value lands in
    ``final_relative_residual``.
    """
    op = as_operator(op)
    t0 = time.perf_counter()
    v = np.asarray(v)
    if v.shape != (op.n,):
        raise ValueError(f"vector has shape {v.shape}, need ({op.n},)")
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    stats = IterStats()

    vnorm = np.linalg.norm(v)
    dtype = _work_dtype(op, v)
    if vnorm == 0.0:
        stats.converged = True
        stats.final_relative_residual = 0.0
        stats.elapsed_seconds = time.perf_counter() - t0
        return np.zeros(op.n, dtype=dtype), stats

    m_max = min(m_max, op.n)
    V = np.zeros((op.n, m_max + 1), dtype=dtype)
    H = np.zeros((m_max + 1, m_max), dtype=dtype)
    V[:, 0] = v / vnorm
    fe1 = None
    converged = False
    gamma = math.inf
    m = 0
    for j in range(m_max):
        w = np.array(op.apply(V[:, j]), dtype=dtype)
        stats.matvec_count += 1
        norm_before = _orthogonalize(V, j, w, H)
        hnext = np.linalg.norm(w)
        H[j + 1, j] = hnext
        m = j + 1
        fe1 = dense_fun(H[:m, :m], psi)[:, 0]
        if hnext <= _BREAKDOWN_RTOL * norm_before:
            gamma = 0.0
            converged = True
            break
        raw = float(hnext * abs(fe1[m - 1]))
        denom = float(np.linalg.norm(fe1))
        gamma = raw / denom if denom > 0.0 else (0.0 if raw == 0.0 else math.inf)
        if gamma < gamma_tol:
            converged = True
            break
        V[:, j + 1] = w / hnext

    y = vnorm * (V[:, :m] @ fe1)
    stats.iterations = float(m)
    stats.final_relative_residual = gamma
    stats.converged = converged
    stats.elapsed_seconds = time.perf_counter() - t0
    return y, stats


# ----------------------------------------------------------------------
# dense kernels


def _classify_psi(psi):
    """Split a function spec into a kernel name and its parameter."""
    if callable(psi):
        return "callable", psi
    if psi == "exp":
        return "exp", None
    if psi == "log":
        return "log", None
    if psi == "sqrt":
        return "power", 0.5
    if isinstance(psi, tuple) and len(psi) == 2 and psi[0] == "power":
        return "power", float(psi[1])
    if isinstance(psi, str) and psi.startswith("power:"):
        return "power", float(psi.split(":", 1)[1])
    raise ValueError(f"unrecognized function spec {psi!r}")


def _sqrtm_db(X):
    """Principal square root by the Denman-Beavers iteration.

    Quadratically convergent for matrices without eigenvalues on the
    closed negative real axis (checked by the caller). Once the step
    size enters the quadratic regime one extra sweep is taken so the
    result sits at roundoff.
    """
    Y = X.copy()
    Z = np.eye(X.shape[0], dtype=X.dtype)
    done = False
    for _ in range(60):
        try:
            Yi = np.linalg.inv(Y)
            Zi = np.linalg.inv(Z)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                f"square-root iteration hit a singular iterate: {exc}"
            ) from exc
        Yn = 0.5 * (Y + Zi)
        Z = 0.5 * (Z + Yi)
        delta = np.linalg.norm(Yn - Y, "fro")
        Y = Yn
        if done:
            return Y
        done = delta <= 1e-8 * np.linalg.norm(Y, "fro")
    raise NumericalError("square-root iteration did not converge in 60 steps")


def _dense_log(H):
    """Principal logarithm by inverse scaling-and-squaring.

    Repeated Denman-Beavers square roots bring the iterate within 1/4 of
    the identity, a Gauss-Legendre Pade form evaluates log there, and s
    doublings undo the roots. Real input with no eigenvalue on the
    closed negative real axis stays real throughout.
    """
    lam = np.linalg.eigvals(H)
    on_cut = (lam.real <= 0.0) & (np.abs(lam.imag)
                                  <= 1e-13 * np.maximum(np.abs(lam.real), 1.0))
    if np.any(on_cut):
        bad = lam[on_cut][0]
        raise NumericalError(
            f"logarithm undefined: eigenvalue {bad:.6e} lies on the closed "
            f"negative real axis")

    X = np.array(H, dtype=np.result_type(H.dtype, np.float64))
    eye = np.eye(X.shape[0], dtype=X.dtype)
    s = 0
    while np.linalg.norm(X - eye, "fro") > 0.25:
        if s >= 60:
            raise NumericalError("square-root recursion did not contract")
        X = _sqrtm_db(X)
        s += 1
    E = X - eye
    pfe = pade_log(8)
    L = np.zeros_like(X)
    for a_j, b_j in zip(pfe.alphas, pfe.betas):
        L += a_j * np.linalg.solve(eye + b_j * E, E)
    return (2.0 ** s) * L


def dense_fun(H, psi):
    """``psi(H)`` for a small dense matrix.

    exp goes through scaling-and-squaring (degree-13 diagonal Pade).
    log uses an eigendecomposition when H is Hermitian and inverse
    scaling-and-squaring otherwise; power:a is exp(a log H). Arbitrary
    callables are supported for Hermitian H only, where applying them to
    the eigenvalues is well defined. log and power of a matrix with an
    eigenvalue on the closed negative real axis raise NumericalError.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"need a square matrix, got shape {H.shape}")
    kind, extra = _classify_psi(psi)
    if kind == "exp":
        return scipy.linalg.expm(H)

    scale = max(1.0, float(np.max(np.abs(H))) if H.size else 1.0)
    hermitian = np.allclose(H, H.conj().T, rtol=0.0, atol=1e-13 * scale)
    if hermitian:
        w, Q = scipy.linalg.eigh(H)
        if kind == "callable":
            fw = np.asarray(extra(w))
        else:
            if w.min() <= 0.0:
                raise NumericalError(
                    f"matrix {kind} undefined: eigenvalue {w.min():.6e} lies "
                    f"on the closed negative real axis")
            fw = np.log(w) if kind == "log" else np.power(w, extra)
        return (Q * fw) @ Q.conj().T

    if kind == "callable":
        raise ValueError(
            "callable function specs need a Hermitian argument; use 'exp', "
            "'log' or 'power:<a>' for general matrices")
    L = _dense_log(H)
    if kind == "log":
        return L
    return scipy.linalg.expm(extra * L)
