"""Top-level evaluation of psi(A) and psi(A) v from pole expansions.

An expansion turns the matrix function into a family of resolvents,

    f(A) = c0 * I + sum_j c_j * inv(xi_j * I - A),

and everything here is bookkeeping around that sum: choosing how each
resolvent is computed (dense solves, updated approximate inverses,
preconditioned iterations, or a projection method that never sees the
poles), applying the expansion's outer wrapper (a left factor of A, or
gamma * A * Im(...) for quadrature-based tables), and reporting per-pole
solver statistics.

Conventions
-----------
* The driver works in the expansion's own variable: with
  ``argument_shift = s`` every resolvent, factorization and solve acts
  on ``B = A - s*I``. Seed policy "matrix_itself" means shift 0 *in
  that variable*, i.e. the seed factors are always of ``-B``.
* For the tabulated exponential the result is computed as
  ``exp(A) = e^c * exp(A - c*I)`` with ``c = max(0, gershgorin upper
  bound)`` unless the request pins ``spectral_shift`` explicitly. The
  table is accurate (uniform absolute error) on the whole closed left
  half-line, so shifting the spectrum there costs one scalar
  exponential and buys the table's full accuracy at positive spectra.
  The shift never touches the matrix: since
  ``inv(xi*I - (A - c*I)) = inv((xi + c)*I - A)``, it is applied by
  translating the poles, so factorizations and solves still see ``A``
  itself (whose inverse-factor structure the update method relies on).
* Real input gives real output: expansions of real functions carry
  conjugate-paired poles, so the assembled imaginary component is
  discarded (roundoff-level for real seed factors; for complex seeds it
  is of the same order as the dropping error and belongs to it).
* Accumulation over poles runs in ascending j, fixed, so repeated runs
  are bitwise identical.
* Solvers never abort the evaluation: a pole that fails to converge is
  recorded in its ``IterStats`` and flips the result's ``converged``
  flag (mean-iteration benchmarks include hard poles).
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .exceptions import DomainError, SingularMatrixError
from .factorizations import seed_preconditioner
from .krylov import (IterStats, _classify_psi, as_operator, bicgstab, cg,
                     dense_fun, krylov_fun_action)
from .shifted import build_shifted_inverse, compute_correction
from .validation import as_csr, as_vector, require_square, to_dense_checked

__all__ = [
    "UpdateConfig",
    "SolverConfig",
    "FunmRequest",
    "FunmResult",
    "select_seed_pole",
    "gershgorin_interval",
    "power_extreme",
    "spectral_interval",
    "dense_reference",
    "eval_funm",
    "eval_funm_action",
    "error_estimate",
]

_METHODS = {"direct", "update", "iterative", "krylov"}
_SOLVERS = {"cg", "bicgstab", "apply"}


@dataclass
class UpdateConfig:
    """How the seed factorization and its per-pole updates are built.

    ``factorization="auto"`` picks the biconjugation route for real seed
    matrices and the triangular-inversion route otherwise (the latter is
    the only one that accepts complex arithmetic). ``seed`` is a
    strategy name or integer understood by :func:`select_seed_pole`.
    ``m=None`` leaves the band choice to the correction strategy.
    """

    factorization: str = "auto"
    tau: float = 0.1
    tau_l: float = 1e-3
    tau_z: float = 1e-3
    correction: str = "auto"
    m: int = None
    seed: object = "matrix_itself"
    bandwidth_cap: int = 50


@dataclass
class SolverConfig:
    """Iterative-solver knobs for the action path.

    ``solver="apply"`` short-circuits the iteration entirely and uses
    the updated approximate inverse as the solution operator (only
    meaningful with method="update"); the projection method reads
    ``tol`` as its gamma threshold and ``maxit`` as the space cap.
    """

    solver: str = "bicgstab"
    tol: float = 1e-9
    maxit: int = 1000


@dataclass
class FunmRequest:
    """One evaluation problem: matrix, expansion, strategy, knobs.

    ``method`` is one of ``direct`` (dense solves), ``update`` (seed
    factorization plus banded middle-matrix updates), ``iterative``
    (action only: unpreconditioned solves, the benchmark baseline), or
    ``krylov`` (action only: Arnoldi projection, ignores the poles).
    ``update_config`` must be present exactly when method is update;
    ``solver_config`` belongs to the action path only.
    ``spectral_shift=None`` requests the automatic exponential shift;
    pass 0.0 to forbid it.
    """

    A: object
    pfe: object
    method: str = "direct"
    update_config: UpdateConfig = None
    solver_config: SolverConfig = None
    v: np.ndarray = None
    spectral_shift: float = None
    dense_cap: int = None

    def validated(self):
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if (self.update_config is not None) != (self.method == "update"):
            raise ValueError("update_config must be present exactly when "
                             "method='update'")
        if self.method == "krylov" and self.v is None:
            raise ValueError("method='krylov' requires v")
        if self.solver_config is not None:
            if self.solver_config.solver not in _SOLVERS:
                raise ValueError(
                    f"unknown solver {self.solver_config.solver!r}")
            if (self.solver_config.solver == "apply"
                    and self.method != "update"):
                raise ValueError("solver='apply' needs method='update' "
                                 "(there is no operator to apply otherwise)")
        return self


@dataclass
class FunmResult:
    """Evaluation output plus per-pole accounting.

    ``fill_in`` is None unless a factorization was built. The optional
    ``error_estimate`` pair is never attached automatically; callers
    with a fitted decay rate use :func:`error_estimate` themselves.
    """

    value: np.ndarray = field(repr=False)
    per_pole_stats: list = field(default_factory=list, repr=False)
    total_seconds: float = 0.0
    fill_in: float = None
    error_estimate: tuple = None
    converged: bool = True


# ----------------------------------------------------------------------
# spectral utilities


def gershgorin_interval(A):
    """Real-axis enclosure (lo, hi) of the spectrum from disc bounds.

    Every eigenvalue lies in a disc centered at a diagonal entry with
    the off-diagonal row sum as radius; the returned interval encloses
    the real parts of all discs. Tight for diagonally dominant banded
    matrices, crude otherwise.
    """
    A = as_csr(A)
    require_square(A)
    diag = A.diagonal()
    radius = np.asarray(abs(A).sum(axis=1)).ravel() - np.abs(diag)
    return float((diag.real - radius).min()), float((diag.real + radius).max())


def power_extreme(A, n_iter=100):
    """Rayleigh-quotient estimate of the dominant eigenvalue.

    Deterministic all-ones start; plain power iteration, so the estimate
    is only trustworthy when the dominant eigenvalue is well separated
    and not part of a complex pair. Meant to refine a Gershgorin bound,
    not replace an eigensolver.
    """
    A = as_csr(A)
    n = require_square(A)
    v = np.ones(n) / math.sqrt(n)
    if np.iscomplexobj(A.data):
        v = v.astype(np.complex128)
    lam = 0.0
    for _ in range(n_iter):
        w = A @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        lam = np.vdot(v, A @ v)
    return complex(lam) if abs(lam.imag) > 1e-12 * abs(lam) else float(lam.real)


def spectral_interval(A, refine_upper=True, margin=0.01):
    """Positive enclosure (a, b) of the spectrum from Gershgorin discs.

    The lower end is the Gershgorin bound. The upper end starts there
    too and is optionally replaced by a Rayleigh-quotient power estimate
    (padded outward by ``margin``) when that comes out smaller; the
    estimate approaches the dominant eigenvalue from below, hence the
    pad. This is a cheap enclosure, not an eigensolver: when the
    Gershgorin lower bound is not positive the caller must supply the
    interval from problem knowledge, and ``DomainError`` says so. The
    quadrature construction only needs an enclosure, so a loose (a, b)
    costs accuracy per node but never correctness.
    """
    A = as_csr(A)
    require_square(A)
    lo, hi = gershgorin_interval(A)
    if lo <= 0.0:
        raise DomainError(
            "the Gershgorin enclosure dips below zero; pass the spectral "
            "interval explicitly (the quadrature needs 0 < a < b)")
    if refine_upper:
        est = power_extreme(A)
        if not isinstance(est, complex):
            refined = est * (1.0 + margin)
            if lo < refined < hi:
                hi = refined
    return lo, hi


def select_seed_pole(pfe, strategy):
    """Resolve a seed policy to the shift the factorization targets.

    Strategies: ``"matrix_itself"`` -> 0 (factor -B); ``"first_pole"``;
    ``"largest_modulus_pole"``; an integer j with the convention that
    j = 0 is the matrix itself and j = 1..N selects the j-th pole.
    """
    if isinstance(strategy, (int, np.integer)) and not isinstance(strategy, bool):
        j = int(strategy)
        if j == 0:
            return 0.0
        if not 1 <= j <= len(pfe.poles):
            raise IndexError(f"seed index {j} out of range 0..{len(pfe.poles)}")
        return complex(pfe.poles[j - 1])
    if strategy == "matrix_itself":
        return 0.0
    if strategy == "first_pole":
        return complex(pfe.poles[0])
    if strategy == "largest_modulus_pole":
        return complex(pfe.poles[int(np.argmax(np.abs(pfe.poles)))])
    raise ValueError(f"unknown seed strategy {strategy!r}")


def error_estimate(N, tau, a, b, beta_fit):
    """Qualitative a-priori error split (E1, E2).

    E1 = exp(-pi^2 N / (log(b/a) + 3)) is the quadrature term with its
    unknown constant fixed to 1; E2 = tau / (1 - beta_fit) is the
    dropping term, linear in tau with the constant supplied by a fitted
    off-diagonal decay rate (see ``decay_probe``). Both are order
    statements: ratios across N or tau are meaningful, absolute values
    are not calibrated.
    """
    if not 0 < a < b:
        raise ValueError("need 0 < a < b")
    if not 0 <= tau < 1:
        raise ValueError("need 0 <= tau < 1")
    if not 0 <= beta_fit < 1:
        raise ValueError("need 0 <= beta_fit < 1")
    e1 = math.exp(-math.pi**2 * N / (math.log(b / a) + 3.0))
    e2 = tau / (1.0 - beta_fit)
    return e1, e2


# ----------------------------------------------------------------------
# dense reference


def dense_reference(A, psi, cap=None):
    """Dense oracle for psi(A), for validating the sparse paths.

    Hermitian input goes through the eigendecomposition (LAPACK's
    Householder reduction plus implicit-shift iteration) with psi
    applied to the eigenvalues; anything else falls back to the dense
    kernels (scaling-and-squaring exponential, inverse scaling-and-
    squaring logarithm). Branch-cut violations raise ``DomainError``.
    """
    Ad = to_dense_checked(A, cap, what="dense reference")
    kind, extra = _classify_psi(psi)
    scale = max(np.abs(Ad).max(), 1.0)
    if np.allclose(Ad, Ad.conj().T, rtol=0.0, atol=1e-13 * scale):
        w, Q = np.linalg.eigh(Ad)
        if kind == "exp":
            fw = np.exp(w)
        elif kind == "callable":
            fw = np.asarray(extra(w))
        else:
            if w.min() <= 0.0:
                raise DomainError(
                    f"psi={psi!r} needs a positive spectrum; smallest "
                    f"eigenvalue is {w.min():.3e}")
            fw = np.log(w) if kind == "log" else np.power(w, extra)
        out = (Q * fw) @ Q.conj().T
        return out.real if np.isrealobj(Ad) else out
    return dense_fun(Ad, psi)


# ----------------------------------------------------------------------
# shared assembly helpers


def _spectral_shift(req, A):
    if req.pfe.kind != "chebyshev_exp":
        return 0.0
    if req.spectral_shift is not None:
        return float(req.spectral_shift)
    return max(0.0, gershgorin_interval(A)[1])


def _shifted_argument(A, total_shift):
    if total_shift == 0.0:
        return A
    n = A.shape[0]
    return (A - sp.identity(n, dtype=A.dtype, format="csr") * total_shift).tocsr()


def _finalize(pfe, B, S, scale, real_input):
    """Apply the expansion's outer wrapper and the exponential rescale."""
    if pfe.needs_left_A_imag:
        out = pfe.gamma * (B @ np.ascontiguousarray(S.imag))
        return np.asarray(scale * out)
    out = S.real if real_input else S
    return np.asarray(scale * out)


def _build_update_operators(B, pfe, poles, c_shift, cfg):
    """Seed factorization once, correction once, one operator per pole.

    ``poles`` are already translated by the spectral shift; a pole seed
    is translated the same way so the seed factorization targets the
    system actually being solved (matrix_itself stays at 0).
    """
    seed_shift = select_seed_pole(pfe, cfg.seed)
    if seed_shift != 0.0:
        seed_shift = complex(seed_shift) + c_shift
    method = cfg.factorization
    if method == "auto":
        complex_seed = (complex(seed_shift).imag != 0.0
                        or np.iscomplexobj(B.data))
        method = "invt" if complex_seed else "ainv"
    F = seed_preconditioner(B, method=method, tau=cfg.tau, tau_l=cfg.tau_l,
                            tau_z=cfg.tau_z, seed_shift=seed_shift)
    E = compute_correction(F, strategy=cfg.correction, m=cfg.m)
    ops = []
    for j, xi in enumerate(poles):
        try:
            ops.append(build_shifted_inverse(F, E, xi,
                                             bandwidth_cap=cfg.bandwidth_cap))
        except SingularMatrixError as exc:
            raise SingularMatrixError(f"pole j={j + 1}: {exc}",
                                      index=exc.index) from exc
    return F, ops


# ----------------------------------------------------------------------
# matrix-valued evaluation


def eval_funm(req):
    """Evaluate psi(A) as a dense matrix by the direct or update route.

    Direct solves (xi_j I - B) X_j = I densely per pole; update applies
    the per-pole approximate inverses to the identity columns, reusing
    the one seed factorization and its banded middle matrices. The
    result is materialized dense either way, so the dense cap applies
    to both.
    """
    req.validated()
    if req.method not in ("direct", "update"):
        raise ValueError(f"matrix output needs method 'direct' or 'update', "
                         f"got {req.method!r}")
    if req.solver_config is not None:
        raise ValueError("solver_config belongs to the action path")
    t0 = time.perf_counter()
    A = as_csr(req.A)
    n = require_square(A)
    pfe = req.pfe
    c_shift = _spectral_shift(req, A)
    B = _shifted_argument(A, pfe.argument_shift)
    scale = math.exp(c_shift)
    real_input = not np.iscomplexobj(B.data)
    c0, poles, coeffs = pfe.resolvent_view()
    poles = poles + c_shift

    stats = []
    fill = None
    acc = np.zeros((n, n), dtype=np.complex128)
    if req.method == "direct":
        Bd = to_dense_checked(B, req.dense_cap, what="direct evaluation")
        eye = np.eye(n)
        for j, (xi, cj) in enumerate(zip(poles, coeffs)):
            st = IterStats(converged=True)
            tp = time.perf_counter()
            try:
                Xj = np.linalg.solve(xi * eye - Bd, eye)
            except np.linalg.LinAlgError as exc:
                raise SingularMatrixError(
                    f"pole j={j + 1}: dense solve singular at xi={xi}") from exc
            acc += cj * Xj
            st.elapsed_seconds = time.perf_counter() - tp
            stats.append(st)
    else:
        to_dense_checked(B, req.dense_cap, what="update evaluation")
        F, ops = _build_update_operators(B, pfe, poles, c_shift,
                                         req.update_config)
        fill = F.fill_in
        eye = np.eye(n)
        for P, cj in zip(ops, coeffs):
            st = IterStats(converged=True)
            tp = time.perf_counter()
            acc += cj * P.apply_columns(eye)
            st.elapsed_seconds = time.perf_counter() - tp
            stats.append(st)

    S = acc + c0 * np.eye(n)
    value = _finalize(pfe, B, S, scale, real_input)
    return FunmResult(value=value, per_pole_stats=stats,
                      total_seconds=time.perf_counter() - t0, fill_in=fill)


# ----------------------------------------------------------------------
# action (vector-valued) evaluation


def _pole_system_dtype(poles, v, B):
    if (np.iscomplexobj(poles) and np.abs(poles.imag).max(initial=0.0) > 0.0) \
            or np.iscomplexobj(v) or np.iscomplexobj(B.data):
        return np.complex128
    return np.float64


def eval_funm_action(req):
    """Evaluate psi(A) v by per-pole solves or a projection method.

    ``direct`` solves each pole system densely; ``update`` solves it
    iteratively preconditioned by the updated approximate inverse (or
    applies that operator outright with solver='apply'); ``iterative``
    is the unpreconditioned baseline; ``krylov`` hands the whole job to
    the projection method, reading the expansion only for psi. Poles
    accumulate in ascending order; any non-converged pole flags the
    result.
    """
    req.validated()
    if req.v is None:
        raise ValueError("the action path requires v")
    t0 = time.perf_counter()
    A = as_csr(req.A)
    n = require_square(A)
    v = as_vector(req.v, n)
    pfe = req.pfe

    if req.method == "krylov":
        scfg = req.solver_config or SolverConfig(tol=1e-6, maxit=100)
        y, st = krylov_fun_action(as_operator(A), v, psi=pfe.psi,
                                  gamma_tol=scfg.tol, m_max=scfg.maxit)
        return FunmResult(value=y, per_pole_stats=[st],
                          total_seconds=time.perf_counter() - t0,
                          converged=st.converged)

    c_shift = _spectral_shift(req, A)
    B = _shifted_argument(A, pfe.argument_shift)
    scale = math.exp(c_shift)
    real_input = not (np.iscomplexobj(B.data) or np.iscomplexobj(v))
    c0, poles, coeffs = pfe.resolvent_view()
    poles = poles + c_shift
    dtype = _pole_system_dtype(poles, v, B)
    vw = v.astype(dtype)

    stats = []
    fill = None
    acc = np.zeros(n, dtype=np.complex128)

    if req.method == "direct":
        Bd = to_dense_checked(B, req.dense_cap, what="direct action")
        eye = np.eye(n)
        for j, (xi, cj) in enumerate(zip(poles, coeffs)):
            st = IterStats(converged=True)
            tp = time.perf_counter()
            try:
                xj = np.linalg.solve(xi * eye - Bd, vw)
            except np.linalg.LinAlgError as exc:
                raise SingularMatrixError(
                    f"pole j={j + 1}: dense solve singular at xi={xi}") from exc
            acc += cj * xj
            st.elapsed_seconds = time.perf_counter() - tp
            stats.append(st)
    else:
        scfg = req.solver_config or SolverConfig()
        solve = cg if scfg.solver == "cg" else bicgstab
        ops = [None] * len(poles)
        if req.method == "update":
            F, ops = _build_update_operators(B, pfe, poles, c_shift,
                                             req.update_config)
            fill = F.fill_in
        eye = sp.identity(n, dtype=B.dtype, format="csr")
        for j, (xi, cj) in enumerate(zip(poles, coeffs)):
            P = ops[j]
            if scfg.solver == "apply":
                st = IterStats(converged=True)
                tp = time.perf_counter()
                xj = P.apply(vw)
                st.elapsed_seconds = time.perf_counter() - tp
            else:
                M = (eye * xi - B).tocsr()
                pre = P.apply if P is not None else None
                xj, st = solve(as_operator(M, precondition=pre), vw,
                               tol=scfg.tol, maxit=scfg.maxit)
            acc += cj * xj
            stats.append(st)

    S = acc + c0 * vw
    value = _finalize(pfe, B, S, scale, real_input)
    return FunmResult(value=value, per_pole_stats=stats,
                      total_seconds=time.perf_counter() - t0, fill_in=fill,
                      converged=all(st.converged for st in stats))
