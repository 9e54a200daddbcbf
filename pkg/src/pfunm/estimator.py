"""Fit/transform wrapper: precompute psi(A) machinery, apply to vectors.

:class:`MatrixFunction` packages the evaluation pipeline behind the
scikit-learn estimator protocol: ``fit(A)`` resolves the
partial-fraction expansion, builds the seed factorization and the
per-pole operators (update method) or the shifted systems (iterative
solves), and ``transform(V)`` applies psi(A) to each column of V
reusing that state. Deriving from ``BaseEstimator`` supplies
``get_params``/``set_params``/``clone`` in the standard way
(constructor arguments are stored verbatim, no work in ``__init__``).

``TransformerMixin`` is deliberately not mixed in: the fitted operand
(the matrix) and the transformed data (the vectors) are different
objects here, so its ``fit_transform(X)`` chaining shortcut would
compute the meaningless psi(A) @ A.
"""

import math

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator

from .driver import (UpdateConfig, _build_update_operators, _finalize,
                     _pole_system_dtype, gershgorin_interval,
                     spectral_interval)
from .exceptions import SingularMatrixError
from .krylov import as_operator, bicgstab, cg, krylov_fun_action
from .rational import chebyshev_exp, contour_pfe, pade_log
from .validation import as_csr, require_square, to_dense_checked

__all__ = ["MatrixFunction"]


class MatrixFunction(BaseEstimator):
    """Estimator computing psi(A) V for a fixed matrix A.

    Parameters
    ----------
    psi : "exp", "log", "power:<p>", or a callable (contour only).
    N : expansion order.
    expansion : "auto" picks the tabulated rational family for exp and
        the mapped-circle quadrature otherwise; "chebyshev", "pade" and
        "contour" force a family (the first two are exp- and log-only).
    interval : positive spectral interval (a, b) for the contour
        family. When None it is enclosed via Gershgorin discs (upper
        end refined by a power estimate), which fails loudly for
        matrices whose discs dip below zero; such callers know their
        spectrum better than any cheap bound and must pass (a, b).
    method : "direct" (dense per-pole solves), "update" (seed
        factorization plus banded middle-matrix updates), "iterative"
        (unpreconditioned solves) or "krylov" (projection, ignores the
        poles).
    factorization, tau, tau_l, tau_z, correction, m, seed,
    bandwidth_cap : update-method knobs, stored into the evaluation
        config verbatim.
    solver, tol, maxit : per-pole solver knobs; "apply" uses the
        updated approximate inverse as the solution operator. The
        projection method reads tol as its stopping threshold and maxit
        as the space cap.
    spectral_shift : exponential-only rescaling shift; None requests
        the automatic Gershgorin choice, 0.0 forbids it.
    dense_cap : row limit for the dense path.

    Attributes ending in an underscore are set by :meth:`fit`
    (``pfe_``, ``interval_``, ``fill_in_``, ``n_features_in_``);
    :meth:`transform` additionally records ``per_pole_stats_`` and
    ``converged_`` for its latest call.
    """

    def __init__(self, psi="exp", N=8, expansion="auto", interval=None,
                 method="update", factorization="auto", tau=0.1,
                 tau_l=1e-3, tau_z=1e-3, correction="auto", m=None,
                 seed="matrix_itself", bandwidth_cap=50,
                 solver="bicgstab", tol=1e-9, maxit=1000,
                 spectral_shift=None, dense_cap=None):
        self.psi = psi
        self.N = N
        self.expansion = expansion
        self.interval = interval
        self.method = method
        self.factorization = factorization
        self.tau = tau
        self.tau_l = tau_l
        self.tau_z = tau_z
        self.correction = correction
        self.m = m
        self.seed = seed
        self.bandwidth_cap = bandwidth_cap
        self.solver = solver
        self.tol = tol
        self.maxit = maxit
        self.spectral_shift = spectral_shift
        self.dense_cap = dense_cap

    # -- fitting -------------------------------------------------------

    def _expansion(self, A):
        """Resolve the expansion family; returns (pfe, interval or None)."""
        family = self.expansion
        if family == "auto":
            family = "chebyshev" if self.psi == "exp" else "contour"
        if family == "chebyshev":
            if self.psi != "exp":
                raise ValueError(
                    "the tabulated rational family approximates exp only")
            return chebyshev_exp(self.N), None
        if family == "pade":
            if self.psi != "log":
                raise ValueError(
                    "the diagonal Pade family approximates log only")
            return pade_log(self.N), None
        if family == "contour":
            ab = self.interval
            if ab is None:
                ab = spectral_interval(A)
            a, b = float(ab[0]), float(ab[1])
            return contour_pfe(self.psi, a, b, self.N), (a, b)
        raise ValueError(f"unknown expansion {self.expansion!r}")

    def fit(self, A, y=None):
        """Resolve the expansion and precompute the per-pole machinery."""
        if self.method not in ("direct", "update", "iterative", "krylov"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.solver not in ("cg", "bicgstab", "apply"):
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.solver == "apply" and self.method != "update":
            raise ValueError("solver='apply' needs method='update' "
                             "(there is no operator to apply otherwise)")
        A = as_csr(A)
        n = require_square(A)
        pfe, ab = self._expansion(A)
        self.A_ = A
        self.n_features_in_ = n
        self.pfe_ = pfe
        self.interval_ = ab
        self.fill_in_ = None
        self.operators_ = None
        self.systems_ = None
        if self.method == "krylov":
            return self

        shift = 0.0
        if pfe.kind == "chebyshev_exp":
            shift = (float(self.spectral_shift)
                     if self.spectral_shift is not None
                     else max(0.0, gershgorin_interval(A)[1]))
        B = A
        if pfe.argument_shift != 0.0:
            eye = sp.identity(n, dtype=A.dtype, format="csr")
            B = (A - pfe.argument_shift * eye).tocsr()
        c0, poles, coeffs = pfe.resolvent_view()
        self.B_ = B
        self.scale_ = math.exp(shift)
        self.c0_ = c0
        self.poles_ = poles + shift
        self.coeffs_ = coeffs

        if self.method == "direct":
            self.dense_B_ = to_dense_checked(B, self.dense_cap,
                                             what="direct evaluation")
            return self
        if self.method == "update":
            cfg = UpdateConfig(factorization=self.factorization,
                               tau=self.tau, tau_l=self.tau_l,
                               tau_z=self.tau_z, correction=self.correction,
                               m=self.m, seed=self.seed,
                               bandwidth_cap=self.bandwidth_cap)
            F, ops = _build_update_operators(B, pfe, self.poles_, shift, cfg)
            self.operators_ = ops
            self.fill_in_ = F.fill_in
        if self.method == "iterative" or (self.method == "update"
                                          and self.solver != "apply"):
            eye = sp.identity(n, dtype=B.dtype, format="csr")
            self.systems_ = [(eye * xi - B).tocsr() for xi in self.poles_]
        return self

    # -- application -----------------------------------------------------

    def transform(self, V):
        """Apply psi(A) to the vector or to each column of V."""
        if not hasattr(self, "pfe_"):
            raise ValueError("this MatrixFunction instance is not fitted; "
                             "call fit(A) first")
        V = np.asarray(V)
        single = V.ndim == 1
        W = V[:, None] if single else V
        if W.ndim != 2 or W.shape[0] != self.n_features_in_:
            raise ValueError(f"V has shape {V.shape}; expected "
                             f"({self.n_features_in_},) or "
                             f"({self.n_features_in_}, k)")

        stats = []
        if self.method == "krylov":
            op = as_operator(self.A_)
            cols = []
            for i in range(W.shape[1]):
                y, st = krylov_fun_action(op, np.ascontiguousarray(W[:, i]),
                                          psi=self.pfe_.psi,
                                          gamma_tol=self.tol,
                                          m_max=self.maxit)
                cols.append(y)
                stats.append(st)
            out = np.stack(cols, axis=1)
        else:
            dtype = _pole_system_dtype(self.poles_, W, self.B_)
            Wd = W.astype(dtype)
            real_input = not (np.iscomplexobj(self.B_.data)
                              or np.iscomplexobj(V))
            acc = np.zeros(W.shape, dtype=np.complex128)
            if self.method == "direct":
                eye = np.eye(self.n_features_in_)
                for j, (xi, cj) in enumerate(zip(self.poles_, self.coeffs_)):
                    try:
                        xj = np.linalg.solve(xi * eye - self.dense_B_, Wd)
                    except np.linalg.LinAlgError as exc:
                        raise SingularMatrixError(
                            f"pole j={j + 1}: dense solve singular "
                            f"at xi={xi}") from exc
                    acc += cj * xj
            elif self.solver == "apply":
                for P, cj in zip(self.operators_, self.coeffs_):
                    acc += cj * P.apply_columns(Wd)
            else:
                solve = cg if self.solver == "cg" else bicgstab
                for j, (xi, cj) in enumerate(zip(self.poles_, self.coeffs_)):
                    pre = (self.operators_[j].apply
                           if self.operators_ is not None else None)
                    op = as_operator(self.systems_[j], precondition=pre)
                    for i in range(W.shape[1]):
                        xj, st = solve(op, Wd[:, i], tol=self.tol,
                                       maxit=self.maxit)
                        acc[:, i] += cj * xj
                        stats.append(st)
            S = acc + self.c0_ * Wd
            out = _finalize(self.pfe_, self.B_, S, self.scale_, real_input)
        self.per_pole_stats_ = stats
        self.converged_ = all(st.converged for st in stats)
        return out[:, 0] if single else out
