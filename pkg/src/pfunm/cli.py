"""Benchmark command line: matrix-function experiments as tabular reports.

Subcommands
-----------
funm             psi(A) as a matrix; error against the dense oracle,
                 fill-in, and wall time per (n, method).
funmv            psi(A) v through per-pole solves, preconditioned by the
                 updated approximate inverse or not at all; ``--N-sweep``
                 instead reports norms of differences between results at
                 consecutive expansion orders.
sweep-tau-band   error grid over drop tolerance tau and correction band m.
seed-pole-study  one row per seed candidate (j=0 is the matrix itself,
                 j=1..N the poles) with mean iterations over all solves.
decay-probe      entrywise decay of inv(A) against the banded bound.

Reports serialize as CSV (canonical; metadata as ``#key=value`` header
lines) or as a Markdown table. Rerunning a command with identical flags
and seed reproduces every non-timing column bitwise; ``*_seconds``
columns are wall clock and carry no such promise. Figures are published
as the CSV point sets these commands emit.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 I/O or
file-format failure.
"""

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field

import numpy as np
import scipy
from scipy.sparse.csgraph import breadth_first_order

from . import __version__
from .driver import (
    FunmRequest,
    SolverConfig,
    UpdateConfig,
    dense_reference,
    eval_funm,
    eval_funm_action,
    select_seed_pole,
    spectral_interval,
)
from .exceptions import (
    BreakdownError,
    DomainError,
    FormatError,
    PfunmError,
    SingularMatrixError,
)
from .mmio import read_matrix_market
from .problems import ProblemSpec
from .rational import chebyshev_exp, contour_pfe, pade_log
from .shifted import decay_probe
from .validation import dense_cap

_CHEBYSHEV_ORDERS = (2, 4, 6, 8, 10, 12, 14, 16)


class UsageError(ValueError):
    """Bad or missing flags, detected after argparse."""


# ----------------------------------------------------------------------
# report container


@dataclass
class ExperimentReport:
    """Rows of one experiment plus the metadata needed to rerun it.

    ``columns`` fixes schema and order so golden files can diff against
    the output; rows are dicts and may leave columns unset (rendered
    empty). Metadata records the seed, package versions, and tolerances.
    """

    experiment: str
    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def to_csv(self):
        buf = io.StringIO()
        buf.write(f"#experiment={self.experiment}\n")
        for key, value in self.metadata.items():
            buf.write(f"#{key}={value}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(row.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_markdown(self):
        head = [f"experiment: {self.experiment}"]
        head += [f"{k}: {v}" for k, v in self.metadata.items()]
        lines = ["| " + " | ".join(self.columns) + " |",
                 "| " + " | ".join("---" for _ in self.columns) + " |"]
        for row in self.rows:
            cells = [_fmt(row.get(c)) for c in self.columns]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(head + [""] + lines) + "\n"


def _fmt(value):
    """Shortest round-trip text for a cell; None renders empty."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (complex, np.complexfloating)):
        return repr(complex(value))
    return str(value)


# ----------------------------------------------------------------------
# flag parsing helpers (argparse type= callables)


def _int_list(text):
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}")


def _str_list(text):
    return [p.strip() for p in text.split(",") if p.strip()]


def _interval_pair(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"expected two comma-separated endpoints, got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad interval {text!r}")
    if not 0.0 < a < b:
        raise argparse.ArgumentTypeError(
            f"interval must satisfy 0 < a < b, got ({a}, {b})")
    return a, b


def _order_span(text):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"expected LO:HI, got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad order span {text!r}")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(
            f"order span needs 1 <= LO <= HI, got {lo}:{hi}")
    return lo, hi


def _seed_value(text):
    return int(text) if text.lstrip("-").isdigit() else text


# ----------------------------------------------------------------------
# shared assembly


def _sizes(args):
    if args.config is not None or args.family == "matrix_market":
        return [None]
    if not args.n:
        raise UsageError("--n is required for generated families")
    return args.n


def _problem_spec(args, n):
    """Build a ProblemSpec from --config or from family flags."""
    if args.config is not None:
        with open(args.config) as fh:
            return ProblemSpec.from_config_text(fh.read())
    family = args.family
    if family is None:
        raise UsageError("pass --family or --config")
    if family == "matrix_market":
        if not args.file:
            raise UsageError("--family matrix_market needs --file PATH")
        return ProblemSpec(family=family, path=args.file)
    if family == "exp_decay":
        return ProblemSpec(family=family, n=n, alpha=args.alpha,
                           beta=args.beta,
                           keep_offdiagonals=args.keep_offdiagonals)
    if family == "poly_decay":
        return ProblemSpec(family=family, n=n)
    if family == "reaction_diffusion_3d":
        return ProblemSpec(family=family, n_per_dim=n, k=args.k,
                           fill_fraction=args.fill_fraction,
                           rng_seed=args.seed)
    return ProblemSpec(family=family, n_per_dim=n)


def _expansion_kind(args):
    kind = args.expansion
    if kind == "auto":
        kind = "chebyshev" if args.psi == "exp" else "contour"
    if kind == "chebyshev" and args.psi != "exp":
        raise UsageError("--expansion chebyshev only tabulates the "
                         "exponential; use contour for other functions")
    if kind == "pade" and args.psi != "log":
        raise UsageError("--expansion pade only covers the logarithm")
    return kind


def _csr_entry(M, i, j):
    lo, hi = M.indptr[i], M.indptr[i + 1]
    k = lo + np.searchsorted(M.indices[lo:hi], j)
    return M.data[k]


def _symmetric_similarity(A):
    """A symmetric matrix with the same spectrum as A, or None.

    A real matrix whose off-diagonal pattern is symmetric, whose paired
    entries satisfy a_ij*a_ji > 0, and whose ratios are consistent
    around cycles equals D S inv(D) for a positive diagonal D and the
    symmetric S with s_ij = sign(a_ij)*sqrt(a_ij*a_ji). Eigenvalues read
    off S are then exact without ever forming D, whose entries can span
    hundreds of orders of magnitude and whose conditioning makes plain
    nonsymmetric eigenvalue solves useless. The cycle consistency is
    checked, not assumed: log-ratios are integrated along a BFS tree and
    every off-tree edge must agree.
    """
    if np.iscomplexobj(A.data):
        return None
    n = A.shape[0]
    B = A.tocsr(copy=True)
    B.setdiag(0.0)
    B.eliminate_zeros()
    if B.nnz == 0:
        return np.diag(A.diagonal().astype(float))
    B.sort_indices()
    Bt = B.T.tocsr()
    Bt.sort_indices()
    if (B.indptr != Bt.indptr).any() or (B.indices != Bt.indices).any():
        return None
    P = B.multiply(Bt).tocsr()
    P.sort_indices()
    if P.nnz != B.nnz or (P.indices != B.indices).any():
        return None
    prod = P.data
    if prod.min() <= 0.0:
        return None
    # w_ij = log(a_ji/a_ij)/2, stored in B's entry order
    w = 0.5 * np.log(prod) - np.log(np.abs(B.data))
    W = B.copy()
    W.data = w
    d = np.zeros(n)
    seen = np.zeros(n, dtype=bool)
    for start in range(n):
        if seen[start]:
            continue
        order, pred = breadth_first_order(B, start, directed=False,
                                          return_predecessors=True)
        seen[order] = True
        for node in order[1:]:
            p = pred[node]
            d[node] = d[p] - _csr_entry(W, p, node)
    rows = np.repeat(np.arange(n), np.diff(B.indptr))
    resid = d[rows] - d[B.indices] - w
    if np.abs(resid).max() > 1e-8 * (1.0 + np.abs(d).max()):
        return None
    S = np.diag(A.diagonal().astype(float))
    S[rows, B.indices] = np.sign(B.data) * np.sqrt(prod)
    return S


def _interval_for(A, cap_flag, psi):
    """Positive spectral enclosure for the quadrature expansion.

    Gershgorin (with the power-iteration refinement) when it stays
    positive; below the dense cap a dense eigenvalue solve with one
    percent padding stands in, since benchmark matrices are small enough
    to afford the oracle anyway. Nonsymmetric input goes through the
    verified symmetrization when possible, because a plain eigenvalue
    solve on a matrix that is similar to a symmetric one through an
    extreme diagonal scaling returns spurious complex pairs. Past the
    dense cap the caller must supply ``--interval``.
    """
    try:
        return spectral_interval(A)
    except DomainError:
        pass
    n = A.shape[0]
    if n > dense_cap(cap_flag):
        raise DomainError(
            "no cheap positive enclosure of the spectrum at this size; "
            "pass --interval A,B")
    S = _symmetric_similarity(A)
    if S is not None:
        w = np.linalg.eigvalsh(S)
        lo, hi = float(w[0]), float(w[-1])
    else:
        Ad = A.toarray()
        scale = max(np.abs(Ad).max(), 1.0)
        if np.allclose(Ad, Ad.conj().T, rtol=0.0, atol=1e-13 * scale):
            w = np.linalg.eigvalsh(Ad)
            lo, hi = float(w[0]), float(w[-1])
        else:
            w = np.linalg.eigvals(Ad)
            if np.abs(w.imag).max() > 1e-8 * max(np.abs(w).max(), 1.0):
                raise DomainError(
                    "complex spectrum; the quadrature expansion needs a "
                    "real positive interval (pass --interval)")
            lo, hi = float(w.real.min()), float(w.real.max())
    if lo <= 0.0:
        raise DomainError(
            f"spectrum reaches down to {lo:.6g}; psi={psi} over a "
            "quadrature expansion needs 0 < a < b")
    return 0.99 * lo, 1.01 * hi


def _build_pfe(kind, psi, N, interval):
    if kind == "chebyshev":
        return chebyshev_exp(N)
    if kind == "pade":
        return pade_log(N)
    a, b = interval
    return contour_pfe(psi, a, b, N)


def _resolve_interval(args, kind, A):
    if kind != "contour":
        return None
    return args.interval or _interval_for(A, args.dense_cap, args.psi)


def _update_config(args, tau=None, m=None, bandwidth_cap=None):
    return UpdateConfig(
        factorization=args.factorization,
        tau=args.tau if tau is None else tau,
        tau_l=args.tau_l if tau is None else tau,
        tau_z=args.tau_z if tau is None else tau,
        correction=args.correction,
        m=args.m if m is None else m,
        seed=args.seed_pole,
        bandwidth_cap=(args.bandwidth_cap if bandwidth_cap is None
                       else bandwidth_cap),
    )


def _solver_config(args):
    return SolverConfig(solver=args.solver, tol=args.tol, maxit=args.maxit)


def _make_vector(spec, n):
    if spec == "ones":
        return np.ones(n)
    if spec == "normalized-index":
        v = np.arange(1, n + 1, dtype=float)
        return v / np.linalg.norm(v)
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        if path.endswith(".mtx"):
            v = np.asarray(read_matrix_market(path).todense()).ravel()
        else:
            v = np.loadtxt(path, dtype=float).ravel()
        if v.size != n:
            raise FormatError(
                f"vector file holds {v.size} entries, matrix has {n} rows")
        return v
    raise UsageError("--v must be ones, normalized-index, or file:PATH")


def _relative_error(value, A, psi, cap_flag, v=None):
    """Error against the dense oracle, or None past the dense cap."""
    try:
        ref = dense_reference(A, psi, cap=cap_flag)
    except ValueError:
        return None
    if v is not None:
        ref = ref @ v
    return float(np.linalg.norm(value - ref) / np.linalg.norm(ref))


def _iteration_summary(stats):
    iters = [float(st.iterations) for st in stats]
    return sum(iters) / len(iters), max(iters)


def _metadata(args):
    md = {
        "seed": args.seed,
        "versions": (f"pfunm {__version__}, numpy {np.__version__}, "
                     f"scipy {scipy.__version__}"),
    }
    for name in ("tau", "tau_l", "tau_z", "tol"):
        if hasattr(args, name):
            md[name] = getattr(args, name)
    if args.dense_cap is not None:
        md["dense_cap"] = args.dense_cap
    return md


# ----------------------------------------------------------------------
# subcommands


_FUNM_COLUMNS = ["family", "n", "alpha", "beta", "psi", "N", "method",
                 "tau", "fill_in", "rel_error", "total_seconds"]


def cmd_funm(args):
    for method in args.methods:
        if method not in ("update", "direct"):
            raise UsageError(
                f"funm methods are update/direct, got {method!r}")
    report = ExperimentReport("funm", _FUNM_COLUMNS, metadata=_metadata(args))
    kind = _expansion_kind(args)
    for n in _sizes(args):
        spec = _problem_spec(args, n)
        A = spec.build()
        pfe = _build_pfe(kind, args.psi, args.N,
                         _resolve_interval(args, kind, A))
        desc = spec.describe()
        for method in args.methods:
            res = eval_funm(FunmRequest(
                A=A, pfe=pfe, method=method,
                update_config=(_update_config(args) if method == "update"
                               else None),
                dense_cap=args.dense_cap))
            report.rows.append({
                "family": spec.family, "n": A.shape[0],
                "alpha": desc.get("alpha"), "beta": desc.get("beta"),
                "psi": args.psi, "N": args.N, "method": method,
                "tau": args.tau if method == "update" else None,
                "fill_in": res.fill_in,
                "rel_error": _relative_error(res.value, A, args.psi,
                                             args.dense_cap),
                "total_seconds": res.total_seconds,
            })
    return report


_FUNMV_COLUMNS = ["family", "n", "alpha", "beta", "psi", "N", "prec",
                  "solver", "tol", "v", "mean_iterations", "max_iterations",
                  "converged", "rel_error", "total_seconds"]


def cmd_funmv(args):
    if args.N_sweep is not None:
        return _funmv_nsweep(args)
    if args.solver == "apply" and args.prec != "update":
        raise UsageError("--solver apply needs --prec update")
    report = ExperimentReport("funmv", _FUNMV_COLUMNS,
                              metadata=_metadata(args))
    kind = _expansion_kind(args)
    method = "update" if args.prec == "update" else "iterative"
    for n in _sizes(args):
        spec = _problem_spec(args, n)
        A = spec.build()
        size = A.shape[0]
        v = _make_vector(args.v, size)
        pfe = _build_pfe(kind, args.psi, args.N,
                         _resolve_interval(args, kind, A))
        res = eval_funm_action(FunmRequest(
            A=A, pfe=pfe, method=method,
            update_config=(_update_config(args) if method == "update"
                           else None),
            solver_config=_solver_config(args), v=v,
            dense_cap=args.dense_cap))
        mean_it, max_it = _iteration_summary(res.per_pole_stats)
        desc = spec.describe()
        report.rows.append({
            "family": spec.family, "n": size,
            "alpha": desc.get("alpha"), "beta": desc.get("beta"),
            "psi": args.psi, "N": args.N, "prec": args.prec,
            "solver": args.solver, "tol": args.tol, "v": args.v,
            "mean_iterations": mean_it, "max_iterations": max_it,
            "converged": res.converged,
            "rel_error": _relative_error(res.value, A, args.psi,
                                         args.dense_cap, v=v),
            "total_seconds": res.total_seconds,
        })
    return report


_NSWEEP_COLUMNS = ["family", "n", "psi", "prec", "N", "delta_norm",
                   "total_seconds"]


def _funmv_nsweep(args):
    """Convergence-in-N study: ||y_N - y_prev|| per consecutive order."""
    if args.solver == "apply" and args.prec != "update":
        raise UsageError("--solver apply needs --prec update")
    report = ExperimentReport("funmv-nsweep", _NSWEEP_COLUMNS,
                              metadata=_metadata(args))
    kind = _expansion_kind(args)
    lo, hi = args.N_sweep
    if kind == "chebyshev":
        orders = [N for N in _CHEBYSHEV_ORDERS if lo <= N <= hi]
    else:
        orders = list(range(lo, hi + 1))
    if not orders:
        raise UsageError(f"no usable expansion orders in {lo}:{hi}")
    method = "update" if args.prec == "update" else "iterative"
    for n in _sizes(args):
        spec = _problem_spec(args, n)
        A = spec.build()
        size = A.shape[0]
        v = _make_vector(args.v, size)
        interval = _resolve_interval(args, kind, A)
        prev = None
        for N in orders:
            pfe = _build_pfe(kind, args.psi, N, interval)
            res = eval_funm_action(FunmRequest(
                A=A, pfe=pfe, method=method,
                update_config=(_update_config(args) if method == "update"
                               else None),
                solver_config=_solver_config(args), v=v,
                dense_cap=args.dense_cap))
            delta = (None if prev is None
                     else float(np.linalg.norm(res.value - prev)))
            prev = res.value
            report.rows.append({
                "family": spec.family, "n": size, "psi": args.psi,
                "prec": args.prec, "N": N, "delta_norm": delta,
                "total_seconds": res.total_seconds,
            })
    return report


_SWEEP_COLUMNS = ["family", "n", "alpha", "beta", "psi", "N", "tau", "m",
                  "fill_in", "rel_error", "total_seconds"]


def cmd_sweep_tau_band(args):
    report = ExperimentReport("sweep-tau-band", _SWEEP_COLUMNS,
                              metadata=_metadata(args))
    kind = _expansion_kind(args)
    cap = max(args.bandwidth_cap, 2 * max(args.m_list) + 1)
    for n in _sizes(args):
        spec = _problem_spec(args, n)
        A = spec.build()
        pfe = _build_pfe(kind, args.psi, args.N,
                         _resolve_interval(args, kind, A))
        desc = spec.describe()
        for tau in args.tau_list:
            for m in args.m_list:
                res = eval_funm(FunmRequest(
                    A=A, pfe=pfe, method="update",
                    update_config=_update_config(args, tau=tau, m=m,
                                                 bandwidth_cap=cap),
                    dense_cap=args.dense_cap))
                report.rows.append({
                    "family": spec.family, "n": A.shape[0],
                    "alpha": desc.get("alpha"), "beta": desc.get("beta"),
                    "psi": args.psi, "N": args.N, "tau": tau, "m": m,
                    "fill_in": res.fill_in,
                    "rel_error": _relative_error(res.value, A, args.psi,
                                                 args.dense_cap),
                    "total_seconds": res.total_seconds,
                })
    return report


_SEED_COLUMNS = ["family", "n", "psi", "N", "factorization", "seed_j",
                 "seed_pole", "fill_in", "mean_iterations", "max_iterations",
                 "converged", "note", "total_seconds"]


def cmd_seed_pole_study(args):
    """Try every seed candidate; failures become rows, not aborts."""
    report = ExperimentReport("seed-pole-study", _SEED_COLUMNS,
                              metadata=_metadata(args))
    kind = _expansion_kind(args)
    for n in _sizes(args):
        spec = _problem_spec(args, n)
        A = spec.build()
        size = A.shape[0]
        v = _make_vector(args.v, size)
        pfe = _build_pfe(kind, args.psi, args.N,
                         _resolve_interval(args, kind, A))
        _, poles, _ = pfe.resolvent_view()
        for j in range(len(poles) + 1):
            shift = select_seed_pole(pfe, j)
            row = {
                "family": spec.family, "n": size, "psi": args.psi,
                "N": args.N, "factorization": args.factorization,
                "seed_j": j,
                "seed_pole": ("matrix-itself" if j == 0
                              else _fmt(complex(shift))),
                "converged": False, "note": "",
            }
            cfg = _update_config(args)
            cfg.seed = j
            try:
                res = eval_funm_action(FunmRequest(
                    A=A, pfe=pfe, method="update", update_config=cfg,
                    solver_config=_solver_config(args), v=v,
                    dense_cap=args.dense_cap))
            except (BreakdownError, SingularMatrixError,
                    ValueError) as exc:
                row["note"] = str(exc)
            else:
                mean_it, max_it = _iteration_summary(res.per_pole_stats)
                row.update(fill_in=res.fill_in, mean_iterations=mean_it,
                           max_iterations=max_it, converged=res.converged,
                           total_seconds=res.total_seconds)
            report.rows.append(row)
    return report


_DECAY_COLUMNS = ["family", "n", "bandwidth", "kappa2", "beta", "beta_tilde",
                  "c", "empirical_slope", "bound_holds", "applicable",
                  "warning"]


def cmd_decay_probe(args):
    report = ExperimentReport("decay-probe", _DECAY_COLUMNS,
                              metadata=_metadata(args))
    for n in _sizes(args):
        spec = _problem_spec(args, n)
        A = spec.build()
        row = {"family": spec.family}
        row.update(decay_probe(A, dense_cap=args.dense_cap).row())
        report.rows.append(row)
    return report


# ----------------------------------------------------------------------
# parser


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="pfunm",
        description="Matrix-function benchmark experiments; see each "
                    "subcommand's --help for its flags.")
    parser.add_argument("--version", action="version",
                        version=f"pfunm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="command")

    problem = argparse.ArgumentParser(add_help=False)
    g = problem.add_argument_group("problem selection")
    g.add_argument("--family",
                   choices=("exp_decay", "poly_decay",
                            "reaction_diffusion_3d",
                            "advection_diffusion_2d", "matrix_market"))
    g.add_argument("--config", metavar="PATH",
                   help="problem description as key=value lines "
                        "(replaces the family flags)")
    g.add_argument("--file", metavar="PATH",
                   help="Matrix Market file for --family matrix_market")
    g.add_argument("--n", type=_int_list, metavar="N[,N...]",
                   help="matrix sizes; grid points per dimension for the "
                        "PDE families (rows report the resulting size)")
    g.add_argument("--alpha", type=float, default=1.0,
                   help="lower-triangle decay rate (exp_decay)")
    g.add_argument("--beta", type=float, default=1.0,
                   help="upper-triangle decay rate (exp_decay)")
    g.add_argument("--keep-offdiagonals", type=int, default=15)
    g.add_argument("--k", type=float, default=1e-8,
                   help="reaction scale (reaction_diffusion_3d)")
    g.add_argument("--fill-fraction", type=float, default=0.001)
    g.add_argument("--seed", type=int, default=0,
                   help="RNG seed for randomized families; recorded in "
                        "the report metadata")
    g.add_argument("--dense-cap", type=int, default=None,
                   help="largest n the dense oracle may densify "
                        "(default 2000, or PFUNM_DENSE_CAP)")
    g.add_argument("--output", default="-", metavar="PATH",
                   help="report destination (default stdout)")
    g.add_argument("--format", choices=("csv", "markdown"), default="csv")

    function = argparse.ArgumentParser(add_help=False)
    g = function.add_argument_group("function and expansion")
    g.add_argument("--psi", default="exp",
                   help="exp, log, sqrt, or power:P")
    g.add_argument("--N", type=int, default=8,
                   help="expansion order (number of poles)")
    g.add_argument("--expansion", default="auto",
                   choices=("auto", "chebyshev", "pade", "contour"),
                   help="auto picks chebyshev for exp, contour otherwise")
    g.add_argument("--interval", type=_interval_pair, metavar="A,B",
                   help="spectral enclosure for the contour expansion "
                        "(otherwise estimated)")

    update = argparse.ArgumentParser(add_help=False)
    g = update.add_argument_group("seed factorization and updates")
    g.add_argument("--factorization", default="auto",
                   choices=("auto", "ainv", "invt"))
    g.add_argument("--tau", type=float, default=0.1,
                   help="drop tolerance for the inverse factors")
    g.add_argument("--tau-l", type=float, default=1e-3)
    g.add_argument("--tau-z", type=float, default=1e-3)
    g.add_argument("--correction", default="auto",
                   choices=("auto", "diagonal_closed_form",
                            "product_of_extracts",
                            "exact_product_then_extract"))
    g.add_argument("--m", type=int, default=None,
                   help="correction half-bandwidth")
    g.add_argument("--seed-pole", type=_seed_value, default="matrix_itself",
                   help="seed strategy name or pole index (0 = the matrix "
                        "itself)")
    g.add_argument("--bandwidth-cap", type=int, default=50)

    solver = argparse.ArgumentParser(add_help=False)
    g = solver.add_argument_group("iterative solver")
    g.add_argument("--solver", default="bicgstab",
                   choices=("cg", "bicgstab", "apply"))
    g.add_argument("--tol", type=float, default=1e-9)
    g.add_argument("--maxit", type=int, default=1000)
    g.add_argument("--v", default="ones", metavar="SPEC",
                   help="ones, normalized-index, or file:PATH")

    p = sub.add_parser("funm", parents=[problem, function, update],
                       help="psi(A) as a matrix: error, fill-in, time")
    p.add_argument("--methods", type=_str_list, default=["update", "direct"],
                   metavar="M[,M...]",
                   help="any of update,direct (default both)")
    p.set_defaults(run=cmd_funm)

    p = sub.add_parser("funmv", parents=[problem, function, update, solver],
                       help="psi(A) v by per-pole solves")
    p.add_argument("--prec", choices=("update", "none"), default="update",
                   help="precondition with the updated factors or not")
    p.add_argument("--N-sweep", type=_order_span, default=None,
                   metavar="LO:HI",
                   help="sweep the expansion order, reporting "
                        "consecutive-difference norms")
    p.set_defaults(run=cmd_funmv)

    p = sub.add_parser("sweep-tau-band", parents=[problem, function, update],
                       help="error grid over drop tolerance and "
                            "correction band")
    p.add_argument("--tau-list", type=_float_list, required=True,
                   metavar="T[,T...]")
    p.add_argument("--m-list", type=_int_list, required=True,
                   metavar="M[,M...]")
    p.set_defaults(run=cmd_sweep_tau_band, N=16)

    p = sub.add_parser("seed-pole-study",
                       parents=[problem, function, update, solver],
                       help="compare seed choices: matrix itself vs "
                            "each pole")
    p.set_defaults(run=cmd_seed_pole_study)

    p = sub.add_parser("decay-probe", parents=[problem],
                       help="inverse-entry decay against the banded bound")
    p.set_defaults(run=cmd_decay_probe)

    return parser


def _emit(report, args):
    text = (report.to_markdown() if args.format == "markdown"
            else report.to_csv())
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        report = args.run(args)
        _emit(report, args)
    except ValueError as exc:
        print(f"pfunm: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"pfunm: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"pfunm: {exc}", file=sys.stderr)
        return 4
    except PfunmError as exc:
        print(f"pfunm: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
