"""Matrix functions through partial fraction expansions.

The package evaluates psi(A) and psi(A) v for sparse A by summing shifted
resolvents.  Per-pole solves share work through approximate inverse factors
of a single seed matrix, updated cheaply from pole to pole; Krylov and dense
paths cover the cases where that structure is absent.

Entry points:

* :func:`eval_funm` / :func:`eval_funm_action` -- one-shot evaluation from a
  :class:`FunmRequest`.
* :class:`MatrixFunction` -- estimator-style facade (``fit`` factors once,
  ``transform`` applies to many vectors).
* ``pfunm`` console script -- benchmark experiments as CSV/Markdown reports.
"""

from .exceptions import (
    PfunmError,
    NumericalError,
    SingularMatrixError,
    BreakdownError,
    DomainError,
    FormatError,
)
from .sparsekit import (
    BandedMatrix,
    band_extract,
    BandedLU,
    banded_lu,
    banded_solve,
    fill_in,
)
from .mmio import read_matrix_market, write_matrix_market
from .problems import (
    SplitMix64,
    gen_exp_decay,
    gen_poly_decay,
    gen_reaction_diffusion_3d,
    gen_advection_diffusion_2d,
    ProblemSpec,
)
from .rational import (
    PartialFractionExpansion,
    EllipticValues,
    chebyshev_exp,
    pade_log,
    contour_pfe,
    elliptic_k,
    jacobi_elliptic,
    eval_scalar,
    scalar_function,
    pfe_to_json,
    pfe_from_json,
)
from .factorizations import (
    IlutFactors,
    InverseFactors,
    ilut,
    invert_sparsify_triangular,
    ainv,
    seed_preconditioner,
    save_factors,
    load_factors,
)
from .shifted import (
    CorrectionMatrix,
    ShiftedApproxInverse,
    compute_correction,
    build_shifted_inverse,
    apply_shifted_inverse,
    DecayReport,
    decay_probe,
)
from .krylov import (
    Operator,
    IterStats,
    ArnoldiDecomposition,
    as_operator,
    cg,
    bicgstab,
    arnoldi,
    krylov_fun_action,
    dense_fun,
)
from .driver import (
    UpdateConfig,
    SolverConfig,
    FunmRequest,
    FunmResult,
    select_seed_pole,
    gershgorin_interval,
    power_extreme,
    spectral_interval,
    dense_reference,
    eval_funm,
    eval_funm_action,
    error_estimate,
)
from .estimator import MatrixFunction

__version__ = "0.1.0"

__all__ = [
    "PfunmError",
    "NumericalError",
    "SingularMatrixError",
    "BreakdownError",
    "DomainError",
    "FormatError",
    "BandedMatrix",
    "band_extract",
    "BandedLU",
    "banded_lu",
    "banded_solve",
    "fill_in",
    "read_matrix_market",
    "write_matrix_market",
    "SplitMix64",
    "gen_exp_decay",
    "gen_poly_decay",
    "gen_reaction_diffusion_3d",
    "gen_advection_diffusion_2d",
    "ProblemSpec",
    "PartialFractionExpansion",
    "EllipticValues",
    "chebyshev_exp",
    "pade_log",
    "contour_pfe",
    "elliptic_k",
    "jacobi_elliptic",
    "eval_scalar",
    "scalar_function",
    "pfe_to_json",
    "pfe_from_json",
    "IlutFactors",
    "InverseFactors",
    "ilut",
    "invert_sparsify_triangular",
    "ainv",
    "seed_preconditioner",
    "save_factors",
    "load_factors",
    "CorrectionMatrix",
    "ShiftedApproxInverse",
    "compute_correction",
    "build_shifted_inverse",
    "apply_shifted_inverse",
    "DecayReport",
    "decay_probe",
    "Operator",
    "IterStats",
    "ArnoldiDecomposition",
    "as_operator",
    "cg",
    "bicgstab",
    "arnoldi",
    "krylov_fun_action",
    "dense_fun",
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
    "MatrixFunction",
    "__version__",
]
