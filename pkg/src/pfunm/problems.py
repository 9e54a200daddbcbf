"""Deterministic generators for the benchmark matrix families.

Four families are built here: banded exponential-decay Toeplitz matrices,
dense polynomial-decay Toeplitz matrices, a 3D reaction-diffusion operator
(7-point stencil plus a sparse random reaction term), and a 2D variable-
coefficient advection-diffusion operator (5-point flux-form diffusion plus
sign-dispatched first-order upwind convection). All randomness flows
through :class:`SplitMix64`, so every generator is a pure function of its
parameters and produces bitwise-identical output on any platform.

Sign conventions. The two PDE operators generate dissipative semigroups:

* reaction-diffusion: the diffusion block is ``k * discrete_laplacian``
  with diagonal ``-6k/h^2`` and neighbor entries ``+k/h^2`` (symmetric
  negative semidefinite), so ``exp(t A)`` stays bounded;
* advection-diffusion: the convection terms ``+ t_p(x_p) du/dx_p`` have
  positive coefficients, so their characteristics run toward the negative
  axes and the upwind one-sided difference is the *forward* one. The code
  dispatches on the sign of the coefficient at each node (negative
  coefficients would use backward differences), keeping the semidiscrete
  operator stable in the convection-dominated x-direction.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .mmio import read_matrix_market

__all__ = [
    "SplitMix64",
    "gen_exp_decay",
    "gen_poly_decay",
    "gen_reaction_diffusion_3d",
    "gen_advection_diffusion_2d",
    "ProblemSpec",
]

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit splitmix generator; identical stream on every platform.

    State advances by the golden-ratio increment and each output is the
    standard 64-bit mix of the new state. ``uniform()`` maps the top 53
    bits onto [0, 1).
    """

    _GAMMA = 0x9E3779B97F4A7C15
    _MIX1 = 0xBF58476D1CE4E5B9
    _MIX2 = 0x94D049BB133111EB

    def __init__(self, seed):
        self._state = int(seed) & _MASK64

    def next_u64(self):
        self._state = (self._state + self._GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * self._MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * self._MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self):
        """Double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def integers(self, bound):
        """Unbiased integer in [0, bound) via rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 64) % bound
        while True:
            u = self.next_u64()
            if u >= threshold:
                return u % bound


def gen_exp_decay(n, alpha, beta, keep_offdiagonals=15):
    """Banded Toeplitz matrix with exponentially decaying entries.

    Entry (i, j) is ``exp(-alpha*(i-j))`` below the diagonal and
    ``exp(-beta*(j-i))`` above it (1 on the diagonal), truncated to
    ``keep_offdiagonals`` off-diagonals on each side.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if keep_offdiagonals < 0:
        raise ValueError("keep_offdiagonals must be >= 0")
    m = min(int(keep_offdiagonals), n - 1)
    offsets = list(range(-m, m + 1))
    diags = []
    for d in offsets:
        if d < 0:
            diags.append(np.full(n + d, np.exp(alpha * d)))
        elif d > 0:
            diags.append(np.full(n - d, np.exp(-beta * d)))
        else:
            diags.append(np.ones(n))
    A = sp.diags(diags, offsets, shape=(n, n), format="csr")
    A.sort_indices()
    return A


def gen_poly_decay(n):
    """Dense symmetric Toeplitz matrix a_ij = 1 / (2 + (i-j)^2), stored CSR."""
    if n < 1:
        raise ValueError("n must be >= 1")
    first = 1.0 / (2.0 + np.arange(n, dtype=np.float64) ** 2)
    idx = np.arange(n)
    dense = first[np.abs(idx[:, None] - idx[None, :])]
    A = sp.csr_matrix(dense)
    A.sort_indices()
    return A


def _laplacian_3d(n_per_dim, k):
    """k times the 7-point Laplacian with Dirichlet boundaries (order n^3)."""
    h = 1.0 / (n_per_dim + 1)
    one_d = sp.diags(
        [np.ones(n_per_dim - 1), -2.0 * np.ones(n_per_dim), np.ones(n_per_dim - 1)],
        [-1, 0, 1],
    )
    eye = sp.identity(n_per_dim)
    lap = (
        sp.kron(sp.kron(eye, eye), one_d)
        + sp.kron(sp.kron(eye, one_d), eye)
        + sp.kron(sp.kron(one_d, eye), eye)
    )
    return (k / h**2) * lap.tocsr()


def gen_reaction_diffusion_3d(n_per_dim, k=1e-8, fill_fraction=0.001,
                              rng_seed=0, max_size=1_000_000):
    """3D reaction-diffusion operator: dissipative Laplacian plus sparse G.

    The diffusion block is ``k`` times the 7-point discrete Laplacian on an
    ``n_per_dim^3`` Dirichlet grid (diagonal -6k/h^2, neighbors +k/h^2,
    symmetric negative semidefinite). G holds ``ceil(fill_fraction * n^2)``
    entries (n = n_per_dim^3) at distinct seeded-random positions with
    uniform(0, 1) values.
    """
    if n_per_dim < 2:
        raise ValueError("n_per_dim must be >= 2")
    n = n_per_dim**3
    if n > max_size:
        raise ValueError(
            f"problem size n = {n} exceeds max_size = {max_size}")
    A = _laplacian_3d(n_per_dim, k)

    nnz_g = int(np.ceil(fill_fraction * float(n) * float(n)))
    rng = SplitMix64(rng_seed)
    taken = set()
    rows = np.empty(nnz_g, dtype=np.int64)
    cols = np.empty(nnz_g, dtype=np.int64)
    vals = np.empty(nnz_g, dtype=np.float64)
    filled = 0
    while filled < nnz_g:
        pos = rng.integers(n * n)
        if pos in taken:
            continue
        taken.add(pos)
        rows[filled], cols[filled] = divmod(pos, n)
        vals[filled] = rng.uniform()
        filled += 1
    G = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()

    out = (A + G).tocsr()
    out.sum_duplicates()
    out.sort_indices()
    return out


def gen_advection_diffusion_2d(n_per_dim):
    """2D advection-diffusion operator on the unit square (order n^2).

    Discretizes ``(k1 u_x)_x + (k2(y) u_y)_y + t1(x) u_x + t2(y) u_y`` with
    homogeneous Dirichlet boundaries on an ``n_per_dim x n_per_dim``
    interior grid, mesh width ``h = 1/(n_per_dim+1)``. Diffusion uses the
    conservative 5-point form with face-centered coefficients; convection
    uses first-order upwind differences chosen by the sign of the
    coefficient at the node (forward for positive values; see module
    docstring). Unknowns are ordered x-fastest:
    ``index = (i-1) + (j-1)*n_per_dim`` for the node (x_i, y_j).
    """
    if n_per_dim < 2:
        raise ValueError("n_per_dim must be >= 2")
    N = n_per_dim
    h = 1.0 / (N + 1)
    x = (np.arange(N) + 1) * h
    y = (np.arange(N) + 1) * h

    k1 = 1e-2
    k2 = lambda t: 2.0 + 1e-5 * np.cos(5.0 * np.pi * t)
    t1 = lambda t: 1.0 + 0.15 * np.sin(10.0 * np.pi * t)
    t2 = lambda t: 1.0 + 0.45 * np.sin(20.0 * np.pi * t)

    rows, cols, vals = [], [], []

    def add(r, c, v):
        rows.append(r)
        cols.append(c)
        vals.append(v)

    # Assemble with plain loops; grids here are tiny (N <= a few dozen).
    for j in range(N):
        k2_n = k2(y[j] + 0.5 * h)
        k2_s = k2(y[j] - 0.5 * h)
        c2 = t2(y[j])
        for i in range(N):
            g = i + j * N
            c1 = t1(x[i])
            diag = 0.0

            # x-diffusion, constant coefficient
            diag -= 2.0 * k1 / h**2
            if i > 0:
                add(g, g - 1, k1 / h**2)
            if i < N - 1:
                add(g, g + 1, k1 / h**2)

            # y-diffusion, face-centered coefficients
            diag -= (k2_n + k2_s) / h**2
            if j > 0:
                add(g, g - N, k2_s / h**2)
            if j < N - 1:
                add(g, g + N, k2_n / h**2)

            # upwind convection, sign-dispatched per node
            if c1 >= 0:
                diag -= c1 / h
                if i < N - 1:
                    add(g, g + 1, c1 / h)
            else:
                diag += c1 / h
                if i > 0:
                    add(g, g - 1, -c1 / h)
            if c2 >= 0:
                diag -= c2 / h
                if j < N - 1:
                    add(g, g + N, c2 / h)
            else:
                diag += c2 / h
                if j > 0:
                    add(g, g - N, -c2 / h)

            add(g, g, diag)

    A = sp.coo_matrix((vals, (rows, cols)), shape=(N * N, N * N)).tocsr()
    A.sum_duplicates()
    A.sort_indices()
    return A


_FAMILIES = {
    "exp_decay",
    "poly_decay",
    "reaction_diffusion_3d",
    "advection_diffusion_2d",
    "matrix_market",
}


@dataclass(frozen=True)
class ProblemSpec:
    """Hashable description of a benchmark matrix; `build()` materializes it."""

    family: str
    n: int = 0
    alpha: float = 1.0
    beta: float = 1.0
    keep_offdiagonals: int = 15
    n_per_dim: int = 0
    k: float = 1e-8
    fill_fraction: float = 0.001
    rng_seed: int = 0
    path: str = ""

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(
                f"unknown family {self.family!r}; choose from {sorted(_FAMILIES)}")

    def build(self):
        if self.family == "exp_decay":
            return gen_exp_decay(self.n, self.alpha, self.beta,
                                 self.keep_offdiagonals)
        if self.family == "poly_decay":
            return gen_poly_decay(self.n)
        if self.family == "reaction_diffusion_3d":
            return gen_reaction_diffusion_3d(
                self.n_per_dim, k=self.k,
                fill_fraction=self.fill_fraction, rng_seed=self.rng_seed)
        if self.family == "advection_diffusion_2d":
            return gen_advection_diffusion_2d(self.n_per_dim)
        return read_matrix_market(self.path)

    def describe(self):
        """Stable parameter summary used in report rows."""
        if self.family == "exp_decay":
            return {"family": self.family, "n": self.n, "alpha": self.alpha,
                    "beta": self.beta}
        if self.family == "poly_decay":
            return {"family": self.family, "n": self.n}
        if self.family == "reaction_diffusion_3d":
            return {"family": self.family, "n": self.n_per_dim**3,
                    "k": self.k, "rng_seed": self.rng_seed}
        if self.family == "advection_diffusion_2d":
            return {"family": self.family, "n": self.n_per_dim**2}
        return {"family": self.family, "path": self.path}

    @classmethod
    def from_config_text(cls, text):
        """Parse key=value lines (blank lines and #-comments skipped)."""
        kwargs = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in cls.__dataclass_fields__:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
            typ = cls.__dataclass_fields__[key].type
            name = typ.__name__ if isinstance(typ, type) else str(typ)
            if name == "int":
                kwargs[key] = int(value)
            elif name == "float":
                kwargs[key] = float(value)
            else:
                kwargs[key] = value
        if "family" not in kwargs:
            raise ValueError("config is missing the 'family' key")
        return cls(**kwargs)
