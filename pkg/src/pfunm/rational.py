"""Partial-fraction expansions of scalar functions used on matrices.

Three constructions are provided:

* :func:`chebyshev_exp` - the near-best uniform rational approximant of
  the exponential on (-inf, 0], degrees 2..16, from an embedded
  high-precision table. Packaged so that
  ``f(A) = c0*I + sum_j coeffs[j] * inv(poles[j]*I - A)`` approximates
  ``exp(A)`` when the spectrum of A lies in (-inf, 0]; equivalently the
  scalar form at ``-x`` approximates ``exp(-x)`` for x >= 0.
* :func:`pade_log` - the diagonal Pade approximant of log(1+x) in its
  partial-fraction form ``x * sum_j alpha_j / (1 + beta_j x)`` with
  Gauss-Legendre weights/nodes on [0, 1].
* :func:`contour_pfe` - midpoint quadrature of a contour integral on a
  conformally mapped circle around a real spectral interval [a, b],
  yielding ``f(x) = gamma * x * Im sum_j c_j / (xi_j - x)`` for functions
  analytic off (-inf, 0] (log, fractional powers, ...). Error decays like
  exp(-pi^2 N / (log(b/a) + 3)).

Supporting kernels: complete elliptic integrals via the arithmetic-
geometric mean and Jacobi elliptic functions on the complex strip
|Im t| < K(k'), plus scalar evaluation and JSON round-tripping of the
expansions.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._cheb_table import TABLE as _CHEB_TABLE
from .exceptions import DomainError

__all__ = [
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
]

_KINDS = {"chebyshev_exp", "pade_log", "contour"}
_MULTIPLIERS = {"none", "left_A", "left_A_imag"}


# ----------------------------------------------------------------------
# elliptic kernels


def elliptic_k(k):
    """Complete elliptic integrals (K(k), K(k')) by the AGM, k in [0, 1).

    Relative accuracy is at the 1e-15 level; K(0) = pi/2 and K'(0) = inf.
    """
    if not 0 <= k < 1:
        raise DomainError(f"modulus k must lie in [0, 1), got {k}")
    kp = math.sqrt((1.0 - k) * (1.0 + k))

    def agm(x, y):
        for _ in range(60):
            if abs(x - y) <= 4e-16 * abs(x):
                break
            x, y = 0.5 * (x + y), math.sqrt(x * y)
        return 0.5 * (x + y)

    K = math.pi / 2.0 / agm(1.0, kp) if kp > 0 else math.inf
    Kp = math.pi / 2.0 / agm(1.0, k) if k > 0 else math.inf
    return K, Kp


@dataclass
class EllipticValues:
    """Jacobi elliptic function values at one or more points."""

    sn: np.ndarray
    cn: np.ndarray
    dn: np.ndarray
    k: float
    K: float
    Kprime: float


def _jacobi_real(x, m):
    """sn, cn, dn for real x and parameter m = k^2 via descending AGM.

    The phase recursion follows the classical arithmetic-geometric-mean
    scheme: run the AGM on (1, sqrt(1-m)), set phi_N = 2^N a_N x, and
    descend with sin(2 phi_{n-1} - phi_n) = (c_n / a_n) sin(phi_n).
    """
    x = np.asarray(x, dtype=np.float64)
    if m == 0.0:
        return np.sin(x), np.cos(x), np.ones_like(x)
    a, b, c = 1.0, math.sqrt(1.0 - m), math.sqrt(m)
    a_list, c_list = [a], [c]
    for _ in range(60):
        if abs(c) <= 4e-16 * abs(a):
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_list.append(a)
        c_list.append(c)
    n = len(a_list) - 1
    if n == 0:
        return np.sin(x), np.cos(x), np.ones_like(x)
    phi = (2.0**n) * a_list[n] * x
    for i in range(n, 0, -1):
        phi_prev = 0.5 * (phi + np.arcsin(np.clip(c_list[i] / a_list[i] * np.sin(phi),
                                                  -1.0, 1.0)))
        phi, phi_last = phi_prev, phi
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = cn / np.cos(phi_last - phi)
    return sn, cn, dn


def jacobi_elliptic(t, k):
    """Jacobi sn, cn, dn at real or complex t, modulus k in [0, 1).

    Complex arguments are handled through the addition formulas for
    t = x + iy, combining real-argument values at parameter m = k^2 with
    values at the complementary parameter 1 - m. Requires
    |Im t| < K(k') (the fundamental strip); outside it the formulas hit
    the poles of sn.
    """
    K, Kp = elliptic_k(k)
    m = k * k
    t = np.asarray(t)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)

    if np.iscomplexobj(t):
        y = np.imag(t)
        if np.any(np.abs(y) >= Kp):
            raise DomainError(
                f"imaginary part {np.max(np.abs(y)):.6g} outside the "
                f"fundamental strip |Im t| < K(k') = {Kp:.6g}")
        s, c, d = _jacobi_real(np.real(t), m)
        s1, c1, d1 = _jacobi_real(y, 1.0 - m)
        den = c1 * c1 + m * (s * s1) ** 2
        sn = (s * d1 + 1j * c * d * s1 * c1) / den
        cn = (c * c1 - 1j * s * d * s1 * d1) / den
        dn = (d * c1 * d1 - 1j * m * s * c * s1) / den
    else:
        sn, cn, dn = _jacobi_real(t, m)

    if scalar:
        sn, cn, dn = sn[0], cn[0], dn[0]
    return EllipticValues(sn=sn, cn=cn, dn=dn, k=k, K=K, Kprime=Kp)


# ----------------------------------------------------------------------
# expansion container


@dataclass
class PartialFractionExpansion:
    """Coefficients of f(x) = multiplier-form over resolvent terms.

    ``multiplier`` selects how the terms assemble:

    * ``"none"``:        f(x) = c0 + sum_j coeffs[j] / (poles[j] - x)
    * ``"left_A"``:      f(x) = x * sum_j alphas[j] / (1 + betas[j] * x)
    * ``"left_A_imag"``: f(x) = gamma * x * Im sum_j coeffs[j] / (poles[j] - x)

    ``argument_shift`` records that the expansion approximates
    psi(shift + x) rather than psi(x); the driver evaluates it at
    A - shift*I to recover psi(A). (pade_log approximates log(1+x), so
    its shift is 1.)
    """

    kind: str
    order: int
    c0: complex
    poles: np.ndarray
    coeffs: np.ndarray
    gamma: float = 1.0
    multiplier: str = "none"
    spectral_interval: tuple = None
    argument_shift: float = 0.0
    psi: object = None
    alphas: np.ndarray = None
    betas: np.ndarray = None
    _extended: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.multiplier not in _MULTIPLIERS:
            raise ValueError(f"unknown multiplier {self.multiplier!r}")
        self.poles = np.asarray(self.poles, dtype=np.complex128)
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if self.poles.shape != self.coeffs.shape:
            raise ValueError("poles and coeffs must have matching length")

    def resolvent_view(self):
        """Exact sum-of-resolvents form: (c0_eff, poles, coeffs_eff).

        For ``left_A`` the identity
        x*a/(1+b*x) = a/b - (a/b^2)/(x + 1/b) = a/b + (a/b^2)/(xi - x),
        xi = -1/b, folds the leading factor into the constant and the
        coefficients; for ``left_A_imag`` the gamma*x*Im(...) wrapper
        cannot be folded and stays the caller's job (flagged by
        ``needs_left_A_imag``). Poles stay in the shifted variable: with
        ``argument_shift=s`` the view expands psi(s + x), so resolvents
        act on B = A - s*I.
        """
        if self.multiplier == "left_A":
            c0 = complex(np.sum(self.alphas / self.betas))
            coeffs = (self.alphas / self.betas**2).astype(np.complex128)
            return c0, self.poles, coeffs
        return complex(self.c0), self.poles, self.coeffs

    @property
    def needs_left_A_imag(self):
        return self.multiplier == "left_A_imag"


def _conjugate_sorted(poles, coeffs):
    """Check that non-real poles pair up conjugate with conjugate coeffs."""
    order = np.lexsort((poles.real, poles.imag))
    p, c = poles[order], coeffs[order]
    return (np.allclose(p, np.conj(p[::-1]), rtol=1e-12, atol=0)
            and np.allclose(c, np.conj(c[::-1]), rtol=1e-12, atol=1e-300))


# ----------------------------------------------------------------------
# constructions


def chebyshev_exp(N):
    """Rational approximant of exp on (-inf, 0] from the embedded table.

    Supported degrees are the even N in 2..16; the uniform error is about
    10^-N. Poles (all in the open right half-plane) are sorted by
    imaginary part and come in conjugate pairs with conjugate
    coefficients.
    """
    if N not in _CHEB_TABLE:
        raise ValueError(
            f"degree N={N} not in the embedded table; supported: "
            f"{sorted(_CHEB_TABLE)}")
    entry = _CHEB_TABLE[N]
    poles = np.array([complex(float(re), float(im)) for re, im in entry["poles"]])
    coeffs = np.array([complex(float(re), float(im)) for re, im in entry["coeffs"]])
    c0 = float(entry["c0"])
    ext = {
        "c0": np.longdouble(entry["c0"]),
        "pole_re": np.array([np.longdouble(re) for re, _ in entry["poles"]]),
        "pole_im": np.array([np.longdouble(im) for _, im in entry["poles"]]),
        "coef_re": np.array([np.longdouble(re) for re, _ in entry["coeffs"]]),
        "coef_im": np.array([np.longdouble(im) for _, im in entry["coeffs"]]),
    }
    pfe = PartialFractionExpansion(
        kind="chebyshev_exp", order=N, c0=c0, poles=poles, coeffs=coeffs,
        gamma=1.0, multiplier="none", psi="exp", _extended=ext)
    if not _conjugate_sorted(pfe.poles, pfe.coeffs):
        raise ValueError(f"table entry N={N} lost conjugate symmetry")
    return pfe


def _gauss_legendre_01(N):
    """Gauss-Legendre nodes/weights mapped from [-1, 1] to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(N)
    return 0.5 * (x + 1.0), 0.5 * w


def pade_log(N):
    """Diagonal Pade approximant of log(1+x) in partial-fraction form.

    log(1+x) ~ x * sum_j alpha_j / (1 + beta_j x) where (beta_j, alpha_j)
    are the N-point Gauss-Legendre nodes/weights on [0, 1]. All poles
    xi_j = -1/beta_j are real negative and all coefficients positive.
    The expansion approximates log at 1 + x, recorded as argument_shift=1.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    beta, alpha = _gauss_legendre_01(N)
    poles = (-1.0 / beta).astype(np.complex128)
    coeffs = (alpha / beta).astype(np.complex128)
    return PartialFractionExpansion(
        kind="pade_log", order=N, c0=0.0, poles=poles, coeffs=coeffs,
        gamma=1.0, multiplier="left_A", argument_shift=1.0, psi="log",
        alphas=alpha, betas=beta)


def scalar_function(spec):
    """Resolve a function spec to a vectorized scalar callable.

    Accepts "exp", "log", "power:<alpha>", ("power", alpha), "sqrt"
    (= power:0.5) or any callable. Used for contour construction and for
    scalar/diagonal oracles.
    """
    if callable(spec):
        return spec
    if spec == "exp":
        return np.exp
    if spec == "log":
        return np.log
    if spec == "sqrt":
        return np.sqrt
    if isinstance(spec, tuple) and len(spec) == 2 and spec[0] == "power":
        a = float(spec[1])
        return lambda x: np.power(x, a)
    if isinstance(spec, str) and spec.startswith("power:"):
        a = float(spec.split(":", 1)[1])
        return lambda x: np.power(x, a)
    raise ValueError(f"unrecognized function spec {spec!r}")


def contour_pfe(psi, a, b, N):
    """Quadrature of psi over a mapped circle around [a, b].

    Builds N midpoint nodes on [-K, K], lifts them to the line
    Im t = K'/2, and maps them through the Jacobi-elliptic Mobius map
    onto a closed contour around [a, b], giving
    ``f(x) = gamma * x * Im sum_j c_j / (xi_j - x) ~ psi(x)`` on [a, b]
    for psi analytic off (-inf, 0]. The modulus is
    k = (sqrt(b/a) - 1) / (sqrt(b/a) + 1); the quadrature error decays
    like exp(-pi^2 N / (log(b/a) + 3)).
    """
    if not (0 < a < b):
        raise DomainError(f"need 0 < a < b, got a={a}, b={b}")
    if N < 1:
        raise ValueError("N must be >= 1")
    fn = scalar_function(psi)

    ratio = math.sqrt(b / a)
    k = (ratio - 1.0) / (ratio + 1.0)
    K, Kp = elliptic_k(k)
    j = np.arange(1, N + 1)
    t = -K + (j - 0.5) * (2.0 * K / N) + 0.5j * Kp
    ell = jacobi_elliptic(t, k)
    inv_k = 1.0 / k
    root = math.sqrt(a * b)
    z = root * (inv_k + ell.sn) / (inv_k - ell.sn)
    dzdt = ell.cn * ell.dn / (inv_k - ell.sn) ** 2
    gamma = -4.0 * root * K / (k * math.pi * N)
    coeffs = fn(z) * dzdt / z
    return PartialFractionExpansion(
        kind="contour", order=N, c0=0.0, poles=z, coeffs=coeffs,
        gamma=gamma, multiplier="left_A_imag", spectral_interval=(a, b),
        psi=psi)


# ----------------------------------------------------------------------
# scalar evaluation


def _check_pole_distance(poles, x):
    x = np.atleast_1d(np.asarray(x))
    dist = np.abs(poles[None, :] - x[:, None])
    scale = np.maximum(np.abs(poles)[None, :], 1.0)
    if np.any(dist < 1e-13 * scale):
        bad = np.argwhere(dist < 1e-13 * scale)[0]
        raise DomainError(
            f"evaluation point {x[bad[0]]} collides with pole "
            f"{poles[bad[1]]}")


def _eval_extended_real(ext, x):
    """Extended-precision evaluation for real x and conjugate-pair data."""
    x = np.asarray(x, dtype=np.longdouble)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.full(x.shape, ext["c0"], dtype=np.longdouble)
    pre, pim = ext["pole_re"], ext["pole_im"]
    cre, cim = ext["coef_re"], ext["coef_im"]
    seen = np.zeros(len(pre), dtype=bool)
    for jj in range(len(pre)):
        if seen[jj]:
            continue
        if pim[jj] == 0.0:
            out += cre[jj] / (pre[jj] - x)
            seen[jj] = True
            continue
        # pair jj with its conjugate partner and fold:
        # 2*Re[c/(xi - x)] = 2*(c_re*(xi_re - x) + c_im*xi_im) / |xi - x|^2
        partner = None
        for kk in range(jj + 1, len(pre)):
            if not seen[kk] and pre[kk] == pre[jj] and pim[kk] == -pim[jj]:
                partner = kk
                break
        if partner is None:
            raise ValueError("extended table lost conjugate pairing")
        dre = pre[jj] - x
        out += 2.0 * (cre[jj] * dre + cim[jj] * pim[jj]) / (dre * dre + pim[jj] * pim[jj])
        seen[jj] = True
        seen[partner] = True
    return out[0] if scalar else out


def eval_scalar(pfe, x):
    """Evaluate the expansion at scalar(s) x with its multiplier semantics.

    Raises DomainError when x collides with a pole. For the tabulated
    exponential kind and real arguments, evaluation runs in extended
    precision (the pure approximation error at N=16 sits at the float64
    round-off level, so plain double arithmetic would mask it).
    """
    if pfe.multiplier == "left_A":
        x_arr = np.asarray(x)
        _check_pole_distance(pfe.poles, x_arr.astype(np.complex128))
        terms = pfe.alphas / (1.0 + np.multiply.outer(np.atleast_1d(x_arr), pfe.betas))
        out = np.atleast_1d(x_arr) * terms.sum(axis=-1)
        return out[0] if x_arr.ndim == 0 else out

    if (pfe.kind == "chebyshev_exp" and pfe._extended is not None
            and not np.iscomplexobj(np.asarray(x))):
        _check_pole_distance(pfe.poles, np.asarray(x, dtype=np.complex128))
        return _eval_extended_real(pfe._extended, x)

    x_arr = np.asarray(x, dtype=np.complex128)
    _check_pole_distance(pfe.poles, x_arr)
    scalar = x_arr.ndim == 0
    xa = np.atleast_1d(x_arr)
    acc = (pfe.coeffs[None, :] / (pfe.poles[None, :] - xa[:, None])).sum(axis=1)
    if pfe.multiplier == "left_A_imag":
        out = pfe.gamma * xa * acc.imag
        out = out.real if not np.iscomplexobj(np.asarray(x)) else out
    else:
        out = pfe.c0 + acc
    return out[0] if scalar else out


# ----------------------------------------------------------------------
# serialization


def pfe_to_json(pfe):
    """Serialize an expansion to JSON text.

    Floats are emitted in shortest round-trip decimal form (at most 17
    significant digits, exact under parsing). Callable psi specs cannot
    be serialized.
    """
    if callable(pfe.psi):
        raise ValueError("cannot serialize an expansion with a callable psi")
    doc = {
        "kind": pfe.kind,
        "N": pfe.order,
        "gamma": pfe.gamma,
        "c0": [complex(pfe.c0).real, complex(pfe.c0).imag],
        "poles": [[p.real, p.imag] for p in pfe.poles],
        "coeffs": [[c.real, c.imag] for c in pfe.coeffs],
        "multiplier": pfe.multiplier,
        "argument_shift": pfe.argument_shift,
        "psi": pfe.psi,
    }
    if pfe.spectral_interval is not None:
        doc["spectral_interval"] = list(pfe.spectral_interval)
    if pfe.alphas is not None:
        doc["alphas"] = list(map(float, pfe.alphas))
        doc["betas"] = list(map(float, pfe.betas))
    return json.dumps(doc, indent=1)


def pfe_from_json(text):
    """Inverse of :func:`pfe_to_json` (extended-precision data is not
    rehydrated; the float64 fields are authoritative for round-trips)."""
    doc = json.loads(text)
    poles = np.array([complex(re, im) for re, im in doc["poles"]])
    coeffs = np.array([complex(re, im) for re, im in doc["coeffs"]])
    interval = doc.get("spectral_interval")
    alphas = np.asarray(doc["alphas"]) if "alphas" in doc else None
    betas = np.asarray(doc["betas"]) if "betas" in doc else None
    return PartialFractionExpansion(
        kind=doc["kind"], order=doc["N"],
        c0=complex(doc["c0"][0], doc["c0"][1]),
        poles=poles, coeffs=coeffs, gamma=doc["gamma"],
        multiplier=doc["multiplier"],
        spectral_interval=tuple(interval) if interval else None,
        argument_shift=doc.get("argument_shift", 0.0),
        psi=doc.get("psi"), alphas=alphas, betas=betas)
