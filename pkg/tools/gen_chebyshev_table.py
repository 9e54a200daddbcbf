"""Offline generator for the embedded exp rational-approximation table.

Computes, in mpmath arbitrary precision, the Caratheodory-Fejer near-best
rational approximant of e^x on (-inf, 0] for even degrees N = 2..16 and
freezes poles/coefficients/constant term into src/pfunm/_cheb_table.py as
25-significant-digit decimal strings. The extra digits (beyond float64)
let the evaluation layer use extended precision where the N=16 error level
(~2e-16) would otherwise drown in coefficient quantization noise.

Method (transplanted CF on the unit disk): map x in (-inf, 0] to the unit
circle via x = scl*(t-1)/(t+1) with scl = 9, expand the transplanted
function in Chebyshev/Fourier coefficients, take the SVD of the associated
Hankel matrix, and read the degree-N approximant off the singular triplet:
the Blaschke-quotient correction gives the error curve, the outside-disk
roots of the right singular polynomial give the poles, and a partial
fraction expansion in the w-plane gives residues and the constant term.

Run from the repository root:

    python3 tools/gen_chebyshev_table.py

Runtime is a few minutes (all arithmetic at 45 decimal digits).
"""

import pathlib

import numpy as np
from mpmath import mp, mpf, mpc

OUT_PATH = pathlib.Path(__file__).resolve().parents[1] / "src" / "pfunm" / "_cheb_table.py"

DIGITS = 25


def cf_exp(n, K=90, nf=1024, dps=45, scl=9):
    """Degree-(n, n) CF approximant of exp on (-inf, 0].

    Returns (sigma_n, poles, residues, c0, sup_err) with poles/residues in
    the x-plane, i.e. r(x) = c0 + sum_k residues[k] / (x - poles[k]).
    """
    mp.dps = dps
    ws = [mp.expjpi(mpf(2 * i) / nf) for i in range(nf)]
    F = [mpf(0)] * nf
    for i in range(nf):
        t = ws[i].real
        F[i] = mpf(0) if t == -1 else mp.e ** (scl * (t - 1) / (t + 1))

    # Chebyshev coefficients of the transplanted function.
    costab = [mp.cospi(mpf(2 * j) / nf) for j in range(nf)]
    c = []
    for k in range(K + 1):
        s = mpf(0)
        for i in range(nf):
            s += F[i] * costab[(k * i) % nf]
        c.append(s / nf)

    H = mp.matrix(K, K)
    for i in range(K):
        for j in range(K):
            idx = i + j + 1
            H[i, j] = c[idx] if idx <= K else mpf(0)
    U, S, V = mp.svd_r(H)
    sigma = S[n]
    u = [U[K - 1 - j, n] for j in range(K)]
    v = [V[n, j] for j in range(K)]

    def poleval(coeffs, x):
        acc = mpc(0)
        for cj in reversed(coeffs):
            acc = acc * x + cj
        return acc

    # Samples of the CF extended function r~ = (analytic part) - sigma w^K b(w).
    rt = []
    for i in range(nf):
        w = ws[i]
        wb = w.conjugate()
        b = poleval(u, wb) / poleval(v, wb)
        rt.append(poleval(c, w) - sigma * w ** K * b)

    # Poles: outside-disk roots of the right singular polynomial, refined
    # by Newton in full precision from float64 seeds.
    vd = np.array([float(x) for x in v])
    guesses = [r for r in np.roots(vd) if abs(r) > 1.0]
    assert len(guesses) == n, (len(guesses), n)
    qcoeffs = list(reversed(v))
    dq = [qcoeffs[j] * j for j in range(1, len(qcoeffs))]
    qk = []
    for g in guesses:
        x = mpc(g)
        for _ in range(80):
            step = poleval(qcoeffs, x) / poleval(dq, x)
            x = x - step
            if abs(step) < mpf(10) ** (-(dps - 3)) * abs(x):
                break
        qk.append(x)

    # Monic denominator with those roots (ascending powers).
    qc = [mpc(1)]
    for q in qk:
        new = [mpc(0)] * (len(qc) + 1)
        for j, a in enumerate(qc):
            new[j + 1] += a
            new[j] -= q * a
        qc = new

    # Numerator Taylor coefficients through degree n, then w-plane residues,
    # mapped to the x-plane through the Mobius/Joukowski composition.
    pt = [rt[i] * poleval(qc, ws[i]) for i in range(nf)]
    ptc = []
    for k in range(n + 1):
        s = mpc(0)
        for i in range(nf):
            s += pt[i] * ws[i].conjugate() ** k
        ptc.append((s / nf).real)

    poles_x, res_x, cw_list = [], [], []
    for idx, q in enumerate(qk):
        num = mpc(0)
        for k in reversed(range(n + 1)):
            num = num * q + ptc[k]
        den = mpc(1)
        for jdx, q2 in enumerate(qk):
            if jdx != idx:
                den *= (q - q2)
        cw = num / den
        cw_list.append(cw)
        zp = scl * (q - 1) ** 2 / (q + 1) ** 2
        poles_x.append(zp)
        res_x.append(4 * cw * zp / (q ** 2 - 1))

    # Constant term at x = -inf (w = -1). The w-plane function has Taylor
    # coefficient a0 plus symmetric inside-disk poles at 1/q_k with
    # residues -cw_k/q_k^2; collapsing everything at w=-1 gives:
    a0 = (sum(rt) / nf).real
    c0 = a0
    for q, cw in zip(qk, cw_list):
        c0 += (2 * cw / (q * (q + 1))).real

    # Validation: sup error against exp on a dense transplanted grid.
    err = mpf(0)
    for tnum in range(-399, 400):
        t = mpf(tnum) / 400
        x = scl * (t - 1) / (t + 1)
        s = c0
        for zp, cz in zip(poles_x, res_x):
            s += cz / (x - zp)
        err = max(err, abs(s - mp.e ** x))
    return sigma, poles_x, res_x, c0, err


def main():
    entries = []
    for n in range(2, 17, 2):
        sigma, poles, res, c0, err = cf_exp(n)
        order = sorted(range(n), key=lambda j: (float(poles[j].imag), float(poles[j].real)))
        poles = [poles[j] for j in order]
        res = [res[j] for j in order]
        print(f"N={n:2d}  sigma_n={mp.nstr(sigma, 5)}  sup|r - exp| = {mp.nstr(err, 5)}")
        lines = [f"    {n}: {{"]
        lines.append(f'        "c0": "{mp.nstr(c0, DIGITS)}",')
        lines.append('        "poles": [')
        for p in poles:
            lines.append(f'            ("{mp.nstr(p.real, DIGITS)}", "{mp.nstr(p.imag, DIGITS)}"),')
        lines.append("        ],")
        lines.append('        "coeffs": [')
        for r in res:
            # Eq-1 orientation: r(x) = c0 + sum res/(x - pole)
            #                        = c0 + sum (-res)/(pole - x).
            lines.append(f'            ("{mp.nstr(-r.real, DIGITS)}", "{mp.nstr(-r.imag, DIGITS)}"),')
        lines.append("        ],")
        lines.append("    },")
        entries.append("\n".join(lines))

    header = '''"""Embedded rational-approximation table for exp (generated file).

Generated by tools/gen_chebyshev_table.py; do not edit by hand.

For each even degree N the stored data defines
    r(x) = c0 + sum_j coeffs[j] / (poles[j] - x)
with r(x) ~ e^x on (-inf, 0], uniform error ~ 10^-N. Values are decimal
strings with 25 significant digits; poles are sorted by imaginary part and
occur in conjugate pairs with conjugate coefficients.
"""

TABLE = {
'''
    with open(OUT_PATH, "w") as fh:
        fh.write(header)
        fh.write("\n".join(entries))
        fh.write("\n}\n")
    print(f"wrote {OUT_PATH}")


if __name__ == "__main__":
    main()
