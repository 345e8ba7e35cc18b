"""Closed forms and two-term asymptotics for the exponential moment integrals

    J(r, n; z) = integral_0^oo exp(-xi z) xi^r ((xi+1)^n + (xi-1)^n) dxi.

The polynomial factor keeps only even binomial terms, and termwise
integration gives the exact finite form

    J(r, n; z) = sum_{k even, 0<=k<=n} 2 C(n, k) (r+n-k)! / z^(r+n-k+1)

for Re z > 0.  Quadrature never enters: the term list is exact, so the
only numerical step is evaluating inverse powers of z at working
precision.  For r = n + nu and large n,

    J(n+nu, n; z) ~ n!(n+nu)!/sqrt(pi n) * (2/z)^(2n+nu+1)
                    * (b(z) + b_nu(z)/n + O(1/n^2)),

with b(z) = cosh(z/2) and

    b_nu(z) = -( z^2/2 cosh(z/2) + 2 z nu sinh(z/2)
                 + (2 nu^2 + 2 nu + 1) cosh(z/2) ) / 8,

and this module verifies that expansion numerically for concrete n.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from math import comb, factorial

import mpmath as mp

from .errors import PrecisionError


@dataclass(frozen=True)
class InversePowerSum:
    """Finite sum of positive integer multiples of inverse powers of z,
    powers strictly decreasing with uniform stride 2."""

    r: int
    n: int
    terms: tuple[tuple[int, int], ...]  # (coefficient, inverse power)

    def eval(self, z):
        """Evaluate at an mpf/mpc z with Re z > 0 (Horner in 1/z^2)."""
        inv2 = 1 / (z * z)
        acc = 0
        for c, _ in self.terms:
            acc = acc * inv2 + c
        return acc / z ** self.terms[-1][1]


def laplace_closed_form(r: int, n: int) -> InversePowerSum:
    """Exact term list of J(r, n; z)."""
    if r < 0 or n < 0:
        raise ValueError("indices must be non-negative")
    terms = tuple(
        (2 * comb(n, k) * factorial(r + n - k), r + n - k + 1)
        for k in range(0, n + 1, 2)
    )
    return InversePowerSum(r=r, n=n, terms=terms)


def derivative_identity_holds(r: int, n: int, order: int) -> bool:
    """Differentiate the closed form termwise `order` times and compare,
    as exact term lists, with (-1)^order * J(r+order, n; .)."""
    terms = laplace_closed_form(r, n).terms
    for _ in range(order):
        terms = tuple((c * e, e + 1) for c, e in terms)
    return terms == laplace_closed_form(r + order, n).terms


@dataclass(frozen=True)
class SaddleCoefficients:
    nu: int
    z: mp.mpf
    leading: mp.mpf      # cosh(z/2)
    correction: mp.mpf   # first 1/n coefficient, always negative


def saddle_coefficients(nu: int, z, precision_bits: int = 256) -> SaddleCoefficients:
    if nu < 0:
        raise ValueError("nu must be non-negative")
    with mp.workprec(precision_bits):
        zz = mp.mpf(z)
        if zz <= 0:
            raise ValueError("z must be positive")
        ch, sh = mp.cosh(zz / 2), mp.sinh(zz / 2)
        corr = -(zz * zz / 2 * ch + 2 * zz * nu * sh + (2 * nu * nu + 2 * nu + 1) * ch) / 8
        return SaddleCoefficients(nu=nu, z=zz, leading=ch, correction=corr)


def _normalized_value(nu: int, z, n: int, bits: int) -> mp.mpf:
    """Q(n) = J(n+nu, n; z) * sqrt(pi n) * (z/2)^(2n+nu+1) / (n! (n+nu)!)."""
    with mp.workprec(bits):
        zz = mp.mpf(z)
        val = laplace_closed_form(n + nu, n).eval(zz)
        return (
            val
            * mp.sqrt(mp.pi * n)
            * (zz / 2) ** (2 * n + nu + 1)
            / (mp.mpf(factorial(n)) * factorial(n + nu))
        )


def normalized_value(nu: int, z, n: int, precision_bits: int = 256) -> mp.mpf:
    """Q(n) with a self-check against cancellation: the value is recomputed
    with extra guard bits and escalated to 1024 bits if the two disagree."""
    q1 = _normalized_value(nu, z, n, precision_bits + 16)
    q2 = _normalized_value(nu, z, n, precision_bits + 48)
    tol = mp.mpf(2) ** (-(precision_bits // 2))
    if abs(q1 - q2) > abs(q2) * tol:
        hi = max(1024, 2 * precision_bits)
        q1 = _normalized_value(nu, z, n, hi)
        q2 = _normalized_value(nu, z, n, hi + 64)
        if abs(q1 - q2) > abs(q2) * tol:
            raise PrecisionError(
                f"normalized integral at n={n} unstable even at {hi} bits"
            )
    return q2


@dataclass(frozen=True)
class SaddleRow:
    n: int
    q: mp.mpf
    q_minus_b: mp.mpf
    scaled: mp.mpf        # n * (Q - b)
    residual: mp.mpf      # n * (Q - b) - b_nu
    tail: mp.mpf          # lattice truncation bound at r = n + nu


@dataclass(frozen=True)
class SaddleReport:
    nu: int
    z: mp.mpf
    precision_bits: int
    leading: mp.mpf
    correction: mp.mpf
    rows: tuple[SaddleRow, ...]

    def residual_shrinks(self) -> bool:
        res = [abs(row.residual) for row in self.rows]
        return all(b < a for a, b in zip(res, res[1:]))

    def to_csv(self, fp) -> None:
        digits = max(6, int(self.precision_bits * 0.301))
        fp.write("n,Q,Q_minus_b,n_times_Q_minus_b,residual,tail_bound\n")
        for row in self.rows:
            cells = (row.q, row.q_minus_b, row.scaled, row.residual, row.tail)
            fp.write(f"{row.n}," + ",".join(mp.nstr(c, digits) for c in cells) + "\n")


def saddle_expansion_check(
    nu: int, z, n_list, precision_bits: int = 256
) -> SaddleReport:
    """Evaluate Q(n) along n_list and report its distance from the two-term
    expansion; the residual n*(Q - b) - b_nu must shrink along the list."""
    from .eisenstein import tail_bound

    ns = list(n_list)
    if ns != sorted(ns):
        raise ValueError("n_list must be ascending")
    coeffs = saddle_coefficients(nu, z, precision_bits)
    rows = []
    with mp.workprec(precision_bits):
        for n in ns:
            q = normalized_value(nu, z, n, precision_bits)
            diff = q - coeffs.leading
            scaled = n * diff
            rows.append(
                SaddleRow(
                    n=n,
                    q=q,
                    q_minus_b=diff,
                    scaled=scaled,
                    residual=scaled - coeffs.correction,
                    tail=tail_bound(n + nu, coeffs.z, precision_bits)
                    if n + nu >= 2
                    else mp.mpf("nan"),
                )
            )
    return SaddleReport(
        nu=nu,
        z=coeffs.z,
        precision_bits=precision_bits,
        leading=coeffs.leading,
        correction=coeffs.correction,
        rows=tuple(rows),
    )


def report_csv(report: SaddleReport) -> str:
    buf = io.StringIO()
    report.to_csv(buf)
    return buf.getvalue()
