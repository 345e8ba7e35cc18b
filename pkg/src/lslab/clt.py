"""Centering/scaling constants and normal-limit checks for the scaled
Legendre rows.

The exponential scale of the rows is governed by the constant

    w = 2 log((sqrt 5 + 1)/2),

the unique positive solution of 2 (cosh w - 1) = 1 (twice the log of the
golden ratio, about 0.9624).  With

    center(n) = (2n+1)/(sqrt 5 w) - 1/2,
    spread(n) = (1/2 - w/sqrt 5) (2/w)^2 n/5,

the exact row mean approaches center(n) at rate 1/n and the exact row
variance stays within O(1) of spread(n); the pointwise normal estimate

    A(n, j) = (2n)! / (sqrt(2 pi spread) (2j)! w^(2n+1)) * exp(-x^2/2),
    x = (j - center)/sqrt(spread),

tracks the exact numbers near the center, and the scaled partial row
sums converge to the normal distribution function.  Every check here
runs on exact integer rows scaled at working precision; mpf exponents
are arbitrary-precision integers, so there is no overflow at any n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath as mp

from .errors import DegenerateVarianceError, KernelInvariantError
from .triangles import legendre_stirling_binsum, modified_legendre, modified_legendre_row


def saddle_constant(precision_bits: int = 256) -> mp.mpf:
    """2 log((sqrt 5 + 1)/2), cross-checked against a bisection solve of
    its defining equation 2 (cosh w - 1) = 1."""
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    with mp.workprec(precision_bits + 16):
        closed = 2 * mp.log((mp.sqrt(5) + 1) / 2)
        lo, hi = mp.mpf("0.9"), mp.mpf("1.0")
        for _ in range(precision_bits + 8):
            mid = (lo + hi) / 2
            if 2 * (mp.cosh(mid) - 1) < 1:
                lo = mid
            else:
                hi = mid
        if abs(closed - (lo + hi) / 2) > mp.mpf(2) ** (-precision_bits + 4):
            raise KernelInvariantError("closed form and root solve disagree")
    with mp.workprec(precision_bits):
        return +closed


@dataclass(frozen=True)
class CenteringScaling:
    n: int
    center: mp.mpf
    spread: mp.mpf
    w: mp.mpf


def centering_scaling(n: int, precision_bits: int = 256) -> CenteringScaling:
    if n < 1:
        raise ValueError("requires n >= 1")
    with mp.workprec(precision_bits):
        w = saddle_constant(precision_bits)
        s5 = mp.sqrt(5)
        center = (2 * n + 1) / (s5 * w) - mp.mpf(1) / 2
        spread = (mp.mpf(1) / 2 - w / s5) * (2 / w) ** 2 * mp.mpf(n) / 5
        return CenteringScaling(n=n, center=+center, spread=+spread, w=+w)


def mean_variance_exact(n: int) -> tuple[Fraction, Fraction]:
    """Exact mean and variance of the scaled-row distribution from the
    derivative sums of the row polynomial (row built by the O(n)-memory
    scaled recurrence, so large n stay cheap)."""
    if n < 2:
        raise DegenerateVarianceError("the n = 1 row is a single atom")
    row = modified_legendre_row(n)
    total = sum(row)
    d1 = sum(j * c for j, c in enumerate(row))
    d2 = sum(j * (j - 1) * c for j, c in enumerate(row))
    mean = Fraction(d1, total)
    variance = Fraction(d2, total) + mean - mean * mean
    if variance == 0:
        raise DegenerateVarianceError(f"zero variance at n={n}")
    return mean, variance


@dataclass(frozen=True)
class ResidualRow:
    n: int
    mean_residual: mp.mpf
    var_residual: mp.mpf


@dataclass(frozen=True)
class ResidualReport:
    precision_bits: int
    rows: tuple[ResidualRow, ...]
    doubling_ratios: tuple[tuple[int, int, mp.mpf], ...]

    def to_csv(self, fp) -> None:
        digits = max(6, int(self.precision_bits * 0.301))
        fp.write("n,mean_residual,var_residual\n")
        for row in self.rows:
            fp.write(
                f"{row.n},{mp.nstr(row.mean_residual, digits)},"
                f"{mp.nstr(row.var_residual, digits)}\n"
            )


def mean_variance_residuals(n_list, precision_bits: int = 256) -> ResidualReport:
    """Distance of the exact mean/variance from center(n)/spread(n), plus
    the |mean residual| doubling ratios for each (n, 2n) pair in the list."""
    ns = list(n_list)
    if ns != sorted(ns):
        raise ValueError("n_list must be ascending")
    rows = []
    with mp.workprec(precision_bits):
        for n in ns:
            mean, var = mean_variance_exact(n)
            cs = centering_scaling(n, precision_bits)
            mean_f = mp.mpf(mean.numerator) / mean.denominator
            var_f = mp.mpf(var.numerator) / var.denominator
            rows.append(
                ResidualRow(
                    n=n,
                    mean_residual=+(mean_f - cs.center),
                    var_residual=+(var_f - cs.spread),
                )
            )
        by_n = {row.n: row for row in rows}
        ratios = []
        for n in ns:
            if 2 * n in by_n:
                ratios.append(
                    (n, 2 * n, +abs(by_n[2 * n].mean_residual) / abs(by_n[n].mean_residual))
                )
    return ResidualReport(precision_bits=precision_bits, rows=tuple(rows), doubling_ratios=tuple(ratios))


def normal_approximation(n: int, j: int, precision_bits: int = 256) -> mp.mpf:
    """The pointwise estimate A(n, j).  Factorials enter as exact integers
    converted at working precision; mpf exponents are unbounded, so the
    (2n)!/w^(2n+1) scale cannot overflow."""
    if not 1 <= j <= n:
        raise ValueError("requires 1 <= j <= n")
    with mp.workprec(precision_bits + 16):
        cs = centering_scaling(n, precision_bits + 16)
        x = (j - cs.center) / mp.sqrt(cs.spread)
        value = (
            mp.mpf(factorial(2 * n))
            / (mp.sqrt(2 * mp.pi * cs.spread) * mp.mpf(factorial(2 * j)) * cs.w ** (2 * n + 1))
            * mp.e ** (-x * x / 2)
        )
    with mp.workprec(precision_bits):
        return +value


@dataclass(frozen=True)
class RatioReport:
    n: int
    j: int
    exact_digits: int
    ratio: mp.mpf
    precision_bits: int

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "j": self.j,
            "ratio": mp.nstr(self.ratio, max(8, int(self.precision_bits * 0.301))),
            "precision_bits": self.precision_bits,
        }


def ratio_check(n: int, j: int, precision_bits: int = 256) -> RatioReport:
    """Exact triangle entry over A(n, j).

    The entry is computed twice: by the single alternating big-integer
    sum and by the banded scaled recurrence; the two must agree exactly
    before any floating point happens.
    """
    direct = legendre_stirling_binsum(n, j)
    banded = modified_legendre(n, j)
    if banded != direct * factorial(2 * j):
        raise KernelInvariantError(
            f"direct sum and scaled recurrence disagree at ({n}, {j})"
        )
    with mp.workprec(precision_bits + 16):
        ratio = mp.mpf(direct) / normal_approximation(n, j, precision_bits + 16)
    with mp.workprec(precision_bits):
        ratio = +ratio
    return RatioReport(
        n=n,
        j=j,
        exact_digits=len(str(direct)),
        ratio=ratio,
        precision_bits=precision_bits,
    )


def max_density_residual(n: int, precision_bits: int = 256) -> mp.mpf:
    """max over 0 <= j <= n of |sqrt(spread) (2j)! w^(2n+1)/(2n)! T(n,j)
    - phi(x)| with the exact scaled row."""
    if n < 2:
        raise ValueError("requires n >= 2")
    row = modified_legendre_row(n)
    with mp.workprec(precision_bits + 16):
        cs = centering_scaling(n, precision_bits + 16)
        sqrt_spread = mp.sqrt(cs.spread)
        scale = cs.w ** (2 * n + 1) / mp.mpf(factorial(2 * n))
        inv_sqrt2pi = 1 / mp.sqrt(2 * mp.pi)
        worst = mp.mpf(0)
        for j in range(n + 1):
            x = (j - cs.center) / sqrt_spread
            gauss = inv_sqrt2pi * mp.e ** (-x * x / 2)
            diff = abs(sqrt_spread * scale * mp.mpf(row[j]) - gauss)
            if diff > worst:
                worst = diff
    with mp.workprec(precision_bits):
        return +worst


@dataclass(frozen=True)
class CdfDetail:
    value: mp.mpf
    value_exclusive: mp.mpf
    cutoff: mp.mpf
    knife_edge: bool


def scaled_cdf_detail(n: int, y, precision_bits: int = 256) -> CdfDetail:
    """Partial-sum distribution value

        w^(2n+1)/(2n)! * sum_{j <= floor(center + y sqrt(spread))} (2j)! T(n, j)

    with a knife-edge flag when the cutoff sits within 2^(-precision/2)
    of an integer (both the inclusive and exclusive sums are reported)."""
    if n < 2:
        raise ValueError("requires n >= 2")
    row = modified_legendre_row(n)
    with mp.workprec(precision_bits + 16):
        cs = centering_scaling(n, precision_bits + 16)
        yv = mp.mpf(y)
        cutoff = cs.center + yv * mp.sqrt(cs.spread)
        j_inc = int(mp.floor(cutoff))
        knife = abs(cutoff - mp.nint(cutoff)) < mp.mpf(2) ** (-(precision_bits // 2))
        scale = cs.w ** (2 * n + 1) / mp.mpf(factorial(2 * n))

        def partial(j_hi: int) -> mp.mpf:
            j_hi = min(j_hi, n)
            if j_hi < 0:
                return mp.mpf(0)
            return mp.mpf(sum(row[: j_hi + 1])) * scale

        inclusive = partial(j_inc)
        exclusive = partial(j_inc - 1) if knife else inclusive
        return CdfDetail(
            value=+inclusive, value_exclusive=+exclusive, cutoff=+cutoff, knife_edge=knife
        )


def scaled_cdf(n: int, y, precision_bits: int = 256) -> mp.mpf:
    with mp.workprec(precision_bits):
        return +scaled_cdf_detail(n, y, precision_bits).value


def total_mass_ratio(n: int, precision_bits: int = 256) -> mp.mpf:
    """M_n(1) w^(2n+1) / (2n)!; approaches 1 at rate 1/n."""
    row = modified_legendre_row(n)
    with mp.workprec(precision_bits + 16):
        w = saddle_constant(precision_bits + 16)
        value = mp.mpf(sum(row)) * w ** (2 * n + 1) / mp.mpf(factorial(2 * n))
    with mp.workprec(precision_bits):
        return +value


def normal_cdf(y, precision_bits: int = 256) -> mp.mpf:
    """Standard normal distribution function.

    For |y| <= 8 a positive-term series off the error integral,
    Phi(y) = 1/2 + phi(y) * sum_{k>=0} y^(2k+1)/(1*3*...*(2k+1)); beyond
    that a Laplace continued fraction for the tail.  Negative arguments
    go through the reflection Phi(-y) = 1 - Phi(y).
    """
    with mp.workprec(precision_bits + 32):
        yv = mp.mpf(y)
        if yv < 0:
            result = 1 - normal_cdf(-yv, precision_bits + 32)
        elif yv == 0:
            result = mp.mpf(1) / 2
        elif yv <= 8:
            phi = mp.e ** (-yv * yv / 2) / mp.sqrt(2 * mp.pi)
            term = yv
            total = term
            k = 0
            target = mp.mpf(2) ** (-(precision_bits + 16))
            while True:
                k += 1
                term *= yv * yv / (2 * k + 1)
                total += term
                if term < target * (1 + total):
                    break
            result = mp.mpf(1) / 2 + phi * total
        else:
            phi = mp.e ** (-yv * yv / 2) / mp.sqrt(2 * mp.pi)
            depth = precision_bits + 32
            tail = yv
            for i in range(depth, 0, -1):
                tail = yv + i / tail
            result = 1 - phi / tail
    with mp.workprec(precision_bits):
        return +result
