"""Bernoulli-array machinery for pointwise normal approximation of the
coefficient distributions.

A generating polynomial with only real non-positive zeros factors as a
product of (p s + 1 - p) terms with p = 1/(1 + x) for each zero -x, so
its normalized coefficients are the distribution of a sum S of
independent Bernoulli variables.  This module turns zeros into
probabilities, convolves exactly, accumulates cumulants two independent
ways, and evaluates the Hermite-corrected density expansion

    sigma * P(S = j)  ~  phi(x) + sum_{nu=1..k-2} q_nu(x) / n^(nu/2),

at x = (j - mean)/sigma, where each q_nu is a sum over the weighted
partitions mu_1 + 2 mu_2 + ... + nu mu_nu = nu of Hermite values
H_{nu+2s}(x) (s = sum mu_m) against normalized-cumulant powers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import mpmath as mp

from .errors import DegenerateVarianceError, ExpansionConditionError
from .genpoly import IntPolynomial

DEFAULT_CUMULANT_ORDER = 6
VARIANCE_FLOOR = 0.01  # lower bound on variance/n for the expansion
MAX_EXPANSION_ORDER = 4


@dataclass(frozen=True)
class BernoulliArray:
    """Success probabilities of one row of the triangular array.  All
    entries are Fractions (exact path) or all mpf (refined-root path)."""

    probabilities: tuple

    @property
    def n(self) -> int:
        return len(self.probabilities)


def probabilities_from_roots(roots, precision_bits: int = 256) -> BernoulliArray:
    """Map zeros (all <= 0) to success probabilities p = 1/(1 - zero).
    A zero at the origin maps to p = 1 (a deterministic success)."""
    probs = []
    exact = all(isinstance(r, (int, Fraction)) for r in roots)
    with mp.workprec(precision_bits):
        for r in roots:
            if r > 0:
                raise ValueError(f"positive zero {r}: not a valid array source")
            if exact:
                probs.append(Fraction(1, 1) / (1 - Fraction(r)))
            else:
                probs.append(+(1 / (1 - mp.mpf(r))))
    return BernoulliArray(probabilities=tuple(probs))


def _is_exact(arr: BernoulliArray) -> bool:
    return all(isinstance(p, (int, Fraction)) for p in arr.probabilities)


def distribution(arr: BernoulliArray, precision_bits: int = 256) -> list:
    """P(S = j) for j = 0..n by convolution of the factors; exact rationals
    in, exact rationals out (precision_bits only matters on the mpf path)."""
    with mp.workprec(precision_bits):
        poly = [Fraction(1) if _is_exact(arr) else mp.mpf(1)]
        for p in arr.probabilities:
            q = 1 - p
            new = [0 * p] * (len(poly) + 1)
            for i, c in enumerate(poly):
                new[i] += c * q
                new[i + 1] += c * p
            poly = new
    return poly


def _cumulants_from_raw(moments: list) -> list:
    """kappa_1..kappa_K from raw moments m_1..m_K via
    kappa_r = m_r - sum_{i<r} C(r-1, i-1) kappa_i m_{r-i}."""
    kappas = []
    for r in range(1, len(moments) + 1):
        acc = moments[r - 1]
        for i in range(1, r):
            acc -= comb(r - 1, i - 1) * kappas[i - 1] * moments[r - i - 1]
        kappas.append(acc)
    return kappas


@dataclass(frozen=True)
class CumulantProfile:
    """Mean, variance and normalized cumulants of one row sum.

    normalized[k] holds lambda_{k+2} = n^(k/2) kappa_{k+2} / sigma^(k+2),
    so normalized[0] is identically 1.
    """

    n: int
    mean: object
    variance: object
    normalized: tuple

    @property
    def order(self) -> int:
        return len(self.normalized) + 1

    def normalized_cumulant(self, nu: int):
        if nu < 2 or nu > self.order:
            raise ValueError(f"cumulant order {nu} not in profile (max {self.order})")
        return self.normalized[nu - 2]


def _normalize_cumulants(n, kappas, precision_bits) -> CumulantProfile:
    mean, variance = kappas[0], kappas[1]
    if variance == 0:
        raise DegenerateVarianceError("row-sum variance is zero")
    with mp.workprec(precision_bits):
        var_f = mp.mpf(variance.numerator) / variance.denominator if isinstance(variance, Fraction) else mp.mpf(variance)
        sigma = mp.sqrt(var_f)
        normalized = []
        for nu in range(2, len(kappas) + 1):
            k = kappas[nu - 1]
            k_f = mp.mpf(k.numerator) / k.denominator if isinstance(k, Fraction) else mp.mpf(k)
            normalized.append(+(mp.mpf(n) ** (mp.mpf(nu - 2) / 2) * k_f / sigma**nu))
    return CumulantProfile(n=n, mean=mean, variance=variance, normalized=tuple(normalized))


def cumulants_from_probabilities(
    arr: BernoulliArray, order: int = DEFAULT_CUMULANT_ORDER, precision_bits: int = 256
) -> CumulantProfile:
    """Per-factor moment-to-cumulant recursion (every raw moment of a
    Bernoulli variable equals p), summed across the row by independence."""
    if order < 2:
        raise ValueError("order must be at least 2")
    with mp.workprec(precision_bits):
        zero = Fraction(0) if _is_exact(arr) else mp.mpf(0)
        totals = [zero] * order
        for p in arr.probabilities:
            kappas = _cumulants_from_raw([p] * order)
            for i in range(order):
                totals[i] += kappas[i]
    return _normalize_cumulants(arr.n, totals, precision_bits)


def _stirling2(r: int, k: int) -> int:
    # classical second-kind numbers for the factorial-to-raw conversion
    if k == 0:
        return 1 if r == 0 else 0
    cur = [0] * (k + 1)
    cur[0] = 1
    for i in range(1, r + 1):
        new = [0] * (k + 1)
        for m in range(1, min(i, k) + 1):
            new[m] = m * cur[m] + cur[m - 1]
        cur = new
    return cur[k]


def cumulants_from_genpoly(
    poly: IntPolynomial, order: int = DEFAULT_CUMULANT_ORDER, precision_bits: int = 256
) -> CumulantProfile:
    """Independent route: factorial moments p^(m)(1)/p(1) from exact
    derivative sums, converted to raw moments with classical second-kind
    Stirling numbers, then the same cumulant recursion."""
    coeffs = poly.coeffs
    if any(c < 0 for c in coeffs):
        raise ValueError("coefficients must be non-negative")
    total = sum(coeffs)
    if total <= 0:
        raise ValueError("polynomial must be positive at 1")
    n = poly.degree
    factorial_moments = [Fraction(1)]
    for m in range(1, order + 1):
        s = 0
        for j, c in enumerate(coeffs):
            if j >= m:
                f = 1
                for t in range(m):
                    f *= j - t
                s += f * c
        factorial_moments.append(Fraction(s, total))
    raw = [
        sum(_stirling2(r, k) * factorial_moments[k] for k in range(r + 1))
        for r in range(1, order + 1)
    ]
    kappas = _cumulants_from_raw(raw)
    return _normalize_cumulants(n, kappas, precision_bits)


def hermite_value(m: int, x):
    """Probabilists' Hermite value by the three-term recurrence
    H_{m+1} = x H_m - m H_{m-1}, H_0 = 1, H_1 = x."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0:
        return 1 + 0 * x
    prev, cur = 1 + 0 * x, x
    for i in range(1, m):
        prev, cur = cur, x * cur - i * prev
    return cur


def _weight_tuples(nu: int):
    """All (mu_1..mu_nu) with sum m*mu_m = nu, lexicographically ascending."""

    def rec(pos: int, remaining: int, prefix: tuple):
        if pos > nu:
            if remaining == 0:
                yield prefix
            return
        for mu in range(remaining // pos + 1):
            yield from rec(pos + 1, remaining - pos * mu, prefix + (mu,))

    yield from rec(1, nu, ())


def hermite_correction(nu: int, profile: CumulantProfile, x, precision_bits: int = 256):
    """Correction term q_nu(x), normal density factor included.  Needs
    normalized cumulants up to order nu + 2 in the profile."""
    if nu < 1:
        raise ValueError("nu must be at least 1")
    if profile.order < nu + 2:
        raise ValueError(
            f"profile holds cumulants to order {profile.order}, need {nu + 2}"
        )
    with mp.workprec(precision_bits):
        xv = mp.mpf(x)
        total = mp.mpf(0)
        for tup in _weight_tuples(nu):
            s = sum(tup)
            prod = mp.mpf(1)
            for m, mu in enumerate(tup, start=1):
                if mu:
                    lam = profile.normalized_cumulant(m + 2)
                    prod *= (lam / factorial(m + 2)) ** mu / factorial(mu)
            total += hermite_value(nu + 2 * s, xv) * prod
        phi = mp.e ** (-xv * xv / 2) / mp.sqrt(2 * mp.pi)
        return +(phi * total)


def density_expansion(
    profile: CumulantProfile,
    j: int,
    k: int = 2,
    precision_bits: int = 256,
    variance_floor: float = VARIANCE_FLOOR,
):
    """Order-k expansion value at lattice point j (the caller compares it
    with sigma * P(S = j)).  k = 2 is the plain normal density; each extra
    order adds one Hermite correction."""
    if k < 2 or k > MAX_EXPANSION_ORDER:
        raise ValueError(f"k must be between 2 and {MAX_EXPANSION_ORDER}")
    n = profile.n
    with mp.workprec(precision_bits):
        var = (
            mp.mpf(profile.variance.numerator) / profile.variance.denominator
            if isinstance(profile.variance, Fraction)
            else mp.mpf(profile.variance)
        )
        if var / n < variance_floor:
            raise ExpansionConditionError(
                f"variance/n = {mp.nstr(var / n, 8)} below floor {variance_floor}"
            )
        mean = (
            mp.mpf(profile.mean.numerator) / profile.mean.denominator
            if isinstance(profile.mean, Fraction)
            else mp.mpf(profile.mean)
        )
        sigma = mp.sqrt(var)
        x = (j - mean) / sigma
        value = mp.e ** (-x * x / 2) / mp.sqrt(2 * mp.pi)
        for nu in range(1, k - 1):
            value += hermite_correction(nu, profile, x, precision_bits) / mp.mpf(n) ** (
                mp.mpf(nu) / 2
            )
        return +value
