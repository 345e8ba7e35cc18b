"""Lattice-sum representations of the generating polynomial values.

For w > 0 and g(w) = 1/(2 (cosh w - 1)) the Chebyshev-side polynomials
satisfy

    L_n(g(w)) = (2n)! * (2 (cosh w - 1)/sinh w)
                * sum_{m in Z} (w + 2 pi i m)^(-(2n+1)),

and the Legendre-side ones

    M_n(g(w)) = ((cosh w - 1)/sinh w) * sum_{m in Z} J(n, n; w + 2 pi i m)

with J the exact closed-form integral from the laplace module.  Sums are
truncated at |m| <= m_max and always reduced in the fixed order
m = 0, -1, +1, -2, +2, ..., so results are bit-identical no matter how
the terms were produced.  Every truncated sum can be certified by the
proof-grade estimate

    |relative truncation error| <= 2 zeta((r+1)/2) (w/(4 pi))^((r+1)/2),

valid for r >= 2, where r = 2n for the L-series and r = n for the
M-series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath as mp

from .errors import PrecisionError
from .laplace import laplace_closed_form

ZETA_DIRECT_TERMS = 10_000


def _bernoulli_numbers(count: int) -> list[Fraction]:
    # Akiyama-Tanigawa; second convention (B_1 = +1/2), only even indices used.
    a = [Fraction(0)] * (count + 1)
    out = []
    for m in range(count + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return out


_BERNOULLI: list[Fraction] = []


def _bernoulli(k: int) -> Fraction:
    global _BERNOULLI
    if k >= len(_BERNOULLI):
        _BERNOULLI = _bernoulli_numbers(max(k, 2 * len(_BERNOULLI), 40))
    return _BERNOULLI[k]


def zeta_series(s, precision_bits: int = 256, terms: int = ZETA_DIRECT_TERMS) -> mp.mpf:
    """zeta(s) for real s > 1 by direct summation to `terms` plus an
    Euler-Maclaurin tail at the cutoff.  Correction terms are added until
    they drop below 2^-(precision_bits + 8); with the default cutoff that
    happens long before the asymptotic tail could turn."""
    with mp.workprec(precision_bits + 32):
        sv = mp.mpf(s) if not isinstance(s, Fraction) else mp.mpf(s.numerator) / s.denominator
        if sv <= 1:
            raise ValueError("requires s > 1")
        n = terms
        head = mp.fsum(mp.mpf(k) ** (-sv) for k in range(1, n))
        npow = mp.mpf(n) ** (-sv)
        total = head + npow / 2 + mp.mpf(n) ** (1 - sv) / (sv - 1)
        target = mp.mpf(2) ** (-(precision_bits + 8))
        rising = sv  # s (s+1) ... (s + 2i - 2)
        npow_i = npow / n  # n^(-s - 2i + 1)
        i = 1
        while True:
            b = _bernoulli(2 * i)
            term = (
                mp.mpf(b.numerator)
                / b.denominator
                / factorial(2 * i)
                * rising
                * npow_i
            )
            total += term
            if abs(term) < target:
                break
            i += 1
            rising *= (sv + 2 * i - 3) * (sv + 2 * i - 2)
            npow_i /= n * n
        return +total


def tail_bound(r: int, w, precision_bits: int = 256) -> mp.mpf:
    """Certified relative truncation bound 2 zeta((r+1)/2) (w/(4 pi))^((r+1)/2)
    for the lattice sums; requires r >= 2."""
    if r < 2:
        raise ValueError("bound requires r >= 2")
    with mp.workprec(precision_bits + 16):
        wv = mp.mpf(w)
        if wv <= 0:
            raise ValueError("w must be positive")
        expo = mp.mpf(r + 1) / 2
        return 2 * zeta_series(expo, precision_bits) * (wv / (4 * mp.pi)) ** expo


def _lattice_points(w, m_max: int):
    yield mp.mpc(w, 0)
    for m in range(1, m_max + 1):
        yield mp.mpc(w, -2 * mp.pi * m)
        yield mp.mpc(w, 2 * mp.pi * m)


def _check_imag(total, precision_bits: int) -> mp.mpf:
    limit = abs(total) * mp.mpf(2) ** (-precision_bits + 8)
    if abs(total.imag) > limit and abs(total.imag) > mp.mpf(2) ** (-precision_bits + 8):
        raise PrecisionError(
            f"conjugate terms failed to cancel: imag={mp.nstr(total.imag, 8)}"
        )
    return total.real


def eisenstein_chebyshev(n: int, w, m_max: int, precision_bits: int = 256) -> mp.mpf:
    """Truncated lattice sum approximating L_n(g(w)); real by conjugate
    pairing, summed in fixed order."""
    if n < 1:
        raise ValueError("requires n >= 1")
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    with mp.workprec(precision_bits + 32):
        wv = mp.mpf(w)
        if wv <= 0:
            raise ValueError("w must be positive")
        power = 2 * n + 1
        total = mp.mpc(0)
        for z in _lattice_points(wv, m_max):
            total += z ** (-power)
        total *= mp.mpf(factorial(2 * n)) * 2 * (mp.cosh(wv) - 1) / mp.sinh(wv)
        real = _check_imag(total, precision_bits)
    with mp.workprec(precision_bits):
        return +real


def eisenstein_legendre(n: int, w, m_max: int, precision_bits: int = 256) -> mp.mpf:
    """Truncated lattice sum approximating M_n(g(w)) via the closed-form
    integrals J(n, n; w + 2 pi i m)."""
    if n < 1:
        raise ValueError("requires n >= 1")
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    closed = laplace_closed_form(n, n)
    with mp.workprec(precision_bits + 32):
        wv = mp.mpf(w)
        if wv <= 0:
            raise ValueError("w must be positive")
        total = mp.mpc(0)
        for z in _lattice_points(wv, m_max):
            total += closed.eval(z)
        total *= (mp.cosh(wv) - 1) / mp.sinh(wv)
        real = _check_imag(total, precision_bits)
    with mp.workprec(precision_bits):
        return +real


def squeeze_argument(w, precision_bits: int = 256) -> mp.mpf:
    """g(w) = 1/(2 (cosh w - 1)), the polynomial argument reached by the
    lattice representation at parameter w."""
    with mp.workprec(precision_bits + 16):
        wv = mp.mpf(w)
        if wv <= 0:
            raise ValueError("w must be positive")
        return +(1 / (2 * (mp.cosh(wv) - 1)))


@dataclass(frozen=True)
class CertifiedValue:
    """A truncated lattice sum with its own truncation certificate: the
    relative distance to the untruncated sum is at most `bound` (and the
    bound, valid for the full tail m != 0, vastly overstates the part
    actually dropped)."""

    value: mp.mpf
    bound: mp.mpf
    m_max: int
    precision_bits: int


def certified_legendre(n: int, w, m_max: int = 16, precision_bits: int = 256) -> CertifiedValue:
    """eisenstein_legendre with the truncation bound attached; needs n >= 2
    for the bound to exist."""
    return CertifiedValue(
        value=eisenstein_legendre(n, w, m_max, precision_bits),
        bound=tail_bound(n, w, precision_bits),
        m_max=m_max,
        precision_bits=precision_bits,
    )


def certified_chebyshev(n: int, w, m_max: int = 16, precision_bits: int = 256) -> CertifiedValue:
    """eisenstein_chebyshev with the truncation bound attached (r = 2n)."""
    return CertifiedValue(
        value=eisenstein_chebyshev(n, w, m_max, precision_bits),
        bound=tail_bound(2 * n, w, precision_bits),
        m_max=m_max,
        precision_bits=precision_bits,
    )
