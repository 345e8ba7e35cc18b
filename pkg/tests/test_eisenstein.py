"""Lattice-sum and tail-bound tests.

Frozen decimals below come from an independent high-precision reference
run; each is quoted to fewer digits than the run produced.
"""

from fractions import Fraction

import mpmath as mp
import pytest

from lslab.clt import saddle_constant
from lslab.eisenstein import (
    certified_chebyshev,
    certified_legendre,
    eisenstein_chebyshev,
    eisenstein_legendre,
    squeeze_argument,
    tail_bound,
    zeta_series,
)
from lslab.genpoly import chebyshev_genpoly, legendre_genpoly_fast


@pytest.fixture(scope="module")
def w():
    return saddle_constant(256)


class TestZeta:
    @pytest.mark.parametrize("s", [Fraction(3, 2), Fraction(5, 2), Fraction(11, 2), Fraction(7, 3)])
    def test_matches_library(self, s):
        with mp.workprec(300):
            ours = zeta_series(s, 256)
            reference = mp.zeta(mp.mpf(s.numerator) / s.denominator)
            assert abs(ours - reference) < mp.mpf(2) ** -128

    def test_rejects_pole_side(self):
        with pytest.raises(ValueError):
            zeta_series(Fraction(1, 2))


class TestTailBound:
    def test_reference_values(self, w):
        assert abs(float(tail_bound(2, w)) - 0.1107389) < 1e-6
        val10 = float(tail_bound(10, w))
        assert abs(val10 - 1.4952054e-6) < 1e-11
        assert val10 < 2e-6

    def test_monotone_in_w(self):
        with mp.workprec(128):
            values = [float(tail_bound(2, mp.mpf(t) / 10, 128)) for t in range(1, 10)]
        assert values == sorted(values)
        assert values[0] < 1e-2

    def test_domain(self, w):
        with pytest.raises(ValueError):
            tail_bound(1, w)
        with pytest.raises(ValueError):
            tail_bound(3, -1)


class TestSqueezeArgument:
    def test_special_points(self, w):
        with mp.workprec(256):
            assert abs(squeeze_argument(w, 256) - 1) < mp.mpf(2) ** -240
            assert abs(squeeze_argument(2 * w, 256) - mp.mpf(1) / 5) < mp.mpf(2) ** -240
            golden_plus = mp.sqrt(5) + 2
            assert abs(squeeze_argument(w / 2, 256) - golden_plus) < mp.mpf(2) ** -240


class TestChebyshevLattice:
    def test_row_one(self, w):
        # L_1(1) = 2; the |m| > 16 truncation leaves an error around 5e-7,
        # well inside the certified bound (reference run: 4.908e-7)
        val = eisenstein_chebyshev(1, w, 16, 256)
        err = abs(float(val) - 2)
        assert err < 1e-6
        assert err < float(tail_bound(2, w)) * 2

    def test_row_three(self, w):
        val = eisenstein_chebyshev(3, w, 16, 256)
        assert abs(val - 842) < float(tail_bound(6, w)) * 842

    def test_single_term_at_double_argument(self, w):
        # g(2w) = 1/5 exactly, so the target value is  L_2(1/5) = 34/25
        val = eisenstein_chebyshev(2, 2 * w, 0, 256)
        exact = 24 / mp.mpf(25) + 2 / mp.mpf(5)
        rel = abs(val - exact) / exact
        assert float(rel) < float(tail_bound(4, 2 * w))

    def test_row_sums(self, w):
        with mp.workprec(300):
            for n in range(1, 11):
                exact = mp.mpf(sum(chebyshev_genpoly(n).coeffs))
                val = eisenstein_chebyshev(n, w, 16, 256)
                assert abs(val - exact) / exact < tail_bound(2 * n, w, 256)

    def test_domain(self, w):
        with pytest.raises(ValueError):
            eisenstein_chebyshev(0, w, 16)
        with pytest.raises(ValueError):
            eisenstein_chebyshev(2, -w, 16)
        with pytest.raises(ValueError):
            eisenstein_chebyshev(2, w, -1)


class TestLegendreLattice:
    def test_reference_rows(self, w):
        assert abs(eisenstein_legendre(3, w, 16, 256) - 920) < 1e-6
        assert abs(eisenstein_legendre(1, w, 16, 256) - 2) < 1e-4

    def test_half_argument(self, w):
        with mp.workprec(300):
            g = squeeze_argument(w / 2, 300)
            exact = legendre_genpoly_fast(2)(g)
            val = eisenstein_legendre(2, w / 2, 16, 256)
            assert abs(val - exact) / exact < tail_bound(2, w / 2, 256)

    def test_bound_certified_sweep(self, w):
        with mp.workprec(300):
            for wv in (w / 2, w, 2 * w):
                g = squeeze_argument(wv, 300)
                for n in range(2, 13):
                    exact = legendre_genpoly_fast(n)(g)
                    val = eisenstein_legendre(n, wv, 16, 256)
                    assert abs(val - exact) / exact < tail_bound(n, wv, 256)

    def test_certified_values_carry_their_bound(self, w):
        cert = certified_legendre(3, w, 16, 256)
        assert abs(float(cert.value) - 920) < float(cert.bound) * 920
        assert cert.m_max == 16 and cert.precision_bits == 256
        cert2 = certified_chebyshev(3, w, 16, 256)
        assert abs(float(cert2.value) - 842) < float(cert2.bound) * 842
        with mp.workprec(280):
            assert cert.bound == tail_bound(3, w, 256)
            assert cert2.bound == tail_bound(6, w, 256)

    def test_mass_identity(self, w):
        # sqrt5 * M_n(1) equals the full lattice sum of the closed forms
        from lslab.laplace import laplace_closed_form
        from lslab.triangles import modified_legendre_row

        with mp.workprec(300):
            for n in (5, 20):
                closed = laplace_closed_form(n, n)
                total = mp.mpc(0)
                for m in range(-16, 17):
                    total += closed.eval(mp.mpc(w, 2 * mp.pi * m))
                exact = mp.sqrt(5) * mp.mpf(sum(modified_legendre_row(n)))
                assert abs(total.real - exact) / exact < tail_bound(n, w, 256)
                assert abs(total.imag) < mp.mpf(2) ** -240 * abs(total.real)
