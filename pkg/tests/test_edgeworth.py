"""Bernoulli-array engine tests: exact convolution vs brute force,
cumulant paths, Hermite values, correction terms, expansion values."""

from fractions import Fraction
from itertools import product

import mpmath as mp
import pytest

from lslab.edgeworth import (
    BernoulliArray,
    cumulants_from_genpoly,
    cumulants_from_probabilities,
    density_expansion,
    distribution,
    hermite_correction,
    hermite_value,
    probabilities_from_roots,
)
from lslab.errors import DegenerateVarianceError, ExpansionConditionError
from lslab.genpoly import legendre_genpoly_fast, legendre_genpoly_recurrence
from lslab.sturm import certify_roots, refine_roots


def enumerate_distribution(probs):
    """Oracle: direct sum over all 2^n outcomes."""
    n = len(probs)
    dist = [Fraction(0)] * (n + 1)
    for outcome in product((0, 1), repeat=n):
        weight = Fraction(1)
        for p, hit in zip(probs, outcome):
            weight *= p if hit else 1 - p
        dist[sum(outcome)] += weight
    return dist


class TestProbabilities:
    def test_two_point_row(self):
        arr = probabilities_from_roots([Fraction(0), Fraction(-1, 6)])
        assert arr.probabilities == (Fraction(1), Fraction(6, 7))

    def test_single_zero_root(self):
        arr = probabilities_from_roots([Fraction(0)])
        assert arr.probabilities == (Fraction(1),)
        assert distribution(arr) == [0, Fraction(1)]

    def test_cubic_row_roots(self):
        roots = refine_roots(certify_roots(3), 128)
        arr = probabilities_from_roots([mp.mpf(0)] + roots, 128)
        with mp.workprec(128):
            expected = [1 / (1 + mp.mpf("0.21498299142")), 1 / (1 + mp.mpf("0.05168367524"))]
            assert abs(arr.probabilities[1] - expected[0]) < 1e-9
            assert abs(arr.probabilities[2] - expected[1]) < 1e-9

    def test_positive_root_rejected(self):
        with pytest.raises(ValueError):
            probabilities_from_roots([Fraction(1, 2)])


class TestDistribution:
    def test_two_point_row_exact(self):
        arr = probabilities_from_roots([Fraction(0), Fraction(-1, 6)])
        assert distribution(arr) == [0, Fraction(1, 7), Fraction(6, 7)]

    def test_cubic_row_matches_scaled_coefficients(self):
        roots = refine_roots(certify_roots(3), 200)
        arr = probabilities_from_roots([mp.mpf(0)] + roots, 200)
        dist = distribution(arr, 200)
        with mp.workprec(200):
            for j, coeff in enumerate((0, 8, 192, 720)):
                assert abs(dist[j] - mp.mpf(coeff) / 920) < mp.mpf(2) ** -150

    def test_brute_force_oracle(self):
        arrays = [
            tuple(Fraction(i + 1, i + 3) for i in range(9)),
            (Fraction(1), Fraction(6, 7), Fraction(1, 2)),
            (Fraction(1, 4),) * 6,
        ]
        for probs in arrays:
            assert distribution(BernoulliArray(probs)) == enumerate_distribution(probs)

    def test_normalization_exact(self):
        probs = tuple(Fraction(i + 2, 2 * i + 5) for i in range(10))
        assert sum(distribution(BernoulliArray(probs))) == 1


class TestCumulants:
    def test_lambda2_is_one(self):
        arr = BernoulliArray(tuple(Fraction(1, k + 2) for k in range(6)))
        prof = cumulants_from_probabilities(arr, 4)
        assert prof.normalized[0] == 1

    def test_symmetric_bernoulli_skewless(self):
        prof = cumulants_from_probabilities(BernoulliArray((Fraction(1, 2),) * 4), 3)
        assert prof.normalized_cumulant(3) == 0

    def test_third_cumulant_formula(self):
        # kappa_3 = p(1-p)(1-2p) = -30/343 at p = 6/7, recovered through
        # the normalization lambda_3 = kappa_3 / sigma^3 (n = 1)
        p = Fraction(6, 7)
        prof = cumulants_from_probabilities(BernoulliArray((p,)), 3, 128)
        assert prof.variance == Fraction(6, 49)
        with mp.workprec(128):
            direct = (mp.mpf(-30) / 343) / (mp.mpf(6) / 49) ** mp.mpf(1.5)
            assert abs(prof.normalized_cumulant(3) - direct) < mp.mpf(2) ** -100

    def test_genpoly_path_row2(self):
        prof = cumulants_from_genpoly(legendre_genpoly_recurrence(2), 4)
        assert prof.mean == Fraction(13, 7)
        assert prof.variance == Fraction(6, 49)

    def test_genpoly_path_row3(self):
        prof = cumulants_from_genpoly(legendre_genpoly_recurrence(3), 4)
        assert prof.mean == Fraction(319, 115)
        assert prof.variance == Fraction(2544, 13225)

    def test_degenerate_row(self):
        with pytest.raises(DegenerateVarianceError):
            cumulants_from_genpoly(legendre_genpoly_recurrence(1), 4)

    def test_two_paths_agree_row5(self):
        roots = refine_roots(certify_roots(5), 256)
        prof_a = cumulants_from_probabilities(
            probabilities_from_roots([mp.mpf(0)] + roots, 256), 6, 256
        )
        prof_b = cumulants_from_genpoly(legendre_genpoly_fast(5), 6, 256)
        with mp.workprec(256):
            for nu in range(2, 7):
                a, b = prof_a.normalized_cumulant(nu), prof_b.normalized_cumulant(nu)
                assert abs(a - b) < mp.mpf(2) ** -180 * (1 + abs(b))


class TestHermite:
    def test_symbolic_values(self):
        for x in (Fraction(2), Fraction(-1, 3), Fraction(7, 5)):
            assert hermite_value(0, x) == 1
            assert hermite_value(1, x) == x
            assert hermite_value(3, x) == x**3 - 3 * x
            assert hermite_value(4, x) == x**4 - 6 * x**2 + 3

    def test_parity(self):
        for m in range(11):
            for x in (Fraction(1, 2), Fraction(9, 4)):
                assert hermite_value(m, -x) == (-1) ** m * hermite_value(m, x)

    def test_rodrigues_style_recursion(self):
        # P_0 = 1, P_{m+1} = P' - x P gives H_m = (-1)^m P_m
        poly = [Fraction(1)]
        for m in range(7):
            for x in (Fraction(1, 3), Fraction(-2), Fraction(5, 2)):
                value = (-1) ** m * sum(c * x**i for i, c in enumerate(poly))
                assert value == hermite_value(m, x)
            nxt = [Fraction(0)] * (len(poly) + 1)
            for i, c in enumerate(poly):
                if i + 1 < len(poly):
                    nxt[i] += (i + 1) * poly[i + 1]
                nxt[i + 1] -= c
            poly = nxt


class TestCorrectionTerms:
    @pytest.fixture()
    def profile(self):
        return cumulants_from_genpoly(legendre_genpoly_fast(20), 6, 192)

    def test_odd_vanishes_at_zero(self, profile):
        assert abs(hermite_correction(1, profile, mp.mpf(0), 192)) < mp.mpf(2) ** -150

    def test_first_correction_shape(self, profile):
        with mp.workprec(192):
            x = mp.mpf("0.7")
            lam3 = profile.normalized_cumulant(3)
            phi = mp.e ** (-x * x / 2) / mp.sqrt(2 * mp.pi)
            expected = phi * hermite_value(3, x) * lam3 / 6
            assert abs(hermite_correction(1, profile, x, 192) - expected) < mp.mpf(2) ** -150

    def test_second_correction_shape(self, profile):
        with mp.workprec(192):
            x = mp.mpf("-1.1")
            lam3 = profile.normalized_cumulant(3)
            lam4 = profile.normalized_cumulant(4)
            phi = mp.e ** (-x * x / 2) / mp.sqrt(2 * mp.pi)
            expected = phi * (
                hermite_value(4, x) * lam4 / 24 + hermite_value(6, x) * lam3**2 / 72
            )
            assert abs(hermite_correction(2, profile, x, 192) - expected) < mp.mpf(2) ** -140

    def test_insufficient_cumulants(self):
        prof = cumulants_from_genpoly(legendre_genpoly_fast(6), 3, 128)
        with pytest.raises(ValueError):
            hermite_correction(2, prof, mp.mpf(0), 128)


class TestDensityExpansion:
    def test_two_point_reference_values(self):
        arr = probabilities_from_roots([Fraction(0), Fraction(-1, 6)])
        prof = cumulants_from_probabilities(arr, 6, 128)
        with mp.workprec(128):
            value = density_expansion(prof, 2, 2, 128)
            assert abs(value - mp.mpf("0.36704462")) < 1e-7
            sigma_p = mp.sqrt(mp.mpf(6) / 49) * mp.mpf(6) / 7
            assert abs(sigma_p - mp.mpf("0.29993751")) < 1e-7

    def test_near_mean_close_to_peak_density(self):
        prof = cumulants_from_genpoly(legendre_genpoly_fast(80), 6, 128)
        j = round(float(mp.mpf(prof.mean.numerator) / prof.mean.denominator))
        with mp.workprec(128):
            value = density_expansion(prof, j, 2, 128)
            assert abs(value - 1 / mp.sqrt(2 * mp.pi)) < 0.05

    def test_order3_improves_on_order2_small_row(self):
        n = 60
        prof = cumulants_from_genpoly(legendre_genpoly_fast(n), 6, 160)
        from lslab.triangles import modified_legendre_row

        row = modified_legendre_row(n)
        total = sum(row)
        with mp.workprec(160):
            sigma = mp.sqrt(mp.mpf(prof.variance.numerator) / prof.variance.denominator)
            err2 = max(
                abs(sigma * mp.mpf(row[j]) / total - density_expansion(prof, j, 2, 160))
                for j in range(n + 1)
            )
            err3 = max(
                abs(sigma * mp.mpf(row[j]) / total - density_expansion(prof, j, 3, 160))
                for j in range(n + 1)
            )
        assert err3 < err2

    def test_order_cap(self):
        prof = cumulants_from_genpoly(legendre_genpoly_fast(10), 6, 128)
        with pytest.raises(ValueError):
            density_expansion(prof, 5, 5, 128)
        with pytest.raises(ValueError):
            density_expansion(prof, 5, 1, 128)

    def test_variance_floor_guard(self):
        arr = BernoulliArray((Fraction(1, 10**6),) * 5)
        prof = cumulants_from_probabilities(arr, 6, 128)
        with pytest.raises(ExpansionConditionError):
            density_expansion(prof, 0, 2, 128)
