import random
from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from mmfp import qseries
from mmfp.qseries import (
    QSeries,
    bernoulli,
    delta_qexp,
    divisor_power_sum,
    eisenstein_qexp,
    generator_powers,
    hasse_power,
    hasse_qexp,
    series_mul,
)
from mmfp.utils.errors import FieldMismatch, HasseNotConstant, InsufficientPrecision, WeightMismatch

PROPERTY_PRIMES = (5, 7, 11, 13)


def coefficients(f):
    return f.coefficients.tolist()


class TestQSeries:
    def test_from_coefficients_reduces(self, f5):
        f = QSeries.from_coefficients([6, -1, 10], 4, f5)
        assert coefficients(f) == [1, 4, 0]
        assert f.precision == 3
        assert f.weight == 4

    def test_coefficient_out_of_range(self, f5):
        f = QSeries.zero(f5, 3)
        with pytest.raises(InsufficientPrecision):
            f[3]

    def test_valuation_and_normalization(self, f7):
        f = QSeries.from_coefficients([0, 0, 3, 1], 12, f7)
        assert f.valuation() == 2
        assert f.leading_coefficient() == 3
        assert coefficients(f.normalized()) == [0, 0, 1, 5]
        assert QSeries.zero(f7, 4).valuation() is None

    def test_addition_needs_equal_weights(self, f5):
        with pytest.raises(WeightMismatch):
            QSeries.one(f5, 3, 4) + QSeries.one(f5, 3, 6)

    def test_addition_truncates_to_common_precision(self, f5):
        total = QSeries.one(f5, 5, 4) + QSeries.one(f5, 3, 4)
        assert coefficients(total) == [2, 0, 0]

    def test_field_mismatch(self, f5, f7):
        with pytest.raises(FieldMismatch):
            series_mul(QSeries.one(f5, 3), QSeries.one(f7, 3))

    def test_truncate_cannot_extend(self, f5):
        with pytest.raises(InsufficientPrecision):
            QSeries.one(f5, 3).truncate(4)

    def test_embed_into_extension(self, f5, f25):
        f = QSeries.from_coefficients([1, 2, 3], 4, f5).embed(f25)
        assert f.field == f25
        assert coefficients(f) == [1, 2, 3]

    def test_format(self, f7):
        assert eisenstein_qexp(4, 7, 3).format() == "1 + 2q + 4q^2 + O(q^3)"
        assert QSeries.zero(f7, 2).format() == "O(q^2)"


class TestSeriesMul:
    def test_binomial(self, f5):
        one_plus_q = QSeries.from_coefficients([1, 1, 0], 0, f5)
        assert coefficients(series_mul(one_plus_q, one_plus_q)) == [1, 2, 1]

    def test_e4_squared_is_e8(self):
        e4 = eisenstein_qexp(4, 7, 5)
        assert series_mul(e4, e4) == eisenstein_qexp(8, 7, 5)

    def test_zero_factor(self, f7):
        e4 = eisenstein_qexp(4, 7, 5)
        assert series_mul(e4, QSeries.zero(f7, 5)).is_zero()

    def test_product_over_extension(self, f25):
        a = f25([0, 1])
        f = QSeries.from_coefficients([1, a], 0, f25)
        # (1 + a q)^2 = 1 + 2a q + a^2 q^2
        g = f * QSeries.from_coefficients([1, a, 0], 0, f25)
        assert g[1] == 2 * a
        assert g.precision == 2


class TestArithmeticFunctions:
    @pytest.mark.parametrize("n,r,expected", [(1, 3, 1), (6, 3, 252), (4, 5, 1057), (12, 0, 6)])
    def test_divisor_power_sum(self, n, r, expected):
        assert divisor_power_sum(n, r) == expected

    @pytest.mark.parametrize("k,expected", [
        (0, Fraction(1)), (1, Fraction(-1, 2)), (3, Fraction(0)),
        (4, Fraction(-1, 30)), (12, Fraction(-691, 2730)),
    ])
    def test_bernoulli(self, k, expected):
        assert bernoulli(k) == expected


class TestGenerators:
    def test_eisenstein_examples(self):
        assert coefficients(eisenstein_qexp(4, 5, 3)) == [1, 0, 0]
        assert coefficients(eisenstein_qexp(4, 7, 3)) == [1, 2, 4]
        assert coefficients(eisenstein_qexp(6, 5, 3)) == [1, 1, 3]
        assert eisenstein_qexp(6, 5, 3).weight == 6

    def test_eisenstein_rejects_bad_weight(self):
        with pytest.raises(ValueError):
            eisenstein_qexp(2, 5, 3)
        with pytest.raises(ValueError):
            eisenstein_qexp(5, 5, 3)

    def test_delta_examples(self):
        assert coefficients(delta_qexp(5, 5)) == [0, 1, 1, 2, 3]
        assert coefficients(delta_qexp(7, 3)) == [0, 1, 4]
        assert delta_qexp(7, 3).weight == 12

    def test_delta_needs_precision_two(self):
        with pytest.raises(InsufficientPrecision):
            delta_qexp(5, 1)

    @pytest.mark.parametrize("p,m,weight", [(5, 10, 4), (7, 10, 6), (11, 20, 10)])
    def test_hasse_examples(self, p, m, weight):
        hasse = hasse_qexp(p, m)
        assert hasse.weight == weight
        assert coefficients(hasse.as_series) == [1] + [0] * (m - 1)

    @pytest.mark.parametrize("p", PROPERTY_PRIMES)
    def test_hasse_is_one_at_high_precision(self, p):
        # every non-constant coefficient of E_{p-1} carries -2(p-1)/B_{p-1}, which p divides
        assert (Fraction(-2 * (p - 1)) / bernoulli(p - 1)).numerator % p == 0
        e = eisenstein_qexp(p - 1, p, 200)
        assert e == QSeries.one(e.field, 200, p - 1)

    @pytest.mark.parametrize("p", PROPERTY_PRIMES)
    def test_discriminant_identity(self, p):
        m = 200
        e4, e6 = eisenstein_qexp(4, p, m), eisenstein_qexp(6, p, m)
        assert e4 ** 3 - e6 ** 2 == delta_qexp(p, m) * 1728

    def test_hasse_power(self):
        a3 = hasse_power(5, 3, 6)
        assert a3.weight == 12
        assert coefficients(a3) == [1, 0, 0, 0, 0, 0]

    def test_generator_powers_weight(self):
        f = generator_powers(7, 8, 1, 1, 1)
        assert f.weight == 22
        assert f.valuation() == 1


class TestIdentities:
    def test_series_mul_commutes_and_associates(self, f7, f25):
        rng = random.Random(5)
        for field in (f7, f25):
            for _ in range(20):
                f, g, h = (
                    QSeries(np.array([rng.randrange(field.order) for _ in range(12)]), 2, field)
                    for _ in range(3)
                )
                assert series_mul(f, g) == series_mul(g, f)
                assert series_mul(series_mul(f, g), h) == series_mul(f, series_mul(g, h))

    def test_divisor_power_sum_is_multiplicative(self):
        rng = random.Random(3)
        checked = 0
        while checked < 40:
            m, n, r = rng.randrange(1, 60), rng.randrange(1, 60), rng.randrange(0, 8)
            if gcd(m, n) != 1:
                continue
            assert divisor_power_sum(m * n, r) == divisor_power_sum(m, r) * divisor_power_sum(n, r)
            checked += 1

    @pytest.mark.parametrize("p", PROPERTY_PRIMES)
    def test_e4_times_e6_is_e10(self, p):
        m = 60
        assert eisenstein_qexp(4, p, m) * eisenstein_qexp(6, p, m) == eisenstein_qexp(10, p, m)

    @pytest.mark.parametrize("p", [5, 7])
    def test_delta_is_multiplicative(self, p):
        delta = delta_qexp(p, 121)
        for m in range(2, 11):
            for n in range(m + 1, 120 // m + 1):
                if gcd(m, n) == 1:
                    assert delta[m * n] == delta[m] * delta[n]

    def test_hasse_identity_is_computed(self, monkeypatch):
        monkeypatch.setattr(qseries, "bernoulli", lambda k: Fraction(1, 3))
        with pytest.raises(HasseNotConstant):
            hasse_qexp(7, 50)
