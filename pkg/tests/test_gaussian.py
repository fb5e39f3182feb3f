"""
Unit tests for Gaussian integer arithmetic and primary primes.
"""

import pytest

from congruent_census.exceptions import NotOdd, NotPrime
from congruent_census.gaussian import (
    GaussInt,
    PrimaryPrime,
    factor_primary,
    is_gaussian_prime,
    is_primary,
    prime_in_P_above,
    primary_associate,
    primes_in_P_up_to,
    two_squares,
)


class TestGaussInt:
    """Arithmetic and notation."""

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("3+2i", GaussInt(3, 2)),
            ("-1-2i", GaussInt(-1, -2)),
            ("-3+4i", GaussInt(-3, 4)),
            ("2i", GaussInt(0, 2)),
            ("i", GaussInt(0, 1)),
            ("-i", GaussInt(0, -1)),
            ("5", GaussInt(5, 0)),
            (" 1 + 4i ", GaussInt(1, 4)),
        ],
    )
    def test_parse(self, text, expected):
        assert GaussInt.parse(text) == expected

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            GaussInt.parse("")
        with pytest.raises(ValueError):
            GaussInt.parse("x+i")

    def test_str(self):
        assert str(GaussInt(3, -2)) == "3-2i"
        assert str(GaussInt(-1, 2)) == "-1+2i"
        assert str(GaussInt(0, -1)) == "-i"
        assert str(GaussInt(0, 1)) == "i"
        assert str(GaussInt(7)) == "7"

    def test_multiplication_and_norm(self):
        product = GaussInt(1, 2) * GaussInt(3, -1)
        assert product == GaussInt(5, 5)
        assert product.norm() == GaussInt(1, 2).norm() * GaussInt(3, -1).norm()

    def test_power(self):
        assert GaussInt(0, 1) ** 4 == GaussInt(1)
        assert GaussInt(1, 1) ** 2 == GaussInt(0, 2)

    def test_times_unit(self):
        assert GaussInt(2, 1).times_unit(1) == GaussInt(-1, 2)
        assert GaussInt(2, 1).times_unit(4) == GaussInt(2, 1)

    def test_exact_division(self):
        assert GaussInt(5, 5).exact_div(GaussInt(1, 2)) == GaussInt(3, -1)
        assert GaussInt(1, 2).divides(GaussInt(5, 5))
        with pytest.raises(ValueError):
            GaussInt(1).exact_div(GaussInt(2))


class TestPrimaryPrimes:
    """Primary associates and the set P."""

    def test_is_primary(self):
        assert is_primary(GaussInt(-1, 2))
        assert is_primary(GaussInt(3, 2))
        assert is_primary(GaussInt(-3))
        assert not is_primary(GaussInt(1, 2))

    def test_primary_associate(self):
        assert primary_associate(GaussInt(2, 1)) == (1, GaussInt(-1, 2))
        with pytest.raises(NotOdd):
            primary_associate(GaussInt(1, 1))

    def test_is_gaussian_prime(self):
        assert is_gaussian_prime(GaussInt(3))
        assert is_gaussian_prime(GaussInt(3, 2))
        assert not is_gaussian_prime(GaussInt(5))
        assert not is_gaussian_prime(GaussInt(1))

    def test_two_squares(self):
        assert two_squares(5) == (2, 1)
        assert two_squares(13) == (3, 2)
        x, y = two_squares(10009)
        assert x * x + y * y == 10009

    @pytest.mark.parametrize(
        "p,expected",
        [(5, GaussInt(-1, 2)), (13, GaussInt(3, 2)), (17, GaussInt(1, 4)), (29, GaussInt(-5, 2))],
    )
    def test_prime_in_P_above(self, p, expected):
        lam = prime_in_P_above(p)
        assert lam.value == expected
        assert lam.in_P
        assert lam.norm == p

    @pytest.mark.parametrize("p", [7, 21, 2])
    def test_prime_in_P_above_rejects(self, p):
        with pytest.raises(NotPrime):
            prime_in_P_above(p)

    def test_primes_in_P_up_to(self):
        assert [lam.norm for lam in primes_in_P_up_to(30)] == [5, 13, 17, 29]

    def test_primary_prime_validation(self):
        assert PrimaryPrime.of(GaussInt(3, 2)).in_P
        assert not PrimaryPrime.of(GaussInt(3, -2)).in_P
        with pytest.raises(NotPrime):
            PrimaryPrime.of(GaussInt(1, 2))
        with pytest.raises(NotPrime):
            PrimaryPrime.member_of_P(GaussInt(3, -2))
        with pytest.raises(NotOdd):
            PrimaryPrime.of(GaussInt(1, 1))


class TestFactorPrimary:
    """Factorisation into primary primes."""

    def test_split_primes_ordered_by_norm_then_im(self):
        result = factor_primary(GaussInt(65))
        assert [str(p) for p in result.primes()] == ["-1-2i", "-1+2i", "3-2i", "3+2i"]
        assert result.unit_exp == 0
        assert result.reconstruct() == GaussInt(65)

    def test_inert_prime(self):
        result = factor_primary(GaussInt(9))
        assert [(str(p), m) for p, m in result.factors] == [("-3", 2)]
        assert result.reconstruct() == GaussInt(9)

    def test_unit_is_recorded(self):
        g = GaussInt(2, 1)
        result = factor_primary(g)
        assert result.reconstruct() == g
        assert [str(p) for p in result.primes()] == ["-1+2i"]
        assert result.unit_exp == 3

    def test_even_norm_rejected(self):
        with pytest.raises(NotOdd):
            factor_primary(GaussInt(2))
