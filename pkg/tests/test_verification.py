"""
Tests for the property suites behind ``congruent-census verify``.
"""

import random

import pytest

from congruent_census.exceptions import InputError
from congruent_census.gaussian import factor_primary, is_primary
from congruent_census.verification import (
    SUITES,
    _primary_primes,
    _random_primary_product,
    bijection_suite,
    lemmas_suite,
    oracle_suite,
    run_suite,
)


def failures(checks):
    return {check.name: check.failures for check in checks if check.failures}


class TestLemmas:
    @pytest.fixture(scope="class")
    def checks(self):
        return lemmas_suite(seed=1, samples=20)

    def test_all_identities_hold(self, checks):
        assert failures(checks) == {}

    def test_every_check_ran(self, checks):
        names = [check.name for check in checks]
        assert names == [
            "quartic_symbol_of_two",
            "quartic_reciprocity",
            "conjugation_identity",
            "matrix_counting_formulas",
            "admissible_class_counts",
        ]
        assert all(check.checked > 0 for check in checks)


class TestSymbolInputs:
    def test_primary_products(self):
        rng = random.Random(7)
        primes = _primary_primes(10_000)
        assert all(lam.norm() <= 10_000 and is_primary(lam) for lam in primes)
        for _ in range(50):
            theta = _random_primary_product(rng, primes)
            assert is_primary(theta)
            factorization = factor_primary(theta)
            assert factorization.unit_exp == 0
            assert 1 <= sum(mult for _, mult in factorization.factors) <= 4


class TestBijection:
    def test_small_range(self):
        checks = bijection_suite(x=3000, kmax=2)
        assert failures(checks) == {}
        by_name = {check.name: check for check in checks}
        assert by_name["rational_gaussian_bijection"].checked > 0
        assert by_name["convention_complementarity"].checked > 0


class TestOracle:
    def test_no_mismatches(self):
        checks = oracle_suite(1000, kmax=2)
        assert len(checks) == 1
        assert checks[0].passed


class TestRunSuite:
    def test_report(self):
        report = run_suite("lemmas", seed=3, samples=5)
        assert report.suite == "lemmas"
        assert report.seed == 3
        assert report.passed

    def test_default_seed_comes_from_settings(self):
        assert run_suite("lemmas", samples=2).seed == 20240601

    def test_unknown_suite(self):
        assert "everything" not in SUITES
        with pytest.raises(InputError):
            run_suite("everything")
