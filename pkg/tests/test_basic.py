"""
Basic tests to verify the package imports and model defaults.
"""

import pytest
from pydantic import ValidationError

import congruent_census
from congruent_census.config import CensusSettings
from congruent_census.models import (
    CensusConfig,
    ClassGroup2Part,
    CliInvocation,
    Convention,
    PrimeFilter,
    TheoryValue,
    VerificationCheck,
    VerificationReport,
)


def test_imports_work():
    """Test that the public names are exported."""
    for name in congruent_census.__all__:
        assert getattr(congruent_census, name) is not None
    assert congruent_census.__version__ == "0.1.0"


def test_enum_values():
    """Test the wire values of the enums."""
    assert PrimeFilter.ALL_PRIMES == "all"
    assert PrimeFilter.ONE_MOD_4 == "1mod4"
    assert PrimeFilter.ONE_MOD_8 == "1mod8"
    assert Convention.D1 == "d1"
    assert Convention.D5 == "d5"


def test_census_config_defaults():
    """Test that CensusConfig has the documented defaults."""
    config = CensusConfig(x=50_000, k=2)

    assert config.filter == PrimeFilter.ALL_PRIMES
    assert config.n_mod8 is None
    assert config.convention == Convention.D1
    assert config.partitions == 1
    assert config.effective_checkpoints() == [10_000, 50_000]


def test_census_config_sorts_checkpoints():
    config = CensusConfig(x=1000, k=1, checkpoints=[500, 100, 500])
    assert config.checkpoints == [100, 500]
    assert config.effective_checkpoints() == [100, 500, 1000]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"x": 1, "k": 1},
        {"x": 100, "k": 0},
        {"x": 100, "k": 9},
        {"x": 100, "k": 1, "n_mod8": 8},
        {"x": 100, "k": 1, "checkpoints": [1]},
    ],
)
def test_census_config_rejects_bad_values(kwargs):
    with pytest.raises(ValidationError):
        CensusConfig(**kwargs)


def test_partitions_not_serialized():
    config = CensusConfig(x=100, k=1, partitions=4)
    assert "partitions" not in config.model_dump()


def test_theory_value_from_fraction():
    from fractions import Fraction

    value = TheoryValue.of(Fraction(3, 8))
    assert value.fraction == "3/8"
    assert value.decimal == 0.375


def test_class_group_rank():
    group = ClassGroup2Part(disc=-260, h=8, divisors=[2, 4], r2=2, r4=1, r8=0, ambiguous_forms=4)
    assert group.rank(1) == 2
    assert group.rank(2) == 1
    assert group.rank(3) == 0


def test_verification_report_passed():
    ok = VerificationCheck(name="a", checked=3)
    bad = VerificationCheck(name="b", checked=3, failures=["n=65"])
    assert VerificationReport(suite="lemmas", seed=1, checks=[ok]).passed
    assert not VerificationReport(suite="lemmas", seed=1, checks=[ok, bad]).passed


def test_cli_invocation_rejects_unknown_fields():
    with pytest.raises(ValidationError):
        CliInvocation(subcommand="census", colour="red")
    with pytest.raises(ValidationError):
        CliInvocation(subcommand="bogus")


@pytest.mark.parametrize("value", [2, 6])
def test_max_enumerated_k_bounds(value):
    with pytest.raises(ValidationError):
        CensusSettings(max_enumerated_k=value)
