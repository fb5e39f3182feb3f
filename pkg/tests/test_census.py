"""
Tests for enumeration, classification and checkpointed census reports.
"""

from fractions import Fraction

import pytest

from congruent_census.census import (
    census_partition,
    enumerate_squarefree_k,
    largest_prime_bound,
    run_census,
)
from congruent_census.config import CensusSettings
from congruent_census.exceptions import ResourceLimit
from congruent_census.models import CensusConfig, Convention, PrimeFilter
from congruent_census.sieve import (
    factor_with_table,
    filtered_primes,
    prime_table,
    smallest_prime_factor,
)


class TestSieve:
    def test_prime_table(self):
        assert prime_table(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        assert prime_table(1).size == 0

    def test_filtered_primes(self):
        assert filtered_primes(50, PrimeFilter.ONE_MOD_4).tolist() == [5, 13, 17, 29, 37, 41]
        assert filtered_primes(100, PrimeFilter.ONE_MOD_8).tolist() == [17, 41, 73, 89, 97]

    def test_smallest_prime_factor(self):
        spf = smallest_prime_factor(100)
        assert spf[91] == 7
        assert spf[97] == 97
        assert factor_with_table(90, spf) == [2, 3, 3, 5]


class TestEnumeration:
    def test_two_primes_up_to_30(self):
        config = CensusConfig(x=30, k=2)
        assert sorted(n.n for n in enumerate_squarefree_k(config)) == [6, 10, 14, 15, 21, 22, 26]

    def test_three_primes_up_to_100(self):
        config = CensusConfig(x=100, k=3)
        members = sorted(n.n for n in enumerate_squarefree_k(config))
        assert members == [30, 42, 66, 70, 78]

    def test_filters(self):
        config = CensusConfig(x=100, k=2, filter=PrimeFilter.ONE_MOD_4)
        assert sorted(n.n for n in enumerate_squarefree_k(config)) == [65, 85]
        config = CensusConfig(x=100, k=2, filter=PrimeFilter.ONE_MOD_4, n_mod8=1)
        assert [n.n for n in enumerate_squarefree_k(config)] == [65]

    def test_largest_prime_ranges_partition_the_members(self):
        config = CensusConfig(x=1000, k=2)
        q_max = largest_prime_bound(config)
        whole = sorted(n.n for n in enumerate_squarefree_k(config))
        split = sorted(
            n.n
            for lo, hi in [(0, 40), (40, 200), (200, q_max)]
            for n in enumerate_squarefree_k(config, (lo, hi))
        )
        assert split == whole

    def test_primes(self):
        config = CensusConfig(x=100, k=1)
        assert len(list(enumerate_squarefree_k(config))) == 25


class TestCensusPartition:
    def test_tally_bins(self):
        config = CensusConfig(x=100, k=1, checkpoints=[50])
        tally, buckets, duration = census_partition(config, 0, 100)
        assert tally["C_k"] == [15, 10]
        assert tally["Q_k"] == [2, 3]
        assert sum(buckets["B|alpha=1|A=0"]) == 2
        assert duration >= 0


class TestRunCensus:
    """Cumulative counts, ratios and theory at each checkpoint."""

    @pytest.fixture
    def primes_report(self):
        return run_census(CensusConfig(x=100, k=1, checkpoints=[50]))

    def test_checkpoints(self, primes_report):
        assert [c.x for c in primes_report.checkpoints] == [50, 100]

    def test_counts_at_50(self, primes_report):
        counts = primes_report.checkpoints[0].counts
        assert counts["C_k"] == 15
        assert counts["Q_k"] == 2
        assert counts["P_k_d1"] == 1
        assert counts["P_k_d5"] == 1
        assert counts["Qtilde_k"] == 2

    def test_counts_at_100(self, primes_report):
        final = primes_report.checkpoints[-1]
        assert final.counts["C_k"] == 25
        assert final.counts["Q_k"] == 5
        assert final.counts["P_k_d1"] == 4
        assert final.counts["P_k_d5"] == 1
        assert final.counts["buckets_B"] == 4
        assert final.counts["buckets_Bprime"] == 0
        assert final.counts["Ptilde_construction"] == 0
        assert final.buckets == {"B|alpha=1|A=0": 2, "B|alpha=9|A=0": 2}

    def test_ratios_and_theory(self, primes_report):
        final = primes_report.checkpoints[-1]
        assert final.ratios["Q_k/C_k"] == pytest.approx(0.2)
        assert final.ratios["P_k_d1/Q_k"] == pytest.approx(0.8)
        assert final.theory["Q_k/C_k"].fraction == "1/4"
        assert final.theory["P_k_d1/Q_k"].fraction == "1/2"
        assert final.theory["Qtilde_k/C_k"].fraction == "1/4"
        assert final.theory["B|alpha=1|A=0/C_k"].fraction == "1/16"
        assert final.theory["buckets_B/C_k"].fraction == "1/8"

    def test_no_q_members(self):
        report = run_census(CensusConfig(x=30, k=2, checkpoints=[]))
        counts = report.checkpoints[-1].counts
        assert counts["C_k"] == 7
        assert counts["Q_k"] == 0
        assert report.checkpoints[-1].ratios["P_k_d1/Q_k"] is None

    def test_restricted_family_has_no_density_theory(self):
        config = CensusConfig(x=100, k=2, filter=PrimeFilter.ONE_MOD_4, n_mod8=1, checkpoints=[])
        final = run_census(config).checkpoints[-1]
        assert final.counts["C_k"] == 1
        assert final.counts["P_k_d5"] == 1
        assert final.counts["P_k_d1"] == 0
        assert "Q_k/C_k" not in final.theory
        assert final.theory["P_k_d1/Q_k"].fraction == "3/8"

    def test_convention_selects_theory_key(self):
        config = CensusConfig(x=100, k=1, convention=Convention.D5, checkpoints=[])
        final = run_census(config).checkpoints[-1]
        assert "P_k_d5/Q_k" in final.theory
        assert "P_k_d1/Q_k" not in final.theory

    def test_one_mod_eight_counts_only_qtilde(self):
        config = CensusConfig(x=10_000, k=2, filter=PrimeFilter.ONE_MOD_8, checkpoints=[])
        counts = run_census(config).checkpoints[-1].counts
        assert "Q_k" not in counts
        assert counts["Qtilde_k"] == counts["C_k"]
        assert counts["Ptilde_construction"] >= 1

    def test_n_mod8_other_than_one_skips_classification(self):
        config = CensusConfig(x=1000, k=2, n_mod8=5, checkpoints=[])
        counts = run_census(config).checkpoints[-1].counts
        assert set(counts) == {"C_k"}

    def test_bucket_families_add_up_to_Pk(self):
        config = CensusConfig(x=20_000, k=2, filter=PrimeFilter.ONE_MOD_4, checkpoints=[5000])
        for checkpoint in run_census(config).checkpoints:
            counts = checkpoint.counts
            assert counts["buckets_B"] + counts["buckets_Bprime"] == counts["P_k_d1"]

    def test_partition_count_does_not_change_the_report(self):
        single = run_census(CensusConfig(x=5000, k=2, checkpoints=[1000]))
        parallel = run_census(CensusConfig(x=5000, k=2, checkpoints=[1000], partitions=3))
        assert parallel.checkpoints == single.checkpoints

    def test_memory_budget(self):
        settings = CensusSettings(mem_budget_mb=16)
        with pytest.raises(ResourceLimit):
            run_census(CensusConfig(x=10**7, k=2), settings)

    def test_bound_density_is_exact(self):
        final = run_census(CensusConfig(x=10_000, k=2, checkpoints=[])).checkpoints[-1]
        assert Fraction(final.theory["Ptilde_construction/Qtilde_k"].fraction) == Fraction(1, 4)
