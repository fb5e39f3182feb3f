"""
Tests for the binary-quadratic-form class group oracle.
"""

import pytest

from congruent_census.classgroup_oracle import (
    QuadForm,
    _q_members,
    class_group_for_n,
    compare_with_oracle,
    compose,
    group_2part,
    inverse,
    oracle_sweep,
    power,
    principal_form,
    reduce,
    reduced_forms,
)
from congruent_census.exceptions import BadDiscriminant, DiscMismatch, TooLarge
from congruent_census.genus_theory import FactoredSquarefree


class TestForms:
    def test_reduce(self):
        assert reduce(QuadForm(2, 5, 4)) == QuadForm(1, 1, 2)
        assert reduce(QuadForm(3, -2, 14)) == QuadForm(3, -2, 14)
        assert reduce(QuadForm(14, 2, 3)) == QuadForm(3, -2, 14)

    def test_reduced_predicate(self):
        assert QuadForm(3, 2, 6).is_reduced()
        assert not QuadForm(3, -3, 6).is_reduced()
        assert not QuadForm(6, 2, 3).is_reduced()

    def test_principal_form(self):
        assert principal_form(-260) == QuadForm(1, 0, 65)
        assert principal_form(-7) == QuadForm(1, 1, 2)

    @pytest.mark.parametrize("D", [-6, 5, 0])
    def test_bad_discriminant(self, D):
        with pytest.raises(BadDiscriminant):
            principal_form(D)

    def test_discriminant_bound(self):
        with pytest.raises(TooLarge):
            principal_form(-4 * 10**9)

    def test_reduced_forms_of_minus_68(self):
        assert reduced_forms(-68) == [
            QuadForm(1, 0, 17),
            QuadForm(2, 2, 9),
            QuadForm(3, 2, 6),
            QuadForm(3, -2, 6),
        ]

    def test_reduced_forms_are_reduced_and_primitive(self):
        forms = reduced_forms(-260)
        assert len(forms) == 8
        assert all(f.is_reduced() and f.disc == -260 for f in forms)


class TestComposition:
    """Group law on the forms of discriminant -164, a cyclic group of order 8."""

    @pytest.fixture
    def forms(self):
        return reduced_forms(-164)

    def test_inverse(self, forms):
        identity = principal_form(-164)
        for f in forms:
            assert compose(f, inverse(f)) == identity
            assert power(f, -1) == inverse(f)

    def test_order_divides_class_number(self, forms):
        identity = principal_form(-164)
        for f in forms:
            assert power(f, len(forms)) == identity

    def test_commutative_and_associative(self, forms):
        f, g, h = forms[2], forms[4], forms[6]
        assert compose(f, g) == compose(g, f)
        assert compose(compose(f, g), h) == compose(f, compose(g, h))

    def test_cyclic(self, forms):
        orders = []
        identity = principal_form(-164)
        for f in forms:
            order = next(e for e in range(1, 9) if power(f, e) == identity)
            orders.append(order)
        assert max(orders) == 8

    def test_mismatched_discriminants(self):
        with pytest.raises(DiscMismatch):
            compose(QuadForm(2, 2, 9), QuadForm(2, 2, 33))


class TestClassGroup2Part:
    @pytest.mark.parametrize(
        "n,h,divisors",
        [(1, 1, []), (5, 2, [2]), (14, 4, [4]), (17, 4, [4]), (21, 4, [2, 2]), (41, 8, [8]), (65, 8, [2, 4])],
    )
    def test_structure(self, n, h, divisors):
        group = class_group_for_n(n)
        assert group.disc == -4 * n
        assert group.h == h
        assert group.divisors == divisors
        assert group.r2 == len(divisors)
        assert group.ambiguous_forms == 2**group.r2

    def test_group_2part_from_discriminant(self):
        assert group_2part(-260) == class_group_for_n(65)
        assert group_2part(-20, reduced_forms(-20)).divisors == [2]

    def test_ranks_for_65(self):
        group = class_group_for_n(65)
        assert (group.r2, group.r4, group.r8) == (2, 1, 0)

    @pytest.mark.parametrize("n", [3, 12, 18, 0])
    def test_not_fundamental(self, n):
        with pytest.raises(BadDiscriminant):
            class_group_for_n(n)


class TestOracleSweep:
    def test_q_members(self):
        assert [n.n for n in _q_members(1, 100, 3)] == [17, 41, 65, 73, 89, 97]
        assert [n.n for n in _q_members(1, 100, 1)] == [17, 41, 73, 89, 97]

    @pytest.mark.parametrize("n", [17, 41, 65, 145, 1513])
    def test_compare_with_oracle(self, n):
        mismatch, group = compare_with_oracle(FactoredSquarefree.from_int(n))
        assert mismatch is None
        assert group.disc == -4 * n

    def test_four_rank_two(self):
        _, group = compare_with_oracle(FactoredSquarefree.from_int(1513))
        assert group.r4 == 2

    def test_sweep_agrees(self):
        assert oracle_sweep(5000, kmax=3) == []

    def test_sweep_bound(self):
        with pytest.raises(TooLarge):
            oracle_sweep(10**9)


class TestTwoRankComparison:
    """The class group's 2-rank must equal the number of prime factors."""

    @pytest.fixture
    def wrong_two_rank(self, monkeypatch):
        def patched(n):
            real = class_group_for_n(n)
            return real.model_copy(update={"r2": real.r2 + 5})

        monkeypatch.setattr("congruent_census.classgroup_oracle.class_group_for_n", patched)

    def test_predicted_two_rank(self):
        _, group = compare_with_oracle(FactoredSquarefree.from_int(65))
        assert group.r2 == 2

    def test_wrong_two_rank_is_a_mismatch(self, wrong_two_rank):
        mismatch, _ = compare_with_oracle(FactoredSquarefree.from_int(65))
        assert mismatch is not None
        assert mismatch.predicted["r2"] == 2
        assert mismatch.oracle == {"r2": 7, "r4": 1, "r8": 0}

    def test_sweep_reports_two_rank_mismatches(self, wrong_two_rank):
        mismatches = oracle_sweep(100, kmax=2)
        assert [m.n for m in mismatches] == [17, 41, 65, 73, 89, 97]
