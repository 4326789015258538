from fractions import Fraction
import math

from hypothesis import given, settings, strategies as st
import pytest

from shadowlab.core.density import (
    IndexSet,
    as_fraction,
    bounded_mean_from_density,
    compare_mean,
    density_at,
    density_profile,
    exact_sum,
    is_syndetic,
    markov_density_bound,
    max_gap,
    prefix_means_below,
    schedule_junctions,
    subsequence_mean_bound,
    tail_window,
)
from shadowlab.core.pseudo_orbit import doubling_gap_schedule
from shadowlab.exceptions import DomainError, ParameterError, RangeError

errors_strategy = st.lists(
    st.floats(min_value=0.0, max_value=1.0, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=200,
)


def test_tail_window_covers_final_quarter():
    assert tail_window(8) == range(7, 9)
    assert tail_window(4096) == range(3073, 4097)
    assert tail_window(1) == range(1, 2)


def test_tail_window_rejects_bad_fraction():
    with pytest.raises(ParameterError):
        tail_window(10, 0)
    with pytest.raises(ParameterError):
        tail_window(10, "3/2")


def test_as_fraction_parses_strings():
    assert as_fraction("1/4") == Fraction(1, 4)
    with pytest.raises(ParameterError):
        as_fraction("a quarter")


class TestIndexSet:
    def test_rejects_unsorted_members(self):
        with pytest.raises(ParameterError):
            IndexSet(10, (3, 1))

    def test_rejects_out_of_range_members(self):
        with pytest.raises(RangeError):
            IndexSet(5, (0, 5))

    def test_from_iterable_sorts_and_dedupes(self):
        assert IndexSet.from_iterable(6, [4, 1, 4, 2]).members == (1, 2, 4)

    def test_complement_and_union(self):
        e = IndexSet(6, (0, 3))
        assert e.complement().members == (1, 2, 4, 5)
        assert e.union(e.complement()).members == tuple(range(6))
        with pytest.raises(ParameterError):
            e.union(IndexSet(7))

    def test_membership_and_counts(self):
        e = IndexSet(10, (2, 5, 9))
        assert 5 in e and 4 not in e and "5" not in e
        assert e.count_below(5) == 1
        assert e.count_below(10) == 3


def test_density_at_is_exact():
    e = IndexSet(12, (0, 3, 6, 9))
    assert density_at(e, 12) == Fraction(1, 3)
    assert density_at(e, 1) == 1


@pytest.mark.parametrize("n", [0, 13])
def test_density_at_out_of_range(n):
    with pytest.raises(RangeError):
        density_at(IndexSet(12), n)


def test_density_profile_bounds():
    e = IndexSet.from_iterable(100, range(0, 100, 2))
    profile = density_profile(e)
    assert 0 <= profile.lower_estimate <= profile.upper_estimate <= 1
    assert profile.value_at_full_horizon == Fraction(1, 2)
    assert profile.upper_estimate > Fraction(1, 2)


def test_max_gap_counts_both_ends():
    assert max_gap(IndexSet(10, (2, 5))) == 4
    assert max_gap(IndexSet(10, (0, 9))) == 9
    assert max_gap(IndexSet(10)) == 10


def test_is_syndetic():
    e = IndexSet.from_iterable(50, range(0, 50, 5))
    assert is_syndetic(e, 5)
    assert not is_syndetic(e, 4)
    assert not is_syndetic(IndexSet(50), 100)
    with pytest.raises(ParameterError):
        is_syndetic(e, 0)


@settings(max_examples=200, deadline=None)
@given(errors=errors_strategy, epsilon=st.floats(min_value=0.01, max_value=1.0))
def test_small_mean_forces_small_bad_density(errors, epsilon):
    markov = markov_density_bound(errors, epsilon)
    assert markov.premise_holds == (exact_sum(errors) < Fraction(epsilon) ** 2 * len(errors))
    if markov.premise_holds:
        assert markov.bad_density < epsilon


def test_markov_premise_is_not_fooled_by_rounding():
    epsilon = 0.3333333333333333
    errors = [epsilon] * 7 + [0.0] * 14
    markov = markov_density_bound(errors, epsilon)
    assert markov.mean < epsilon ** 2
    assert not markov.premise_holds
    assert markov.bad_density == Fraction(1, 3)


def test_compare_mean_is_exact():
    assert compare_mean([0.1] * 10, 0.1) == 0
    assert compare_mean([0.1] * 10, Fraction(1, 10)) == 1
    assert compare_mean([0.1, 0.2], Fraction(3, 20)) == 1
    assert compare_mean([0.0, 0.0], 0) == 0
    assert compare_mean([0.25, 0.75], math.nextafter(0.5, 1.0)) == -1


@settings(max_examples=200, deadline=None)
@given(errors=errors_strategy, threshold=st.floats(min_value=0.0, max_value=1.0))
def test_compare_mean_agrees_with_rationals(errors, threshold):
    gap = exact_sum(errors) - Fraction(threshold) * len(errors)
    assert compare_mean(errors, threshold) == (gap > 0) - (gap < 0)


@settings(max_examples=200, deadline=None)
@given(errors=errors_strategy, bound=st.floats(min_value=0.001, max_value=1.0))
def test_prefix_means_below_agrees_with_rationals(errors, bound):
    window = tail_window(len(errors))
    prefix = [exact_sum(errors[:n]) for n in window]
    expected = all(total < Fraction(bound) * n for n, total in zip(window, prefix))
    assert prefix_means_below(errors, window, bound) == expected


def test_prefix_means_below_at_equality():
    errors = [0.1] * 10
    assert not prefix_means_below(errors, tail_window(10), 0.1)
    assert prefix_means_below(errors, tail_window(10), math.nextafter(0.1, 1.0))
    with pytest.raises(RangeError):
        prefix_means_below(errors, range(1, 12), 0.1)


@settings(max_examples=200, deadline=None)
@given(errors=errors_strategy, eta=st.floats(min_value=0.001, max_value=1.0))
def test_mean_never_exceeds_density_bound(errors, eta):
    bound = bounded_mean_from_density(errors, eta, 1.0)
    assert isinstance(bound, Fraction)
    assert exact_sum(errors) <= bound * len(errors)
    assert compare_mean(errors, bound) <= 0


def test_bounded_mean_rejects_errors_above_diameter():
    with pytest.raises(DomainError):
        bounded_mean_from_density([0.1, 2.0], 0.5, 1.0)


def test_markov_bound_rejects_negative_errors():
    with pytest.raises(DomainError):
        markov_density_bound([0.1, -0.1], 0.5)


@settings(max_examples=200, deadline=None)
@given(
    values=st.lists(st.floats(min_value=0.0, max_value=1e6, allow_nan=False), min_size=6, max_size=120),
    k=st.integers(min_value=1, max_value=6),
)
def test_subsequence_mean_is_bounded(values, k):
    lhs, rhs = subsequence_mean_bound(values, k)
    assert lhs <= rhs


def test_subsequence_mean_needs_enough_values():
    with pytest.raises(ParameterError):
        subsequence_mean_bound([1.0, 2.0], 3)
    with pytest.raises(ParameterError):
        subsequence_mean_bound([1.0], 0)


def test_doubling_junctions():
    junctions = schedule_junctions(doubling_gap_schedule, 4096)
    assert junctions.members == tuple(2 ** (i + 1) - 2 for i in range(12))
    assert density_profile(junctions).upper_estimate < Fraction(1, 100)


@given(n=st.integers(min_value=4, max_value=6000))
@settings(max_examples=80, deadline=None)
def test_doubling_junction_density_shrinks_when_horizon_doubles(n):
    quarter = Fraction(1, 4)
    at_n = density_profile(schedule_junctions(doubling_gap_schedule, n), quarter)
    at_2n = density_profile(schedule_junctions(doubling_gap_schedule, 2 * n), quarter)
    assert at_2n.upper_estimate <= at_n.upper_estimate


def test_schedule_must_be_positive():
    with pytest.raises(ParameterError):
        schedule_junctions(lambda i: 0, 10)
