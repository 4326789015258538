from fractions import Fraction
import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from shadowlab.core.density import tail_window
from shadowlab.core.pseudo_orbit import exact_orbit, perturbed_orbit
from shadowlab.core.verify import (
    Criterion,
    TraceReport,
    check,
    check_average,
    check_d_lower,
    check_mean_ergodic,
    check_mean_ergodic_split,
    check_pointwise,
    ranking_statistic,
    score_candidates,
    search_tracer,
    shift_constructive_tracer,
    trace,
)
from shadowlab.exceptions import DomainError, ParameterError, RangeError

error_lists = st.lists(
    st.floats(min_value=0.0, max_value=1.0, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=150,
)


def test_statistic_equal_to_epsilon_is_not_satisfied():
    report = TraceReport(np.full(40, 0.25), diameter=1.0)
    for criterion in (Criterion.POINTWISE, Criterion.AVERAGE, Criterion.MEAN_ERGODIC):
        assert not check(report, criterion, 0.25).satisfied
    assert not check_d_lower(report, 0.25).satisfied


def test_report_rejects_errors_above_diameter():
    with pytest.raises(DomainError):
        TraceReport(np.array([0.1, 1.5]), diameter=1.0)
    with pytest.raises(ParameterError):
        TraceReport(np.array([]), diameter=1.0)


def test_trace_horizon_bounds(doubling):
    p = exact_orbit(doubling, 1.0, 10)
    assert trace(doubling, 1.0, p, horizon=4).horizon == 4
    with pytest.raises(ParameterError):
        trace(doubling, 1.0, p, horizon=0)
    with pytest.raises(RangeError):
        trace(doubling, 1.0, p, horizon=11)


def test_exact_orbit_traces_itself(doubling):
    p = exact_orbit(doubling, 2.5, 200)
    report = trace(doubling, 2.5, p)
    assert report.sup_error == 0.0
    assert check_pointwise(report, 1e-9).satisfied


@settings(max_examples=200, deadline=None)
@given(errors=error_lists)
def test_pointwise_implies_weaker_criteria(errors):
    epsilon = max(errors) * 1.001 + 1e-9
    report = TraceReport(np.array(errors), diameter=1.0)
    assert check_pointwise(report, epsilon).satisfied
    assert check_average(report, epsilon).satisfied
    assert check_mean_ergodic(report, epsilon).satisfied
    assert check_d_lower(report, epsilon).satisfied


def test_average_check_is_decided_exactly():
    report = TraceReport(np.full(10, 0.1), diameter=1.0)
    assert report.cesaro_mean_estimate == pytest.approx(0.1)
    assert not check_average(report, 0.1).satisfied
    assert check_average(report, math.nextafter(0.1, 1.0)).satisfied


@settings(max_examples=200, deadline=None)
@given(errors=error_lists, epsilon=st.floats(min_value=0.01, max_value=1.0))
def test_average_check_matches_rational_prefix_means(errors, epsilon):
    report = TraceReport(np.array(errors), diameter=1.0)
    window = tail_window(len(errors))
    expected = all(
        sum(map(Fraction, errors[:n]), Fraction(0)) < Fraction(epsilon) * n for n in window
    )
    assert check_average(report, epsilon).satisfied == expected


@settings(max_examples=200, deadline=None)
@given(errors=error_lists, epsilon=st.floats(min_value=0.01, max_value=1.0))
def test_bad_and_good_densities_are_complementary(errors, epsilon):
    report = TraceReport(np.array(errors), diameter=1.0)
    assert report.bad_upper_density(epsilon) + report.good_lower_density(epsilon) == 1


def test_split_thresholds_are_reported():
    report = TraceReport(np.array([0.0] * 9 + [0.5]), diameter=1.0, tail_fraction=Fraction(1, 10))
    verdict = check_mean_ergodic_split(report, 0.2, 0.5)
    assert verdict.satisfied
    assert verdict.statistic == pytest.approx(0.1)
    assert "density threshold" in verdict.note


def test_ranking_statistic_orders_d_lower_by_good_density():
    good = TraceReport(np.zeros(20), diameter=1.0)
    bad = TraceReport(np.ones(20), diameter=1.0)
    assert ranking_statistic(good, Criterion.D_LOWER, 0.5) < ranking_statistic(bad, Criterion.D_LOWER, 0.5)


def test_vectorized_and_scalar_scores_agree(isometry):
    p = perturbed_orbit(isometry, 0.3, 0.05, 128, seed=2)
    candidates = [0.0, 0.3, 0.31, 0.7]
    for criterion in Criterion:
        fast = score_candidates(isometry, p, candidates, criterion, 0.05)
        slow = [ranking_statistic(trace(isometry, c, p), criterion, 0.05) for c in candidates]
        assert fast.tolist() == pytest.approx(slow)


def test_search_prefers_seeds_on_ties(doubling):
    p = exact_orbit(doubling, 1.2345, 64)
    verdict = search_tracer(doubling, p, 0.05, Criterion.POINTWISE, 0.5, seeds=(1.2345,))
    assert verdict.satisfied
    assert verdict.witness == 1.2345
    assert "one-sided" in verdict.note


def test_search_improves_with_resolution(isometry):
    p = perturbed_orbit(isometry, 0.37, 0.05, 128, seed=11)
    coarse = search_tracer(isometry, p, 0.05, Criterion.AVERAGE, 0.1)
    fine = search_tracer(isometry, p, 0.05, Criterion.AVERAGE, 0.05)
    assert fine.statistic <= coarse.statistic


@pytest.mark.parametrize("coarse_resolution, fine_resolution", [(0.3, 0.15), (0.3, 0.2), (0.45, 0.07)])
def test_search_never_worsens_at_non_dyadic_refinement(isometry, coarse_resolution, fine_resolution):
    p = exact_orbit(isometry, 0.25, 64)
    coarse = search_tracer(isometry, p, 0.01, Criterion.POINTWISE, coarse_resolution)
    fine = search_tracer(isometry, p, 0.01, Criterion.POINTWISE, fine_resolution)
    assert coarse.satisfied and fine.satisfied
    assert fine.statistic <= coarse.statistic == 0.0


def test_search_on_shift_keeps_constructive_seed(shift):
    p = perturbed_orbit(shift, shift.sample_points(1, seed=0)[0], 2 ** -4, 32, seed=0)
    z = shift_constructive_tracer(p, 4)
    verdict = search_tracer(shift, p, 2 ** -3, Criterion.MEAN_ERGODIC, 2 ** -4, seeds=(z,), workers=2)
    assert verdict.satisfied
    assert verdict.witness == z
    assert verdict.statistic == 0.0


def test_constructive_shift_tracer(shift):
    delta = 2 ** -6
    p = perturbed_orbit(shift, shift.sample_points(1, seed=5)[0], delta, 40, seed=5)
    z = shift_constructive_tracer(p, 6)
    report = trace(shift, z, p)
    assert check_pointwise(report, delta).satisfied
    with pytest.raises(ParameterError):
        shift_constructive_tracer(p, 0)


def test_constructive_tracer_needs_symbols(doubling):
    with pytest.raises(ParameterError):
        shift_constructive_tracer(exact_orbit(doubling, 1.0, 8), 2)
