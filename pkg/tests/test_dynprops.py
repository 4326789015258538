from hypothesis import given, settings, strategies as st
import pytest

from shadowlab.core.density import is_syndetic
from shadowlab.core.dynprops import (
    PairKind,
    build_transition_graph,
    chain_is_valid,
    classify_pair,
    distality_probe,
    equicontinuity_modulus,
    find_chain,
    is_chain_transitive,
    is_totally_chain_transitive,
    is_transitive_sampled,
    proximality_experiment,
    recurrence_experiment,
    strongly_connected_components,
    syndetic_return_times,
)
from shadowlab.core.pseudo_orbit import OrbitKind
from shadowlab.core.spaces import (
    make_circle_rotation,
    make_doubling_circle,
    make_full_shift,
    make_interval_contraction,
    make_two_circles_swap_double,
    make_two_point_identity,
)
from shadowlab.exceptions import ParameterError


class TestTransitionGraph:
    def test_requires_delta_above_twice_resolution(self, doubling):
        with pytest.raises(ParameterError):
            build_transition_graph(doubling, 0.1, 0.05)

    def test_doubling_is_chain_transitive(self, doubling):
        g = build_transition_graph(doubling, 0.3, 0.1)
        assert len(g.nodes) == 64
        assert is_chain_transitive(g)
        assert len(strongly_connected_components(g)) == 1

    def test_contraction_is_not_chain_transitive(self):
        s = make_interval_contraction(0.5)
        g = build_transition_graph(s, 0.3, 0.1)
        assert not is_chain_transitive(g)
        assert find_chain(g, 0, 10) is None
        assert find_chain(g, 0, 0) == [0, 0]

    def test_paths_are_delta_chains(self, doubling):
        g = build_transition_graph(doubling, 0.3, 0.1)
        path = find_chain(g, 0, 31)
        assert path[0] == 0 and path[-1] == 31
        assert chain_is_valid(doubling, g.chain_points(path), 0.3)
        assert all(g.graph.has_edge(u, v) for u, v in zip(path, path[1:]))

    def test_two_circles_square_splits(self):
        s = make_two_circles_swap_double()
        assert is_totally_chain_transitive(s, 0.5, 0.1, 2) == [True, False]
        with pytest.raises(ParameterError):
            is_totally_chain_transitive(s, 0.5, 0.1, 0)


class TestTransitivity:
    def test_doubling_hits_every_sampled_pair(self, doubling):
        evidence = is_transitive_sampled(doubling, 0.3, 64, 5, seed=0)
        assert evidence.transitive
        assert evidence.pairs_checked == 5
        assert len(evidence.hit_times) == 5

    def test_isometry_never_reaches_the_middle(self, isometry):
        evidence = is_transitive_sampled(isometry, 0.1, 50, 1, seed=0, centers=[(0.1, 0.5)])
        assert not evidence.transitive
        assert evidence.failing_pair == (0.1, 0.5)

    def test_rotation_returns_syndetically(self):
        s = make_circle_rotation()
        returns = syndetic_return_times(s, 1.0, 0.1, 400)
        assert len(returns) > 0
        assert is_syndetic(returns, 100)


class TestPairs:
    def test_two_point_identity_is_distal(self):
        s = make_two_point_identity()
        pair = classify_pair(s, 0.0, 1.0, 50, 0.5)
        assert pair.kind == PairKind.DISTAL_AT_RESOLUTION
        assert not pair.is_proximal

    def test_contraction_pairs_are_asymptotic(self):
        s = make_interval_contraction(0.5)
        pair = classify_pair(s, 0.2, 0.8, 100, 0.1)
        assert pair.kind == PairKind.ASYMPTOTIC
        assert pair.is_proximal
        with pytest.raises(ParameterError):
            classify_pair(s, 0.2, 0.8, 100, 0.0)

    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
           short=st.integers(min_value=0, max_value=60), extra=st.integers(min_value=0, max_value=60))
    @settings(max_examples=60, deadline=None)
    def test_liminf_never_grows_with_horizon(self, seed, short, extra):
        s = make_doubling_circle()
        x, y = s.sample_points(2, seed=seed)
        first = classify_pair(s, x, y, short, 0.1)
        longer = classify_pair(s, x, y, short + extra, 0.1)
        assert longer.liminf_distance <= first.liminf_distance

    def test_isometry_is_distal(self, isometry):
        probe = distality_probe(isometry, 50, 100, seed=1)
        assert probe.distal and probe.almost_distal
        assert probe.constant_distance_pairs == probe.pairs_checked == 50

    def test_contraction_is_almost_distal_only(self):
        probe = distality_probe(make_interval_contraction(0.5), 20, 60, seed=1)
        assert not probe.distal
        assert probe.almost_distal
        assert probe.counts[PairKind.ASYMPTOTIC] == 20

    def test_equicontinuity(self, isometry, doubling):
        assert equicontinuity_modulus(isometry, 0.1, 50, 20, seed=0).modulus < 0.1
        assert equicontinuity_modulus(doubling, 0.1, 50, 20, seed=0).modulus > 1.0


def test_proximality_on_full_shift():
    s = make_full_shift(2, 1100)
    x, y = s.sample_points(2, seed=3)
    outcome = proximality_experiment(s, x, y, 2 ** -3, 1024)
    assert outcome.verdict.satisfied
    assert outcome.success
    assert outcome.pair_zx.is_proximal and outcome.pair_zy.is_proximal
    assert outcome.witness_sequence.kind == OrbitKind.DELTA_ERGODIC


def test_recurrence_on_golden_rotation():
    s = make_circle_rotation()
    outcome = recurrence_experiment(s, 0.05, 0.1, 512, 0.01, sample_count=4, seed=0)
    assert outcome.period == 89
    assert outcome.syndetic
    assert outcome.pseudo_orbit.kind == OrbitKind.DELTA_PSEUDO
    assert outcome.pseudo_orbit.horizon == 512
    assert len(outcome.candidate_gaps) == 4
