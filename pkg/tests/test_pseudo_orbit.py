from fractions import Fraction

import numpy as np
import pytest

from shadowlab.core.density import IndexSet, density_profile
from shadowlab.core.pseudo_orbit import (
    OrbitKind,
    PseudoOrbit,
    average_error_of_step,
    doubling_block_schedule,
    doubling_gap_schedule,
    ergodic_pseudo_orbit,
    exact_orbit,
    factorial_block_schedule,
    interleave_for_power,
    is_almost_average,
    isometry_block_sequence,
    periodic_pseudo_orbit,
    perturbed_orbit,
    project_component,
    proximality_witness_sequence,
    pseudo_orbit_from_points,
    rescan_pseudo_orbit,
    witness_partition,
)
from shadowlab.core.spaces import make_power, make_product
from shadowlab.exceptions import ParameterError


def test_perturbed_orbit_has_no_breaks(doubling):
    p = perturbed_orbit(doubling, 1.0, delta=0.05, horizon=500, seed=4)
    assert p.kind == OrbitKind.DELTA_PSEUDO
    assert len(p.break_set) == 0
    assert p.step_errors.max() < 0.05
    assert p.horizon == 500


def test_perturbed_orbit_is_reproducible(doubling):
    a = perturbed_orbit(doubling, 1.0, 0.05, 100, seed=9)
    b = perturbed_orbit(doubling, 1.0, 0.05, 100, seed=9)
    assert a.points == b.points


def test_zero_radius_reproduces_exact_orbit(doubling):
    p = perturbed_orbit(doubling, 1.0, 0.05, 50, seed=0, radius=0.0)
    assert p.points == exact_orbit(doubling, 1.0, 50).points


def test_pseudo_orbit_rejects_breaks_for_chain_kinds(isometry):
    with pytest.raises(ParameterError):
        pseudo_orbit_from_points(isometry, [0.0, 0.0], 0.1, kind=OrbitKind.DELTA_CHAIN)


def test_invalid_generator_arguments(doubling):
    with pytest.raises(ParameterError):
        perturbed_orbit(doubling, 1.0, 0.0, 10, seed=0)
    with pytest.raises(ParameterError):
        perturbed_orbit(doubling, 1.0, 0.1, 10, seed=0, radius=0.1)
    with pytest.raises(ParameterError):
        perturbed_orbit(doubling, 1.0, 0.1, 0, seed=0)


class TestErgodicPseudoOrbit:
    def test_breaks_sit_on_junctions(self, constant_map):
        p = ergodic_pseudo_orbit(constant_map, [0.0] * 10, 0.1, doubling_gap_schedule, 64, seed=1)
        assert p.kind == OrbitKind.DELTA_ERGODIC
        assert p.junctions.members == (0, 2, 6, 14, 30, 62)
        assert p.break_set == p.junctions
        assert density_profile(p.break_set).upper_estimate < Fraction(1, 2)

    def test_stored_breaks_match_rescan(self, doubling):
        p = ergodic_pseudo_orbit(doubling, [0.5], 0.05, doubling_gap_schedule, 1024, seed=3)
        _, rescanned = rescan_pseudo_orbit(doubling, p.points, p.delta)
        assert rescanned == p.break_set
        assert set(p.break_set) <= set(p.junctions)

    def test_short_horizon_is_rejected(self, constant_map):
        with pytest.raises(ParameterError):
            ergodic_pseudo_orbit(constant_map, [0.0] * 10, 0.1, doubling_gap_schedule, 4, seed=1)

    def test_non_growing_schedule_is_rejected(self, doubling):
        with pytest.raises(ParameterError):
            ergodic_pseudo_orbit(doubling, [0.5], 0.05, lambda i: 4, 64, seed=0)

    def test_single_chain_matches_perturbed_orbit(self, doubling):
        p = ergodic_pseudo_orbit(doubling, [1.0], 0.05, None, 200, seed=5)
        assert p.points == perturbed_orbit(doubling, 1.0, 0.05, 200, seed=5).points


def test_isometry_blocks():
    p = isometry_block_sequence(8)
    assert p.horizon == 146
    assert len(p.break_set) == 15
    assert p.points[:4] == (0.0, 1.0, 0.0, 1.0)


def test_interleave_places_breaks(isometry):
    square = make_power(isometry, 2)
    base = pseudo_orbit_from_points(
        square, [0.0, 0.5, 0.5, 0.5, 0.5, 0.9, 0.9, 0.9], 0.3, kind=OrbitKind.DELTA_ERGODIC
    )
    assert base.break_set.members == (0, 4)
    woven = interleave_for_power(isometry, base, 2)
    assert woven.horizon == 16
    assert woven.break_set.members == (1, 9)
    assert woven.points[:2] == (0.0, 1.0)
    assert interleave_for_power(isometry, base, 1) is base
    with pytest.raises(ParameterError):
        interleave_for_power(isometry, base, 3)
    with pytest.raises(ParameterError):
        interleave_for_power(isometry, base, 0)


def test_witness_partition_splits_blocks():
    first, second = witness_partition(doubling_block_schedule, 20)
    assert first.members[:3] == (0, 3, 4)
    assert second.members[:2] == (1, 2)
    assert set(first) | set(second) == set(range(20))
    assert not set(first) & set(second)


def test_factorial_partition_has_large_upper_densities():
    first, second = witness_partition(factorial_block_schedule, 5000)
    assert density_profile(first, 1).upper_estimate > Fraction(3, 4)
    assert density_profile(second, 1).upper_estimate > Fraction(3, 4)


def test_proximality_sequence_is_ergodic(doubling):
    w = proximality_witness_sequence(doubling, 0.5, 1.5, 256, 0.1)
    assert w.kind == OrbitKind.DELTA_ERGODIC
    assert set(w.break_set) <= set(w.junctions)


def test_periodic_pseudo_orbit(isometry):
    p = periodic_pseudo_orbit(isometry, 0.3, 2, 10, 0.1)
    assert p.points[:4] == pytest.approx((0.3, 0.7, 0.3, 0.7))
    with pytest.raises(ParameterError):
        periodic_pseudo_orbit(isometry, 0.3, 1, 10, 0.1)


def test_project_component(isometry, doubling):
    product = make_product(isometry, doubling)
    p = perturbed_orbit(product, (0.2, 1.0), 0.05, 40, seed=2)
    left = project_component(p, product, 0)
    assert left.system_name == isometry.name
    assert left.points == tuple(point[0] for point in p.points)
    assert left.step_errors.max() < 0.05
    with pytest.raises(ParameterError):
        project_component(p, product, 2)


def test_average_step_error(doubling):
    exact = exact_orbit(doubling, 0.7, 100)
    assert average_error_of_step(exact) == 0.0
    assert is_almost_average(exact)

    noisy = perturbed_orbit(doubling, 0.7, 0.2, 400, seed=1)
    assert 0 < average_error_of_step(noisy) < 0.1
    assert is_almost_average(noisy, delta=0.1)


def test_pseudo_orbit_checks_shapes(isometry):
    with pytest.raises(ParameterError):
        PseudoOrbit(
            system_name=isometry.name, points=(0.0, 1.0), delta=0.1, kind=OrbitKind.EXACT,
            break_set=IndexSet(2), step_errors=np.zeros(3), junctions=IndexSet(2),
        )
