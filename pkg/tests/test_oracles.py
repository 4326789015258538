import pytest

from shadowlab.core.oracles import backward_precision, doubling_backward_tracer, doubling_shadow_angles
from shadowlab.core.pseudo_orbit import perturbed_orbit
from shadowlab.core.spaces import angle_precision, arc_distance, precision_context
from shadowlab.core.verify import check_pointwise, trace
from shadowlab.exceptions import ParameterError


def test_backward_tracer_shadows_doubling_orbit(doubling):
    p = perturbed_orbit(doubling, 0.4, 0.01, 500, seed=8)
    z = doubling_backward_tracer(p)
    assert angle_precision(z) == backward_precision(500) >= 500
    report = trace(doubling, z, p)
    assert check_pointwise(report, 0.01).satisfied


def test_shadow_angles_are_consistent(doubling):
    p = perturbed_orbit(doubling, 2.0, 0.02, 64, seed=1)
    angles = doubling_shadow_angles(p)
    assert len(angles) == 64
    for phi, nxt in zip(angles, angles[1:]):
        assert arc_distance(doubling.map(phi), nxt) < 1e-12


def test_backward_tracer_needs_doubling_orbit(isometry):
    p = perturbed_orbit(isometry, 0.2, 0.1, 10, seed=0)
    with pytest.raises(ParameterError):
        doubling_backward_tracer(p)


def test_tracer_precision_depends_only_on_its_own_horizon(doubling):
    short = perturbed_orbit(doubling, 0.4, 0.01, 40, seed=2)
    before = doubling_backward_tracer(short)
    doubling_backward_tracer(perturbed_orbit(doubling, 0.4, 0.01, 2000, seed=3))
    after = doubling_backward_tracer(short)
    assert angle_precision(before) == angle_precision(after) == backward_precision(40)
    assert before == after
    assert precision_context(backward_precision(40)).prec == backward_precision(40)


def test_backward_precision_rounds_up():
    assert backward_precision(1) == 128
    assert backward_precision(500) == 640
    assert backward_precision(2000) % 64 == 0
