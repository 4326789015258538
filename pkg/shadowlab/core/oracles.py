"""
Backward-iteration shadowing for the doubling map.

Used to seed tracer searches on the doubling circle and as a test oracle; not
part of the public API.
"""

import logging
from typing import Any, List

from ..exceptions import ParameterError
from .pseudo_orbit import PseudoOrbit
from .spaces import angle_precision, arc_distance, high_precision_angle, precision_context

logger = logging.getLogger(__name__)

GUARD_BITS = 96
PRECISION_STEP = 64


def backward_precision(horizon: int) -> int:
    """Bits needed to keep ``horizon`` doublings meaningful, rounded up to a multiple of 64."""
    bits = horizon + GUARD_BITS
    return -(-bits // PRECISION_STEP) * PRECISION_STEP


def doubling_shadow_angles(p: PseudoOrbit) -> List[Any]:
    """
    Angles φ_0..φ_{H-1} with 2φ_i ≡ φ_{i+1} (mod 2π), each φ_i the preimage of
    φ_{i+1} nearest x_i, starting from φ_{H-1} = x_{H-1}.

    Preimages contract distances by 1/2, so away from breaks
    d(φ_i, x_i) <= (d(φ_{i+1}, x_{i+1}) + step error) / 2.

    The angles belong to a context whose precision depends only on the
    horizon of ``p``.
    """
    if p.system_name != "doubling-circle":
        raise ParameterError(f"backward shadowing needs a doubling-circle orbit, got {p.system_name}")
    bits = backward_precision(p.horizon)
    context = precision_context(bits)
    pi = context.mpf(context.pi)
    angles: List[Any] = [None] * p.horizon
    phi = high_precision_angle(p.points[-1], bits)
    angles[-1] = phi
    for i in range(p.horizon - 2, -1, -1):
        half = phi / 2
        other = half + pi
        target = p.points[i]
        phi = half if arc_distance(half, target) <= arc_distance(other, target) else other
        angles[i] = phi
    return angles


def doubling_backward_tracer(p: PseudoOrbit) -> Any:
    """High-precision starting angle whose forward orbit shadows ``p``."""
    z = doubling_shadow_angles(p)[0]
    logger.debug(f"Backward tracer for {p.horizon}-point orbit at precision {angle_precision(z)} bits")
    return z
