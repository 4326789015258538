"""
Generators for approximate orbits.

Every generator returns an immutable :class:`PseudoOrbit` whose step errors
and break set come from a full rescan of the generated points, so the stored
break set always equals what :func:`rescan_pseudo_orbit` recomputes.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ParameterError
from .density import (
    DEFAULT_TAIL_FRACTION,
    IndexSet,
    Rational,
    as_fraction,
    density_profile,
    prefix_means_below,
    schedule_junctions,
    tail_window,
)
from .spaces import Point, SystemHandle, make_interval_isometry, make_power

logger = logging.getLogger(__name__)

DEFAULT_DENSITY_THRESHOLD = Fraction(1, 2)

Schedule = Callable[[int], int]


class OrbitKind(str, Enum):
    EXACT = "exact"
    DELTA_PSEUDO = "delta_pseudo"
    DELTA_CHAIN = "delta_chain"
    DELTA_ERGODIC = "delta_ergodic"
    ALMOST_AVERAGE = "almost_average"


@dataclass(frozen=True, eq=False)
class PseudoOrbit:
    """
    A finite sequence of points of one system with its generation parameters.

    ``break_set`` holds the indices i with d(f(x_i), x_{i+1}) >= delta;
    ``junctions`` holds the indices where a generator deliberately started a new
    chain (a break can only occur at a junction). ``step_errors[i]`` is
    d(f(x_i), x_{i+1}) for i < horizon - 1.
    """

    system_name: str
    points: Tuple[Point, ...]
    delta: float
    kind: OrbitKind
    break_set: IndexSet
    step_errors: np.ndarray
    junctions: IndexSet
    seed: Optional[int] = None
    density_threshold: Fraction = DEFAULT_DENSITY_THRESHOLD

    def __post_init__(self) -> None:
        if not self.points:
            raise ParameterError("a pseudo orbit needs at least one point")
        if self.delta <= 0:
            raise ParameterError(f"delta must be positive, got {self.delta}")
        if self.break_set.horizon != self.horizon or self.junctions.horizon != self.horizon:
            raise ParameterError("break_set and junctions must share the orbit horizon")
        if len(self.step_errors) != self.horizon - 1:
            raise ParameterError(
                f"expected {self.horizon - 1} step errors, got {len(self.step_errors)}"
            )
        if self.kind in (OrbitKind.EXACT, OrbitKind.DELTA_PSEUDO, OrbitKind.DELTA_CHAIN) and len(self.break_set):
            raise ParameterError(
                f"a {self.kind.value} orbit cannot have breaks; found {len(self.break_set)}"
            )
        if self.kind == OrbitKind.DELTA_ERGODIC:
            upper = density_profile(self.break_set).upper_estimate
            if upper >= self.density_threshold:
                raise ParameterError(
                    f"break density estimate {upper} is not below {self.density_threshold}; "
                    f"horizon {self.horizon} is too short for this schedule"
                )
        errors = np.array(self.step_errors, dtype=float)
        errors.setflags(write=False)
        object.__setattr__(self, 'points', tuple(self.points))
        object.__setattr__(self, 'step_errors', errors)
        object.__setattr__(self, 'kind', OrbitKind(self.kind))

    @property
    def horizon(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)


# ---------------------------------------------------------------------------
# schedules


def doubling_gap_schedule(i: int) -> int:
    """Block i of a chain concatenation has 2^i points."""
    return 2 ** i


def doubling_block_schedule(j: int) -> int:
    return 2 ** j


def factorial_block_schedule(j: int) -> int:
    """Block j has (j+1)! points; each block dwarfs everything before it."""
    return math.factorial(j + 1)


def _validated_lengths(schedule: Schedule, horizon: int, require_growth: bool) -> List[int]:
    """Block lengths needed to cover ``horizon`` points, checked nondecreasing (and growing)."""
    lengths: List[int] = []
    covered = 0
    while covered < horizon:
        length = int(schedule(len(lengths)))
        if length <= 0:
            raise ParameterError(f"schedule produced a block of length {length} at block {len(lengths)}")
        if lengths and length < lengths[-1]:
            raise ParameterError(
                f"schedule must be nondecreasing; block {len(lengths)} has length {length} < {lengths[-1]}"
            )
        lengths.append(length)
        covered += length
    if require_growth and len(lengths) >= 3 and lengths[-1] == lengths[0]:
        raise ParameterError("schedule does not grow over the horizon; breaks would keep positive density")
    return lengths


# ---------------------------------------------------------------------------
# assembly


def rescan_pseudo_orbit(s: SystemHandle, points: Sequence[Point], delta: float) -> Tuple[np.ndarray, IndexSet]:
    """Step errors d(f(x_i), x_{i+1}) and the indices where they reach ``delta``."""
    if delta <= 0:
        raise ParameterError(f"delta must be positive, got {delta}")
    errors = np.array(
        [s.metric(s.map(points[i]), points[i + 1]) for i in range(len(points) - 1)],
        dtype=float,
    )
    breaks = IndexSet(len(points), tuple(int(i) for i in np.flatnonzero(errors >= delta)))
    return errors, breaks


def _assemble(s: SystemHandle, points: Sequence[Point], delta: float, kind: OrbitKind,
              junctions: Optional[IndexSet] = None, seed: Optional[int] = None,
              density_threshold: Fraction = DEFAULT_DENSITY_THRESHOLD) -> PseudoOrbit:
    errors, breaks = rescan_pseudo_orbit(s, points, delta)
    return PseudoOrbit(
        system_name=s.name,
        points=tuple(points),
        delta=delta,
        kind=kind,
        break_set=breaks,
        step_errors=errors,
        junctions=junctions if junctions is not None else IndexSet(len(points)),
        seed=seed,
        density_threshold=density_threshold,
    )


def pseudo_orbit_from_points(s: SystemHandle, points: Sequence[Point], delta: float,
                             kind: OrbitKind = OrbitKind.DELTA_CHAIN,
                             seed: Optional[int] = None,
                             junctions: Optional[IndexSet] = None) -> PseudoOrbit:
    """Wrap an explicit point sequence, e.g. a path of a transition graph or a parsed file."""
    return _assemble(s, points, delta, OrbitKind(kind), junctions=junctions, seed=seed)


def _check_common(delta: float, horizon: int, seed: Optional[int]) -> None:
    if delta <= 0:
        raise ParameterError(f"delta must be positive, got {delta}")
    if horizon <= 0:
        raise ParameterError(f"horizon must be positive, got {horizon}")
    if seed is not None and seed < 0:
        raise ParameterError(f"seed must be non-negative, got {seed}")


# ---------------------------------------------------------------------------
# generators


def exact_orbit(s: SystemHandle, start: Point, horizon: int, delta: float = 1e-9) -> PseudoOrbit:
    _check_common(delta, horizon, None)
    return _assemble(s, s.orbit(start, horizon), delta, OrbitKind.EXACT)


def perturbed_orbit(s: SystemHandle, start: Point, delta: float, horizon: int, seed: int,
                    radius: Optional[float] = None) -> PseudoOrbit:
    """
    A δ-pseudo orbit: x_0 = start and x_{i+1} drawn strictly within ``radius`` of f(x_i).

    Args:
        s: The system
        start: First point
        delta: Pseudo-orbit bound
        horizon: Number of points
        seed: Seed for the perturbation generator
        radius: Perturbation radius, at most delta / 2 by default. Radius 0
            reproduces the exact orbit.

    Returns:
        PseudoOrbit of kind delta_pseudo with an empty break set
    """
    _check_common(delta, horizon, seed)
    radius = delta / 2 if radius is None else radius
    if not 0 <= radius < delta:
        raise ParameterError(f"perturbation radius must lie in [0, delta), got {radius}")
    rng = np.random.default_rng(seed)
    points = [start]
    for _ in range(horizon - 1):
        points.append(s.perturb(s.map(points[-1]), radius, rng))
    orbit = _assemble(s, points, delta, OrbitKind.DELTA_PSEUDO, seed=seed)
    logger.debug(f"Generated {horizon}-point δ-pseudo orbit on {s.name} (δ={delta:g}, seed={seed})")
    return orbit


def ergodic_pseudo_orbit(s: SystemHandle, chain_starts: Sequence[Point], delta: float,
                         gap_schedule: Optional[Schedule], horizon: int, seed: int,
                         radius: Optional[float] = None,
                         density_threshold: Rational = DEFAULT_DENSITY_THRESHOLD) -> PseudoOrbit:
    """
    Concatenation of finite δ-chains whose lengths follow ``gap_schedule``.

    Chain i starts at ``chain_starts[i]``; once the supplied starts run out,
    further starts are sampled from a generator derived from ``seed``. Chain
    interiors are perturbed orbit segments. ``gap_schedule=None`` means a single
    chain covering the horizon, which reproduces :func:`perturbed_orbit` for
    the same seed.

    Raises:
        ParameterError: for an empty, decreasing or non-growing schedule, or when
            the break density estimate is not below ``density_threshold``
    """
    _check_common(delta, horizon, seed)
    if not chain_starts:
        raise ParameterError("at least one chain start is required")
    radius = delta / 2 if radius is None else radius
    if not 0 <= radius < delta:
        raise ParameterError(f"perturbation radius must lie in [0, delta), got {radius}")
    schedule = gap_schedule if gap_schedule is not None else (lambda i: horizon)
    lengths = _validated_lengths(schedule, horizon, require_growth=gap_schedule is not None)

    rng = np.random.default_rng(seed)
    start_rng = np.random.default_rng([seed, 1])
    points: List[Point] = []
    for block, length in enumerate(lengths):
        for offset in range(min(length, horizon - len(points))):
            if offset == 0:
                point = chain_starts[block] if block < len(chain_starts) else s.sampler(start_rng)
            else:
                point = s.perturb(s.map(points[-1]), radius, rng)
            points.append(point)

    junctions = schedule_junctions(schedule, horizon)
    orbit = _assemble(
        s, points, delta, OrbitKind.DELTA_ERGODIC,
        junctions=junctions, seed=seed, density_threshold=as_fraction(density_threshold),
    )
    logger.debug(
        f"Generated δ-ergodic orbit on {s.name}: horizon={horizon}, chains={len(lengths)}, "
        f"breaks={len(orbit.break_set)}"
    )
    return orbit


def isometry_block_sequence(n_blocks: int, delta: float = 0.5) -> PseudoOrbit:
    """
    The blocks a_0 ∨ a_1 ∨ ... ∨ a_n for x ↦ 1 - x, where a_0 = (0, 1) and a_j is
    (0, 1) repeated j times followed by (1, 0) repeated j times.

    Breaks sit where two equal entries are adjacent: one inside every a_j and
    one at every junction a_j ∨ a_{j+1} with j >= 1, so 2n - 1 in total.
    """
    if n_blocks < 1:
        raise ParameterError(f"n_blocks must be at least 1, got {n_blocks}")
    points: List[float] = [0.0, 1.0]
    block_ends = [1]
    for j in range(1, n_blocks + 1):
        points.extend([0.0, 1.0] * j)
        points.extend([1.0, 0.0] * j)
        block_ends.append(len(points) - 1)
    horizon = len(points)
    junctions = IndexSet(horizon, tuple(block_ends[:-1]))
    return _assemble(make_interval_isometry(), points, delta, OrbitKind.DELTA_ERGODIC, junctions=junctions)


def interleave_for_power(s: SystemHandle, base: PseudoOrbit, k: int) -> PseudoOrbit:
    """
    Turn a pseudo orbit of f^k into one of f by inserting f(x_i), ..., f^{k-1}(x_i)
    after every x_i. Steps inside a run are exact; the step leaving a run equals
    the base step error, so base break b lands at k*b + k - 1.

    ``k = 1`` returns ``base`` unchanged.
    """
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")
    if k == 1:
        return base
    power_name = make_power(s, k).name
    if base.system_name != power_name:
        raise ParameterError(f"base orbit lives on {base.system_name}, expected {power_name}")
    points: List[Point] = []
    for x in base.points:
        point = x
        for _ in range(k):
            points.append(point)
            point = s.map(point)
    horizon = len(points)
    junctions = IndexSet(horizon, tuple(k * j + k - 1 for j in base.junctions))
    return _assemble(
        s, points, base.delta, base.kind,
        junctions=junctions, seed=base.seed, density_threshold=base.density_threshold,
    )


def witness_partition(block_schedule: Schedule, horizon: int) -> Tuple[IndexSet, IndexSet]:
    """Index sets M1 (even blocks) and M2 (odd blocks) of a block schedule."""
    lengths = _validated_lengths(block_schedule, horizon, require_growth=False)
    first: List[int] = []
    second: List[int] = []
    position = 0
    for block, length in enumerate(lengths):
        target = first if block % 2 == 0 else second
        stop = min(position + length, horizon)
        target.extend(range(position, stop))
        position = stop
    return IndexSet(horizon, tuple(first)), IndexSet(horizon, tuple(second))


def proximality_witness_sequence(s: SystemHandle, x: Point, y: Point, horizon: int,
                                 delta: float,
                                 block_schedule: Schedule = doubling_block_schedule) -> PseudoOrbit:
    """
    w_i = f^i(x) on even blocks and f^i(y) on odd blocks of ``block_schedule``.

    The result is δ-ergodic because breaks can only occur at block junctions.
    Under the doubling schedule each half reaches an upper density estimate of
    about 2/3; :func:`factorial_block_schedule` pushes both towards 1.
    """
    _check_common(delta, horizon, None)
    first, _ = witness_partition(block_schedule, horizon)
    points: List[Point] = []
    fx, fy = x, y
    for i in range(horizon):
        points.append(fx if i in first else fy)
        fx, fy = s.map(fx), s.map(fy)
    junctions = schedule_junctions(block_schedule, horizon)
    return _assemble(s, points, delta, OrbitKind.DELTA_ERGODIC, junctions=junctions)


def periodic_pseudo_orbit(s: SystemHandle, z: Point, period: int, horizon: int,
                          delta: float) -> PseudoOrbit:
    """
    z, f(z), ..., f^{period-1}(z), z, f(z), ... truncated to ``horizon``.

    Raises:
        ParameterError: if d(f^period(z), z) >= delta, i.e. the sequence is not a δ-pseudo orbit
    """
    _check_common(delta, horizon, None)
    if period < 1:
        raise ParameterError(f"period must be at least 1, got {period}")
    cycle = s.orbit(z, period)
    closing_error = s.metric(s.iterate(z, period), z)
    if closing_error >= delta:
        raise ParameterError(
            f"closing error {closing_error:.3e} of period {period} is not below delta {delta}"
        )
    points = [cycle[i % period] for i in range(horizon)]
    return _assemble(s, points, delta, OrbitKind.DELTA_PSEUDO)


def project_component(p: PseudoOrbit, product: SystemHandle, index: int) -> PseudoOrbit:
    """The pseudo orbit of component ``index`` (0 or 1) of a product pseudo orbit."""
    if len(product.components) != 2 or index not in (0, 1):
        raise ParameterError("project_component needs a product system and index 0 or 1")
    if p.system_name != product.name:
        raise ParameterError(f"orbit lives on {p.system_name}, expected {product.name}")
    component = product.components[index]
    points = [point[index] for point in p.points]
    return _assemble(
        component, points, p.delta, p.kind,
        junctions=p.junctions, seed=p.seed, density_threshold=p.density_threshold,
    )


# ---------------------------------------------------------------------------
# average step error


def average_error_of_step(p: PseudoOrbit, tail_fraction: Rational = DEFAULT_TAIL_FRACTION) -> float:
    """
    Tail-window estimate of lim sup (1/n) Σ_{i<n} d(f(x_i), x_{i+1}).

    The maximum of the prefix means over the window endpoints in the final
    ``tail_fraction`` of the step sequence.
    """
    if p.horizon < 2:
        raise ParameterError("average step error needs at least two points")
    errors = p.step_errors
    window = tail_window(errors.size, tail_fraction)
    prefix_sums = np.cumsum(errors)
    endpoints = np.arange(window.start, window.stop)
    return float(np.max(prefix_sums[endpoints - 1] / endpoints))


def is_almost_average(p: PseudoOrbit, delta: Optional[float] = None,
                      tail_fraction: Rational = DEFAULT_TAIL_FRACTION) -> bool:
    """
    True when every tail-window prefix mean of the step errors is below
    ``delta`` (``p.delta`` by default), compared exactly.
    """
    threshold = p.delta if delta is None else delta
    if p.horizon < 2:
        raise ParameterError("average step error needs at least two points")
    errors = p.step_errors
    return prefix_means_below(errors, tail_window(errors.size, tail_fraction), threshold)
