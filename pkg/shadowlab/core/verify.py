"""
Shadowing verifiers.

:func:`trace` measures a candidate tracer against a pseudo orbit; the
``check_*`` functions turn a :class:`TraceReport` into a :class:`ShadowVerdict`
under one criterion. All criteria use strict inequalities, so a statistic equal
to epsilon is not satisfied.

:func:`search_tracer` enumerates an epsilon-net. Its verdict is one-sided: a
satisfied verdict exhibits a witness, an unsatisfied one only says that no
candidate at this resolution works.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
import logging
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..exceptions import DomainError, ParameterError, RangeError
from .density import (
    DEFAULT_TAIL_FRACTION,
    IndexSet,
    Rational,
    as_fraction,
    density_profile,
    prefix_means_below,
    tail_window,
)
from .pseudo_orbit import PseudoOrbit
from .spaces import DEFAULT_MAX_NET_SIZE, Point, SymbolPoint, SystemHandle, build_epsilon_net

logger = logging.getLogger(__name__)

ONE_SIDED_NOTE = (
    "one-sided search: satisfied means a witness was found; "
    "unsatisfied means no candidate at this net resolution witnesses the criterion"
)
DIAMETER_SLACK = 1e-12


class Criterion(str, Enum):
    POINTWISE = "pointwise"
    AVERAGE = "average"
    MEAN_ERGODIC = "mean_ergodic"
    D_LOWER = "d_lower"


@dataclass(frozen=True)
class TraceReport:
    """Errors d(f^i(z), x_i) of one candidate against one pseudo orbit."""

    errors: np.ndarray
    diameter: float
    tail_fraction: Fraction = DEFAULT_TAIL_FRACTION
    system_name: str = ""

    def __post_init__(self) -> None:
        errors = np.array(self.errors, dtype=float)
        if errors.ndim != 1 or errors.size == 0:
            raise ParameterError("a trace report needs a nonempty error sequence")
        if np.any(errors < 0) or not np.all(np.isfinite(errors)):
            raise DomainError("trace errors must be finite and non-negative")
        if np.any(errors > self.diameter * (1 + DIAMETER_SLACK)):
            raise DomainError(
                f"trace error {float(errors.max())} exceeds the diameter {self.diameter}"
            )
        errors.setflags(write=False)
        object.__setattr__(self, 'errors', errors)
        object.__setattr__(self, 'tail_fraction', as_fraction(self.tail_fraction))

    @property
    def horizon(self) -> int:
        return int(self.errors.size)

    @cached_property
    def cesaro_mean_estimate(self) -> float:
        """Max over the tail window of the prefix means (1/n) Σ_{i<n} err_i."""
        window = tail_window(self.horizon, self.tail_fraction)
        endpoints = np.arange(window.start, window.stop)
        prefix_sums = np.cumsum(self.errors)
        return float(np.max(prefix_sums[endpoints - 1] / endpoints))

    def cesaro_mean_below(self, epsilon: float) -> bool:
        """Exact form of ``cesaro_mean_estimate < epsilon``."""
        return prefix_means_below(self.errors, tail_window(self.horizon, self.tail_fraction), epsilon)

    @cached_property
    def sup_error(self) -> float:
        return float(self.errors.max())

    def bad_set(self, epsilon: float) -> IndexSet:
        """{i : err_i >= epsilon}."""
        return IndexSet.from_mask(self.errors >= epsilon)

    def good_set(self, epsilon: float) -> IndexSet:
        """{i : err_i < epsilon}, the complement of :meth:`bad_set`."""
        return IndexSet.from_mask(self.errors < epsilon)

    def bad_upper_density(self, epsilon: float) -> Fraction:
        return density_profile(self.bad_set(epsilon), self.tail_fraction).upper_estimate

    def good_lower_density(self, epsilon: float) -> Fraction:
        return density_profile(self.good_set(epsilon), self.tail_fraction).lower_estimate


@dataclass(frozen=True, eq=False)
class ShadowVerdict:
    criterion: Criterion
    epsilon: float
    satisfied: bool
    evidence: TraceReport
    statistic: float
    witness: Optional[Point] = None
    note: str = ""

    @property
    def horizon(self) -> int:
        return self.evidence.horizon

    @property
    def tail_fraction(self) -> Fraction:
        return self.evidence.tail_fraction

    def with_witness(self, witness: Point, note: str = "") -> 'ShadowVerdict':
        return ShadowVerdict(
            criterion=self.criterion,
            epsilon=self.epsilon,
            satisfied=self.satisfied,
            evidence=self.evidence,
            statistic=self.statistic,
            witness=witness,
            note=note or self.note,
        )


def _check_epsilon(epsilon: float) -> None:
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")


# ---------------------------------------------------------------------------
# tracing


def trace(s: SystemHandle, z: Point, p: PseudoOrbit,
          tail_fraction: Rational = DEFAULT_TAIL_FRACTION,
          horizon: Optional[int] = None) -> TraceReport:
    """
    Errors err_i = d(f^i(z), x_i), iterating the map once per step.

    Args:
        s: The system ``p`` lives on
        z: Candidate tracer
        p: Pseudo orbit to trace
        tail_fraction: Tail window for the report's estimators
        horizon: Trace only the first ``horizon`` points (default: all)

    Raises:
        ParameterError: if the horizon is not positive
        RangeError: if the horizon exceeds the orbit length
    """
    n = p.horizon if horizon is None else horizon
    if n <= 0:
        raise ParameterError(f"trace horizon must be positive, got {n}")
    if n > p.horizon:
        raise RangeError(f"trace horizon {n} exceeds the orbit length {p.horizon}")
    errors = np.empty(n, dtype=float)
    point = z
    for i in range(n):
        errors[i] = s.metric(point, p.points[i])
        point = s.map(point)
    return TraceReport(errors, s.diameter, as_fraction(tail_fraction), s.name)


# ---------------------------------------------------------------------------
# criteria


def check_pointwise(report: TraceReport, epsilon: float) -> ShadowVerdict:
    """Satisfied iff every error is below epsilon."""
    _check_epsilon(epsilon)
    statistic = report.sup_error
    return ShadowVerdict(Criterion.POINTWISE, epsilon, statistic < epsilon, report, statistic)


def check_average(report: TraceReport, epsilon: float) -> ShadowVerdict:
    """Satisfied iff every prefix mean in the tail window is below epsilon, compared exactly."""
    _check_epsilon(epsilon)
    statistic = report.cesaro_mean_estimate
    return ShadowVerdict(Criterion.AVERAGE, epsilon, report.cesaro_mean_below(epsilon), report, statistic)


def check_mean_ergodic(report: TraceReport, epsilon: float) -> ShadowVerdict:
    """Satisfied iff the upper density estimate of {i : err_i >= ε} is below ε."""
    return check_mean_ergodic_split(report, epsilon, epsilon)


def check_mean_ergodic_split(report: TraceReport, error_threshold: float,
                             density_threshold: float) -> ShadowVerdict:
    """
    Mean ergodic check with separate thresholds: the upper density estimate of
    {i : err_i >= error_threshold} must be below ``density_threshold``.
    """
    _check_epsilon(error_threshold)
    _check_epsilon(density_threshold)
    upper = report.bad_upper_density(error_threshold)
    note = "" if error_threshold == density_threshold else f"density threshold {density_threshold:g}"
    return ShadowVerdict(
        Criterion.MEAN_ERGODIC, error_threshold, upper < density_threshold, report, float(upper), note=note
    )


def check_d_lower(report: TraceReport, epsilon: float) -> ShadowVerdict:
    """Satisfied iff the lower density estimate of {i : err_i < ε} is positive."""
    _check_epsilon(epsilon)
    lower = report.good_lower_density(epsilon)
    return ShadowVerdict(Criterion.D_LOWER, epsilon, lower > 0, report, float(lower))


CHECKS: Dict[Criterion, Callable[[TraceReport, float], ShadowVerdict]] = {
    Criterion.POINTWISE: check_pointwise,
    Criterion.AVERAGE: check_average,
    Criterion.MEAN_ERGODIC: check_mean_ergodic,
    Criterion.D_LOWER: check_d_lower,
}


def check(report: TraceReport, criterion: Criterion, epsilon: float) -> ShadowVerdict:
    return CHECKS[Criterion(criterion)](report, epsilon)


def ranking_statistic(report: TraceReport, criterion: Criterion, epsilon: float) -> float:
    """The quantity a search minimizes; for d_lower it is minus the good lower density."""
    criterion = Criterion(criterion)
    if criterion == Criterion.POINTWISE:
        return report.sup_error
    if criterion == Criterion.AVERAGE:
        return report.cesaro_mean_estimate
    if criterion == Criterion.MEAN_ERGODIC:
        return float(report.bad_upper_density(epsilon))
    return -float(report.good_lower_density(epsilon))


# ---------------------------------------------------------------------------
# candidate scoring


def _vectorized_statistics(s: SystemHandle, p: PseudoOrbit, candidates: Sequence[float],
                           criterion: Criterion, epsilon: float,
                           tail_fraction: Fraction) -> np.ndarray:
    """Stream all candidate orbits at once; same floating point operations as the scalar path."""
    horizon = p.horizon
    window = tail_window(horizon, tail_fraction)
    current = np.asarray(candidates, dtype=float)
    count = current.size
    running = np.zeros(count)
    statistic = np.full(count, -np.inf)
    if criterion == Criterion.D_LOWER:
        statistic = np.full(count, np.inf)

    for i in range(horizon):
        errors = s.vector_metric(current, p.points[i])
        n = i + 1
        if criterion == Criterion.POINTWISE:
            np.maximum(statistic, errors, out=statistic)
        else:
            if criterion == Criterion.AVERAGE:
                running += errors
            elif criterion == Criterion.MEAN_ERGODIC:
                running += errors >= epsilon
            else:
                running += errors < epsilon
            if n >= window.start:
                ratio = running / n
                if criterion == Criterion.D_LOWER:
                    np.minimum(statistic, ratio, out=statistic)
                else:
                    np.maximum(statistic, ratio, out=statistic)
        current = s.vector_map(current)
    return -statistic if criterion == Criterion.D_LOWER else statistic


def score_candidates(s: SystemHandle, p: PseudoOrbit, candidates: Sequence[Point],
                     criterion: Criterion, epsilon: float,
                     tail_fraction: Rational = DEFAULT_TAIL_FRACTION,
                     workers: Optional[int] = None) -> np.ndarray:
    """
    Ranking statistic of every candidate, in candidate order.

    Float candidates on systems with vector operations are streamed through
    numpy together; anything else is traced one by one on a thread pool.
    """
    _check_epsilon(epsilon)
    criterion = Criterion(criterion)
    fraction = as_fraction(tail_fraction)
    if not candidates:
        return np.empty(0)
    if s.supports_vectorized and all(isinstance(c, float) for c in candidates):
        return _vectorized_statistics(s, p, candidates, criterion, epsilon, fraction)

    def score(candidate: Point) -> float:
        return ranking_statistic(trace(s, candidate, p, fraction), criterion, epsilon)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return np.array(list(executor.map(score, candidates)), dtype=float)


def search_tracer(s: SystemHandle, p: PseudoOrbit, epsilon: float, criterion: Criterion,
                  net_resolution: float, seeds: Iterable[Point] = (),
                  max_size: int = DEFAULT_MAX_NET_SIZE, workers: Optional[int] = None,
                  tail_fraction: Rational = DEFAULT_TAIL_FRACTION) -> ShadowVerdict:
    """
    Best tracer among ``seeds`` followed by the epsilon-net at ``net_resolution``.

    Ties go to the earliest candidate, so seeds win ties and the result does
    not depend on thread scheduling. Nets are nested: the net at any smaller
    resolution contains this one, so refining never worsens the best statistic.

    Raises:
        ResourceError: if the net exceeds ``max_size`` points
    """
    _check_epsilon(epsilon)
    if net_resolution <= 0:
        raise ParameterError(f"net_resolution must be positive, got {net_resolution}")
    criterion = Criterion(criterion)
    seed_points = list(seeds)
    net = build_epsilon_net(s, net_resolution, max_size)

    seed_scores = score_candidates(s, p, seed_points, criterion, epsilon, tail_fraction, workers)
    net_scores = score_candidates(s, p, net, criterion, epsilon, tail_fraction, workers)
    scores = np.concatenate((seed_scores, net_scores))
    candidates: List[Any] = seed_points + list(net)
    best = int(np.argmin(scores))
    witness = candidates[best]

    verdict = check(trace(s, witness, p, tail_fraction), criterion, epsilon)
    logger.info(
        f"Tracer search on {s.name}: {len(candidates)} candidates, criterion={criterion.value}, "
        f"ε={epsilon:g}, best statistic={verdict.statistic:.6g}, satisfied={verdict.satisfied}"
    )
    return verdict.with_witness(witness, ONE_SIDED_NOTE)


# ---------------------------------------------------------------------------
# shift spaces


def shift_constructive_tracer(p: PseudoOrbit, prefix_depth: int) -> SymbolPoint:
    """
    The diagonal point z_i = (x_i)_0, continued by the symbols of the last orbit point.

    If every step among i, ..., i + prefix_depth - 1 has error below
    2^-prefix_depth, then σ^i z and x_i agree on their first prefix_depth + 1
    symbols, so d(σ^i z, x_i) <= 2^-prefix_depth.

    Raises:
        ParameterError: if the orbit is shorter than ``prefix_depth`` or not on a shift space
    """
    if prefix_depth < 1:
        raise ParameterError(f"prefix_depth must be positive, got {prefix_depth}")
    if p.horizon < prefix_depth:
        raise ParameterError(f"orbit length {p.horizon} is shorter than prefix depth {prefix_depth}")
    first = p.points[0]
    if not isinstance(first, SymbolPoint):
        raise ParameterError("the constructive tracer needs a pseudo orbit on a full shift")
    length = first.working_length
    diagonal = np.fromiter((point.symbols[0] for point in p.points), dtype=np.uint8, count=p.horizon)
    symbols = np.concatenate((diagonal[:-1], p.points[-1].symbols))[:length]
    return SymbolPoint(first.alphabet_size, symbols)
