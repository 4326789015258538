"""
Exact arithmetic on finite index sets.

An :class:`IndexSet` stands in for a subset E of the natural numbers truncated
at a horizon N. Densities are exact rationals; lim sup / lim inf are replaced
by the max / min of the defining ratio over the window endpoints that fall in
the final ``tail_fraction`` of the horizon.
"""

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
import itertools
import logging
import math
from typing import Callable, Iterable, List, Sequence, Tuple, Union

import numpy as np

from ..exceptions import DomainError, ParameterError, RangeError

logger = logging.getLogger(__name__)

DEFAULT_TAIL_FRACTION = Fraction(1, 4)

Rational = Union[Fraction, int, float, str]


def as_fraction(value: Rational) -> Fraction:
    """Coerce ints, floats and strings such as ``"1/4"`` to an exact Fraction."""
    try:
        return value if isinstance(value, Fraction) else Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise ParameterError(f"Not a rational number: {value!r}") from e


@dataclass(frozen=True)
class IndexSet:
    """
    A finite subset of [0, horizon).

    Members are stored sorted and distinct; construction validates both.
    """

    horizon: int
    members: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.horizon, (int, np.integer)) or self.horizon <= 0:
            raise ParameterError(f"IndexSet horizon must be a positive integer, got {self.horizon!r}")
        members = tuple(int(m) for m in self.members)
        if members:
            if members[0] < 0 or members[-1] >= self.horizon:
                raise RangeError(
                    f"IndexSet members must lie in [0, {self.horizon}), got {members[0]}..{members[-1]}"
                )
            if any(b <= a for a, b in zip(members, members[1:])):
                raise ParameterError("IndexSet members must be strictly increasing")
        object.__setattr__(self, 'horizon', int(self.horizon))
        object.__setattr__(self, 'members', members)

    @classmethod
    def from_iterable(cls, horizon: int, items: Iterable[int]) -> 'IndexSet':
        """Build from unsorted, possibly repeated indices."""
        return cls(horizon, tuple(sorted(set(int(i) for i in items))))

    @classmethod
    def from_mask(cls, mask: Sequence[bool]) -> 'IndexSet':
        """Indices where ``mask`` is true; the horizon is the mask length."""
        flags = np.asarray(mask, dtype=bool)
        return cls(len(flags), tuple(int(i) for i in np.flatnonzero(flags)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, index: object) -> bool:
        if not isinstance(index, (int, np.integer)):
            return False
        position = bisect_left(self.members, int(index))
        return position < len(self.members) and self.members[position] == index

    def count_below(self, n: int) -> int:
        """#(E ∩ [0, n-1])."""
        return bisect_left(self.members, n)

    def complement(self) -> 'IndexSet':
        present = set(self.members)
        return IndexSet(self.horizon, tuple(i for i in range(self.horizon) if i not in present))

    def union(self, other: 'IndexSet') -> 'IndexSet':
        if other.horizon != self.horizon:
            raise ParameterError(
                f"Cannot unite index sets with horizons {self.horizon} and {other.horizon}"
            )
        return IndexSet.from_iterable(self.horizon, set(self.members) | set(other.members))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)


@dataclass(frozen=True)
class DensityProfile:
    """
    Finite-horizon density statistics of an index set.

    ``upper_estimate`` and ``lower_estimate`` are the max and min of the
    defining ratio over the tail window; they are not required to bracket
    ``value_at_full_horizon`` from both sides, only to lie in [0, 1].
    """

    horizon: int
    value_at_full_horizon: Fraction
    upper_estimate: Fraction
    lower_estimate: Fraction
    tail_fraction: Fraction


def tail_window(horizon: int, tail_fraction: Rational = DEFAULT_TAIL_FRACTION) -> range:
    """
    Window endpoints n used for tail statistics.

    Covers the last ``ceil(tail_fraction * horizon)`` values of n in [1, horizon].
    """
    fraction = as_fraction(tail_fraction)
    if not 0 < fraction <= 1:
        raise ParameterError(f"tail_fraction must lie in (0, 1], got {fraction}")
    if horizon <= 0:
        raise ParameterError(f"horizon must be positive, got {horizon}")
    width = max(1, math.ceil(fraction * horizon))
    return range(horizon - width + 1, horizon + 1)


def density_at(e: IndexSet, n: int) -> Fraction:
    """
    #(E ∩ [0, n-1]) / n as an exact rational.

    Raises:
        RangeError: if n is not in [1, e.horizon]
    """
    if not 1 <= n <= e.horizon:
        raise RangeError(f"density_at requires 1 <= n <= {e.horizon}, got {n}")
    return Fraction(e.count_below(n), n)


def density_profile(e: IndexSet, tail_fraction: Rational = DEFAULT_TAIL_FRACTION) -> DensityProfile:
    """Tail-window upper/lower density estimates of ``e``."""
    fraction = as_fraction(tail_fraction)
    window = tail_window(e.horizon, fraction)
    ratios = [Fraction(e.count_below(n), n) for n in window]
    return DensityProfile(
        horizon=e.horizon,
        value_at_full_horizon=density_at(e, e.horizon),
        upper_estimate=max(ratios),
        lower_estimate=min(ratios),
        tail_fraction=fraction,
    )


def max_gap(e: IndexSet) -> int:
    """
    Largest gap of ``e``, counting the gap from 0 to the first member and from
    the last member to horizon-1. An empty set has gap ``horizon``.
    """
    if not e.members:
        return e.horizon
    gaps = [e.members[0]]
    gaps.extend(b - a for a, b in zip(e.members, e.members[1:]))
    gaps.append(e.horizon - 1 - e.members[-1])
    return max(gaps)


def is_syndetic(e: IndexSet, gap_bound: int) -> bool:
    """
    True iff every gap of ``e`` is at most ``gap_bound``.

    The empty set is never syndetic.
    """
    if gap_bound <= 0:
        raise ParameterError(f"gap_bound must be positive, got {gap_bound}")
    if not e.members:
        return False
    return max_gap(e) <= gap_bound


def _as_error_array(errors: Sequence[float]) -> np.ndarray:
    values = np.asarray(errors, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ParameterError("errors must be a nonempty one-dimensional sequence")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise DomainError("errors must be finite and non-negative")
    return values


def exact_sum(values: Sequence[float]) -> Fraction:
    """Σ values with no rounding at all."""
    return sum(map(Fraction, np.asarray(values, dtype=float).tolist()), Fraction(0))


def compare_mean(values: Sequence[float], threshold: Rational) -> int:
    """
    Sign of mean(values) - threshold, decided exactly.

    fsum is correctly rounded, so the exact sum lies within one ulp of it; the
    rational sum is only formed when the threshold falls inside that ulp.
    """
    data = _as_error_array(values)
    target = as_fraction(threshold) * data.size
    rounded = math.fsum(data)
    gap = Fraction(rounded) - target
    if abs(gap) <= Fraction(math.ulp(rounded)):
        gap = exact_sum(data) - target
    return (gap > 0) - (gap < 0)


def prefix_means_below(values: Sequence[float], window: range, bound: Rational) -> bool:
    """
    Whether (1/n) Σ_{i<n} values_i < bound for every n in ``window``, decided exactly.

    A cumulative float sum of n non-negative terms is off by at most n·2^-53
    relatively, so the exact prefix sums are only needed near the bound.
    """
    data = _as_error_array(values)
    if window.start < 1 or window.stop - 1 > data.size:
        raise RangeError(f"window {window} does not fit a sequence of length {data.size}")
    limit = as_fraction(bound)
    endpoints = np.arange(window.start, window.stop)
    estimate = float(np.max(np.cumsum(data)[endpoints - 1] / endpoints))
    if abs(estimate - float(limit)) > float(limit) * data.size * 2.0 ** -50:
        return estimate < float(limit)
    sums = itertools.accumulate(map(Fraction, data[: window.stop - 1].tolist()))
    return all(total < limit * n for n, total in enumerate(sums, start=1) if n in window)


@dataclass(frozen=True)
class MarkovBound:
    """
    Outcome of the Markov-type density bound for one error sequence.

    ``mean`` is the correctly rounded mean for reporting; ``premise_holds``
    is the exact comparison Σ errors < n·ε².
    """

    mean: float
    epsilon: float
    premise_holds: bool
    bad_set: IndexSet

    @property
    def bad_density(self) -> Fraction:
        return density_at(self.bad_set, self.bad_set.horizon)


def markov_density_bound(errors: Sequence[float], epsilon: float) -> MarkovBound:
    """
    Mean of ``errors`` together with the set of indices where an error reaches ``epsilon``.

    Whenever the premise mean < epsilon**2 holds (decided on exact rationals)
    the bad set has density below epsilon at the full horizon.
    """
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    values = _as_error_array(errors)
    premise = compare_mean(values, Fraction(epsilon) ** 2) < 0
    return MarkovBound(
        mean=math.fsum(values) / values.size,
        epsilon=epsilon,
        premise_holds=premise,
        bad_set=IndexSet.from_mask(values >= epsilon),
    )


def bounded_mean_from_density(errors: Sequence[float], eta: float, diameter: float) -> Fraction:
    """
    Upper bound diameter * density({i : errors[i] >= eta}) + eta for the mean of ``errors``.

    The bound is exact; compare it with :func:`compare_mean`.

    Raises:
        DomainError: if some error exceeds the diameter
    """
    if eta <= 0 or diameter <= 0:
        raise ParameterError(f"eta and diameter must be positive, got {eta}, {diameter}")
    values = _as_error_array(errors)
    if np.any(values > diameter):
        raise DomainError(
            f"error {float(values.max())} exceeds the space diameter {diameter}"
        )
    bad_set = IndexSet.from_mask(values >= eta)
    return Fraction(diameter) * density_at(bad_set, values.size) + Fraction(eta)


def subsequence_mean_bound(values: Sequence[float], k: int) -> Tuple[Fraction, Fraction]:
    """
    Both sides of (1/n) Σ_{i<n} a_{ik} <= k * (1/(nk)) Σ_{l<nk} a_l.

    ``values`` holds a_0..a_{nk-1}; a trailing partial block is ignored. The
    sums are correctly rounded (fsum) and compared as exact rationals, so the
    inequality holds exactly for every non-negative input.
    """
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")
    data = _as_error_array(values)
    n = data.size // k
    if n == 0:
        raise ParameterError(f"need at least {k} values, got {data.size}")
    sampled = Fraction(math.fsum(data[: n * k : k]))
    total = Fraction(math.fsum(data[: n * k]))
    return sampled / n, k * total / (n * k)


def schedule_junctions(schedule: Callable[[int], int], horizon: int) -> IndexSet:
    """
    Junction indices of a concatenation of blocks whose lengths follow ``schedule``.

    Block i occupies ``schedule(i)`` consecutive indices; the junction after a
    block is the index of its last element. Junctions at horizon-1 or later are
    dropped, since no step leaves the last index.
    """
    junctions: List[int] = []
    position = 0
    block = 0
    while True:
        length = int(schedule(block))
        if length <= 0:
            raise ParameterError(f"schedule produced a block of length {length} at block {block}")
        position += length
        if position - 1 >= horizon - 1:
            break
        junctions.append(position - 1)
        block += 1
    return IndexSet(horizon, tuple(junctions))
