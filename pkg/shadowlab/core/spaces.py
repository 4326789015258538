"""
Concrete compact metric systems and the combinators built on them.

Every system is a :class:`SystemHandle`: a point representation, a metric, the
map, the diameter, a seeded sampler, a perturbation rule (draw a point strictly
closer than a radius), and an epsilon-net builder. Interval and circle systems
also carry numpy versions of map and metric so that many candidate points can
be iterated at once.

Metric conventions:
    interval      |x - y| on [0, 1], diameter 1
    circle        arc length on a circle of circumference 2π, diameter π
    full shift    Σ_{i<L} [x_i != y_i] 2^-(i+1), diameter 1 - 2^-L; both round to 1.0 as
                  floats once L > 52, params['exact_diameter'] and
                  exact_symbol_distance keep them exact
    two circles   arc length within a circle, 1 + arc(θ, φ) across circles, diameter 1 + π
    product       max of the component metrics
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
import itertools
import logging
import math
import re
import threading
from types import MappingProxyType
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import mpmath
import numpy as np

from ..exceptions import ConstructionError, DomainError, ParameterError, ResourceError, UsageError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
DEFAULT_MAX_NET_SIZE = 2 ** 16
DEFAULT_WORKING_LENGTH = 128
PADDING_SYMBOL = 0
SYMBOL_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"

# Angles that must survive thousands of doublings are mpf values of a context
# fixed at one precision; arithmetic on them never reads shared state.
DEFAULT_HIGH_PRECISION_BITS = 256
_PRECISION_CONTEXTS: Dict[int, mpmath.MPContext] = {}
_PRECISION_LOCK = threading.Lock()
_TWO_PI_BY_PRECISION: Dict[int, Any] = {}

Point = Any
PointMap = Callable[[Point], Point]
Metric = Callable[[Point, Point], float]


class PointKind(str, Enum):
    INTERVAL = "interval"
    CIRCLE = "circle"
    SYMBOL_SEQUENCE = "symbol_sequence"
    TWO_CIRCLES = "two_circles"
    FINITE_SET = "finite_set"
    PRODUCT_PAIR = "product_pair"


@dataclass(frozen=True)
class SystemHandle:
    """A compact metric space with a continuous self-map."""

    name: str
    point_kind: PointKind
    metric: Metric
    map: PointMap
    diameter: float
    sampler: Callable[[np.random.Generator], Point]
    net_builder: Callable[[float], List[Point]]
    net_size: Callable[[float], int]
    perturb: Callable[[Point, float, np.random.Generator], Point]
    vector_map: Optional[Callable[[np.ndarray], np.ndarray]] = None
    vector_metric: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    components: Tuple['SystemHandle', ...] = ()
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.diameter <= 0:
            raise ConstructionError(f"System {self.name} must have positive diameter")
        object.__setattr__(self, 'params', MappingProxyType(dict(self.params)))

    @property
    def supports_vectorized(self) -> bool:
        return self.vector_map is not None and self.vector_metric is not None

    def iterate(self, point: Point, n: int) -> Point:
        """f^n(point)."""
        for _ in range(n):
            point = self.map(point)
        return point

    def orbit(self, point: Point, length: int) -> List[Point]:
        """The first ``length`` points of the orbit of ``point``."""
        points = []
        for _ in range(length):
            points.append(point)
            point = self.map(point)
        return points

    def sample(self, rng: np.random.Generator) -> Point:
        return self.sampler(rng)

    def sample_points(self, count: int, seed: int) -> List[Point]:
        rng = np.random.default_rng(seed)
        return [self.sampler(rng) for _ in range(count)]


# ---------------------------------------------------------------------------
# point types


@dataclass(frozen=True, eq=False)
class SymbolPoint:
    """A one-sided symbol sequence truncated to ``working_length`` symbols."""

    alphabet_size: int
    symbols: np.ndarray

    def __post_init__(self) -> None:
        if self.alphabet_size < 2 or self.alphabet_size > len(SYMBOL_DIGITS):
            raise ParameterError(f"alphabet_size must lie in [2, {len(SYMBOL_DIGITS)}]")
        symbols = np.array(self.symbols, dtype=np.uint8)
        if symbols.ndim != 1 or symbols.size == 0:
            raise ParameterError("SymbolPoint needs a nonempty one-dimensional symbol sequence")
        if np.any(symbols >= self.alphabet_size):
            raise ParameterError(f"symbols must lie in [0, {self.alphabet_size})")
        symbols.setflags(write=False)
        object.__setattr__(self, 'symbols', symbols)

    @classmethod
    def _trusted(cls, alphabet_size: int, symbols: np.ndarray) -> 'SymbolPoint':
        point = object.__new__(cls)
        symbols.setflags(write=False)
        object.__setattr__(point, 'alphabet_size', alphabet_size)
        object.__setattr__(point, 'symbols', symbols)
        return point

    @classmethod
    def constant(cls, alphabet_size: int, symbol: int, working_length: int) -> 'SymbolPoint':
        return cls(alphabet_size, np.full(working_length, symbol, dtype=np.uint8))

    @property
    def working_length(self) -> int:
        return int(self.symbols.size)

    def shifted(self) -> 'SymbolPoint':
        """Drop the first symbol and append the padding symbol."""
        return SymbolPoint._trusted(
            self.alphabet_size,
            np.concatenate((self.symbols[1:], np.array([PADDING_SYMBOL], dtype=np.uint8))),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolPoint):
            return NotImplemented
        return self.alphabet_size == other.alphabet_size and np.array_equal(self.symbols, other.symbols)

    def __hash__(self) -> int:
        return hash((self.alphabet_size, self.symbols.tobytes()))

    def __repr__(self) -> str:
        head = ''.join(SYMBOL_DIGITS[s] for s in self.symbols[:16])
        return f"SymbolPoint({head}{'…' if self.working_length > 16 else ''}, L={self.working_length})"


@dataclass(frozen=True)
class TwoCirclesPoint:
    component: int
    angle: Any

    def __post_init__(self) -> None:
        if self.component not in (1, 2):
            raise ParameterError(f"component must be 1 or 2, got {self.component}")
        object.__setattr__(self, 'angle', wrap_angle(self.angle))


# ---------------------------------------------------------------------------
# angle helpers


def precision_context(bits: int) -> mpmath.MPContext:
    """The mpmath context working at exactly ``bits`` bits, one per precision."""
    if bits < 53:
        raise ParameterError(f"high precision needs at least 53 bits, got {bits}")
    with _PRECISION_LOCK:
        context = _PRECISION_CONTEXTS.get(bits)
        if context is None:
            context = mpmath.MPContext()
            context.prec = bits
            _PRECISION_CONTEXTS[bits] = context
            _TWO_PI_BY_PRECISION[bits] = 2 * context.mpf(context.pi)
    return context


def angle_precision(theta: Any) -> Optional[int]:
    """Working precision of a high-precision angle, None for plain floats."""
    if isinstance(theta, (float, int, np.floating)):
        return None
    for bits, context in list(_PRECISION_CONTEXTS.items()):
        if isinstance(theta, context.mpf):
            return bits
    return None


def high_precision_angle(value: Any, bits: int = DEFAULT_HIGH_PRECISION_BITS) -> Any:
    return wrap_angle(precision_context(bits).mpf(value))


def two_pi_like(theta: Any) -> Any:
    """2π at the precision of ``theta``."""
    bits = angle_precision(theta)
    return TWO_PI if bits is None else _TWO_PI_BY_PRECISION[bits]


def wrap_angle(theta: Any) -> Any:
    if angle_precision(theta) is not None:
        return theta % two_pi_like(theta)
    wrapped = float(theta) % TWO_PI
    return 0.0 if wrapped >= TWO_PI else wrapped


def arc_distance(a: Any, b: Any) -> float:
    d = abs(float(a) - float(b)) % TWO_PI
    return min(d, TWO_PI - d)


def _vector_arc_distance(points: np.ndarray, target: Any) -> np.ndarray:
    d = np.abs(points - float(target)) % TWO_PI
    return np.minimum(d, TWO_PI - d)


def _vector_interval_distance(points: np.ndarray, target: Any) -> np.ndarray:
    return np.abs(points - float(target))


def double_angle(theta: Any) -> Any:
    two_pi = two_pi_like(theta)
    doubled = theta * 2
    return doubled - two_pi if doubled >= two_pi else doubled


def _vector_wrap(thetas: np.ndarray) -> np.ndarray:
    wrapped = thetas % TWO_PI
    return np.where(wrapped >= TWO_PI, 0.0, wrapped)


def _vector_double_angle(thetas: np.ndarray) -> np.ndarray:
    doubled = 2.0 * thetas
    return np.where(doubled >= TWO_PI, doubled - TWO_PI, doubled)


def _grid_count(span: float, resolution: float) -> int:
    """
    Smallest power of two n with span / n <= resolution.

    Dyadic counts nest: the grid for any resolution is a subset of the grid
    for every finer resolution.
    """
    if resolution <= 0:
        raise ParameterError(f"resolution must be positive, got {resolution}")
    count = 1
    while span / count > resolution:
        count *= 2
    return count


def cylinder_depth(radius: float) -> int:
    """Smallest m >= 0 with 2^-m <= radius."""
    if radius <= 0:
        raise ParameterError(f"radius must be positive, got {radius}")
    depth = 0
    while 2.0 ** -depth > radius:
        depth += 1
    return depth


# ---------------------------------------------------------------------------
# interval systems


def _interval_system(name: str, point_map: PointMap,
                     vector_map: Optional[Callable[[np.ndarray], np.ndarray]],
                     **params: Any) -> SystemHandle:
    def sampler(rng: np.random.Generator) -> float:
        # dyadic samples keep 1 - x and x - y exact
        return int(rng.integers(0, 2 ** 40, endpoint=True)) / 2 ** 40

    def perturb(point: float, radius: float, rng: np.random.Generator) -> float:
        if radius <= 0:
            return point
        return min(1.0, max(0.0, point + rng.uniform(-radius, radius)))

    def net(resolution: float) -> List[float]:
        count = _grid_count(1.0, resolution)
        return [k / count for k in range(count + 1)]

    return SystemHandle(
        name=name,
        point_kind=PointKind.INTERVAL,
        metric=lambda x, y: abs(float(x) - float(y)),
        map=point_map,
        diameter=1.0,
        sampler=sampler,
        net_builder=net,
        net_size=lambda resolution: _grid_count(1.0, resolution) + 1,
        perturb=perturb,
        vector_map=vector_map,
        vector_metric=_vector_interval_distance,
        params=params,
    )


def make_interval_isometry() -> SystemHandle:
    """[0, 1] with the flip x ↦ 1 - x."""
    return _interval_system("interval-isometry", lambda x: 1.0 - x, lambda xs: 1.0 - xs)


def make_constant_map(value: float = 0.5) -> SystemHandle:
    """[0, 1] with the constant map onto ``value``."""
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f"constant value must lie in [0, 1], got {value}")
    return _interval_system(
        "constant-interval", lambda x: value, lambda xs: np.full_like(xs, value), value=value
    )


def make_interval_contraction(rate: float = 0.5) -> SystemHandle:
    """[0, 1] with x ↦ rate * x."""
    if not 0.0 <= rate < 1.0:
        raise ParameterError(f"contraction rate must lie in [0, 1), got {rate}")
    return _interval_system(
        "interval-contraction", lambda x: rate * x, lambda xs: rate * xs, rate=rate
    )


# ---------------------------------------------------------------------------
# circle systems


def _circle_system(name: str, point_map: PointMap,
                   vector_map: Callable[[np.ndarray], np.ndarray],
                   **params: Any) -> SystemHandle:
    def perturb(point: Any, radius: float, rng: np.random.Generator) -> Any:
        if radius <= 0:
            return point
        return wrap_angle(point + rng.uniform(-radius, radius))

    def net(resolution: float) -> List[float]:
        count = _grid_count(TWO_PI, resolution)
        return [(TWO_PI * k) / count for k in range(count)]

    return SystemHandle(
        name=name,
        point_kind=PointKind.CIRCLE,
        metric=arc_distance,
        map=point_map,
        diameter=math.pi,
        sampler=lambda rng: float(rng.uniform(0.0, TWO_PI)),
        net_builder=net,
        net_size=lambda resolution: _grid_count(TWO_PI, resolution),
        perturb=perturb,
        vector_map=vector_map,
        vector_metric=_vector_arc_distance,
        params=params,
    )


def make_doubling_circle() -> SystemHandle:
    """
    The circle with θ ↦ 2θ mod 2π.

    Accepts float angles and high-precision mpf angles; the latter keep an exact
    shadow accurate over long horizons.
    """
    return _circle_system("doubling-circle", double_angle, _vector_double_angle)


def make_circle_rotation(angle: float = GOLDEN_ANGLE) -> SystemHandle:
    """Rigid rotation θ ↦ θ + angle; minimal when angle/2π is irrational."""
    return _circle_system(
        "circle-rotation",
        lambda theta: wrap_angle(theta + angle),
        lambda thetas: _vector_wrap(thetas + angle),
        angle=angle,
    )


# ---------------------------------------------------------------------------
# shift spaces


@lru_cache(maxsize=None)
def _cylinder_weights(length: int) -> np.ndarray:
    weights = 2.0 ** -np.arange(1, length + 1, dtype=float)
    weights.setflags(write=False)
    return weights


def symbol_distance(x: SymbolPoint, y: SymbolPoint) -> float:
    if x.working_length != y.working_length:
        raise DomainError(
            f"cannot compare sequences of length {x.working_length} and {y.working_length}"
        )
    return float(np.dot(x.symbols != y.symbols, _cylinder_weights(x.working_length)))


def exact_symbol_distance(x: SymbolPoint, y: SymbolPoint) -> Fraction:
    """symbol_distance as a fraction; the float version rounds to 1.0 past 52 symbols."""
    if x.working_length != y.working_length:
        raise DomainError(
            f"cannot compare sequences of length {x.working_length} and {y.working_length}"
        )
    length = x.working_length
    mismatches = np.flatnonzero(x.symbols != y.symbols)
    return Fraction(sum(1 << (length - 1 - int(i)) for i in mismatches), 1 << length)


def make_full_shift(alphabet_size: int = 2, working_length: int = DEFAULT_WORKING_LENGTH,
                    perturbation_window: int = 8) -> SystemHandle:
    """
    One-sided full shift on ``alphabet_size`` symbols, sequences truncated to
    ``working_length``. The shift appends PADDING_SYMBOL; experiments keep
    their horizon well below the working length so the padding never reaches
    a compared prefix.
    """
    if alphabet_size < 2 or working_length < 1:
        raise ParameterError(
            f"full shift needs alphabet_size >= 2 and working_length >= 1, "
            f"got {alphabet_size}, {working_length}"
        )

    def sampler(rng: np.random.Generator) -> SymbolPoint:
        return SymbolPoint._trusted(
            alphabet_size, rng.integers(0, alphabet_size, size=working_length, dtype=np.uint8)
        )

    def perturb(point: SymbolPoint, radius: float, rng: np.random.Generator) -> SymbolPoint:
        # changing symbols at indices >= m moves a point by less than 2^-m
        if radius <= 0:
            return point
        start = cylinder_depth(radius)
        stop = min(start + perturbation_window, working_length)
        if start >= stop:
            return point
        symbols = point.symbols.copy()
        symbols[start:stop] = rng.integers(0, alphabet_size, size=stop - start, dtype=np.uint8)
        return SymbolPoint._trusted(alphabet_size, symbols)

    def depth_for(resolution: float) -> int:
        return min(cylinder_depth(resolution), working_length)

    def net(resolution: float) -> List[SymbolPoint]:
        depth = depth_for(resolution)
        points = []
        for prefix in itertools.product(range(alphabet_size), repeat=depth):
            symbols = np.full(working_length, PADDING_SYMBOL, dtype=np.uint8)
            symbols[:depth] = prefix
            points.append(SymbolPoint._trusted(alphabet_size, symbols))
        return points

    return SystemHandle(
        name=f"full-shift-{alphabet_size}",
        point_kind=PointKind.SYMBOL_SEQUENCE,
        metric=symbol_distance,
        map=lambda point: point.shifted(),
        diameter=1.0 - 2.0 ** -working_length,
        sampler=sampler,
        net_builder=net,
        net_size=lambda resolution: alphabet_size ** depth_for(resolution),
        perturb=perturb,
        params={
            'alphabet_size': alphabet_size,
            'working_length': working_length,
            'exact_diameter': 1 - Fraction(1, 1 << working_length),
        },
    )


# ---------------------------------------------------------------------------
# two circles


def two_circles_distance(p: TwoCirclesPoint, q: TwoCirclesPoint) -> float:
    arc = arc_distance(p.angle, q.angle)
    return arc if p.component == q.component else 1.0 + arc


def make_two_circles_swap_double() -> SystemHandle:
    """Two disjoint circles; θ on one circle goes to 2θ on the other."""

    def perturb(point: TwoCirclesPoint, radius: float, rng: np.random.Generator) -> TwoCirclesPoint:
        if radius <= 0:
            return point
        return TwoCirclesPoint(point.component, point.angle + rng.uniform(-radius, radius))

    def net(resolution: float) -> List[TwoCirclesPoint]:
        count = _grid_count(TWO_PI, resolution)
        return [
            TwoCirclesPoint(component, (TWO_PI * k) / count)
            for component in (1, 2)
            for k in range(count)
        ]

    return SystemHandle(
        name="two-circles",
        point_kind=PointKind.TWO_CIRCLES,
        metric=two_circles_distance,
        map=lambda p: TwoCirclesPoint(3 - p.component, double_angle(p.angle)),
        diameter=1.0 + math.pi,
        sampler=lambda rng: TwoCirclesPoint(int(rng.integers(1, 3)), float(rng.uniform(0.0, TWO_PI))),
        net_builder=net,
        net_size=lambda resolution: 2 * _grid_count(TWO_PI, resolution),
        perturb=perturb,
    )


# ---------------------------------------------------------------------------
# finite sets


def make_finite_set(name: str, values: Sequence[float], image: Mapping[float, float]) -> SystemHandle:
    """A finite subset of the line with the map given as a lookup table."""
    points = tuple(float(v) for v in values)
    if len(points) < 2 or len(set(points)) != len(points):
        raise ConstructionError("a finite system needs at least two distinct points")
    table = {float(k): float(v) for k, v in image.items()}
    if set(table) != set(points) or not set(table.values()) <= set(points):
        raise ConstructionError("the map table must send every point of the set into the set")

    def perturb(point: float, radius: float, rng: np.random.Generator) -> float:
        if radius <= 0:
            return point
        nearby = [p for p in points if abs(p - point) < radius]
        return nearby[int(rng.integers(0, len(nearby)))]

    return SystemHandle(
        name=name,
        point_kind=PointKind.FINITE_SET,
        metric=lambda x, y: abs(float(x) - float(y)),
        map=lambda p: table[float(p)],
        diameter=max(points) - min(points),
        sampler=lambda rng: points[int(rng.integers(0, len(points)))],
        net_builder=lambda resolution: list(points),
        net_size=lambda resolution: len(points),
        perturb=perturb,
    )


def make_two_point_identity() -> SystemHandle:
    """{0, 1} at distance 1 with the identity map."""
    return make_finite_set("two-point-identity", (0.0, 1.0), {0.0: 0.0, 1.0: 1.0})


# ---------------------------------------------------------------------------
# combinators


def _compose(fn: Callable[[Any], Any], k: int) -> Callable[[Any], Any]:
    def composed(point: Any) -> Any:
        for _ in range(k):
            point = fn(point)
        return point
    return composed


def make_product(a: SystemHandle, b: SystemHandle) -> SystemHandle:
    """Product system with the max metric and the componentwise map; points are pairs."""

    def net(resolution: float) -> List[Tuple[Point, Point]]:
        return list(itertools.product(a.net_builder(resolution), b.net_builder(resolution)))

    return SystemHandle(
        name=f"{a.name}×{b.name}",
        point_kind=PointKind.PRODUCT_PAIR,
        metric=lambda p, q: max(a.metric(p[0], q[0]), b.metric(p[1], q[1])),
        map=lambda p: (a.map(p[0]), b.map(p[1])),
        diameter=max(a.diameter, b.diameter),
        sampler=lambda rng: (a.sampler(rng), b.sampler(rng)),
        net_builder=net,
        net_size=lambda resolution: a.net_size(resolution) * b.net_size(resolution),
        perturb=lambda p, radius, rng: (a.perturb(p[0], radius, rng), b.perturb(p[1], radius, rng)),
        components=(a, b),
    )


def make_power(a: SystemHandle, k: int) -> SystemHandle:
    """Same space, map replaced by its k-fold composition."""
    if k < 1:
        raise ParameterError(f"power must be at least 1, got {k}")
    if k == 1:
        return a
    return SystemHandle(
        name=f"{a.name}^{k}",
        point_kind=a.point_kind,
        metric=a.metric,
        map=_compose(a.map, k),
        diameter=a.diameter,
        sampler=a.sampler,
        net_builder=a.net_builder,
        net_size=a.net_size,
        perturb=a.perturb,
        vector_map=_compose(a.vector_map, k) if a.vector_map is not None else None,
        vector_metric=a.vector_metric,
        components=a.components,
        params={**a.params, 'power': k * a.params.get('power', 1)},
    )


def make_identity(a: SystemHandle, name: Optional[str] = None) -> SystemHandle:
    """Same space as ``a`` with the identity map."""
    return SystemHandle(
        name=name or f"{a.name}-identity",
        point_kind=a.point_kind,
        metric=a.metric,
        map=lambda p: p,
        diameter=a.diameter,
        sampler=a.sampler,
        net_builder=a.net_builder,
        net_size=a.net_size,
        perturb=a.perturb,
        vector_map=(lambda xs: xs) if a.vector_map is not None else None,
        vector_metric=a.vector_metric,
        components=a.components,
        params=a.params,
    )


def make_conjugate(a: SystemHandle, h: PointMap, h_inverse: PointMap, metric: Metric,
                   diameter: float, name: Optional[str] = None,
                   modulus: Optional[Callable[[float], float]] = None,
                   point_kind: Optional[PointKind] = None,
                   sample_checks: int = 1000, tolerance: float = 1e-12,
                   seed: int = 0) -> SystemHandle:
    """
    The system h ∘ f ∘ h⁻¹ on the image space.

    ``modulus`` bounds the image distance d_Y(h(p), h(q)) <= modulus(d_X(p, q))
    and is used to size nets and perturbations; it defaults to the identity.
    The round trip h ∘ h⁻¹ and h⁻¹ ∘ h is checked on ``sample_checks`` samples.

    Raises:
        ConstructionError: if a round trip misses by more than ``tolerance``
    """
    omega = modulus or (lambda t: t)
    rng = np.random.default_rng(seed)
    for _ in range(sample_checks):
        p = a.sampler(rng)
        q = h(p)
        forward_miss = metric(h(h_inverse(q)), q)
        backward_miss = a.metric(h_inverse(q), p)
        if forward_miss > tolerance or backward_miss > tolerance:
            raise ConstructionError(
                f"conjugacy round trip failed at {p!r}: misses {forward_miss:.3e} / {backward_miss:.3e}"
            )

    def base_radius(radius: float) -> float:
        r = radius
        for _ in range(200):
            if omega(r) <= radius / 2:
                return r
            r /= 2
        raise ConstructionError(f"modulus never drops below {radius / 2}; cannot size nets")

    return SystemHandle(
        name=name or f"{a.name}-conjugate",
        point_kind=point_kind or a.point_kind,
        metric=metric,
        map=lambda q: h(a.map(h_inverse(q))),
        diameter=diameter,
        sampler=lambda g: h(a.sampler(g)),
        net_builder=lambda resolution: [h(p) for p in a.net_builder(base_radius(resolution))],
        net_size=lambda resolution: a.net_size(base_radius(resolution)),
        perturb=lambda q, radius, g: q if radius <= 0 else h(a.perturb(h_inverse(q), base_radius(radius), g)),
        params=a.params,
    )


# ---------------------------------------------------------------------------
# nets, catalog, codec


def build_epsilon_net(a: SystemHandle, resolution: float,
                      max_size: int = DEFAULT_MAX_NET_SIZE) -> List[Point]:
    """
    Finite set of points covering ``a`` within ``resolution``.

    Raises:
        ResourceError: if the net would exceed ``max_size`` points
    """
    if resolution <= 0:
        raise ParameterError(f"resolution must be positive, got {resolution}")
    required = a.net_size(resolution)
    if required > max_size:
        raise ResourceError(
            f"net for {a.name} at resolution {resolution:g} needs {required} points (limit {max_size})"
        )
    points = a.net_builder(resolution)
    logger.debug(f"Built {len(points)}-point net for {a.name} at resolution {resolution:g}")
    return points


SYSTEM_CATALOG: Dict[str, Callable[..., SystemHandle]] = {
    "interval-isometry": make_interval_isometry,
    "doubling-circle": make_doubling_circle,
    "two-circles": make_two_circles_swap_double,
    "cantor-identity": lambda working_length=DEFAULT_WORKING_LENGTH: make_identity(
        make_full_shift(2, working_length), name="cantor-identity"),
    "constant-interval": make_constant_map,
    "interval-contraction": make_interval_contraction,
    "interval-identity": lambda: make_identity(make_interval_isometry(), name="interval-identity"),
    "two-point-identity": make_two_point_identity,
    "circle-rotation": make_circle_rotation,
}

_FULL_SHIFT_NAME = re.compile(r"^full-shift-(\d+)$")
_SHIFT_BACKED = ("cantor-identity",)


def list_systems() -> List[str]:
    return sorted(SYSTEM_CATALOG) + ["full-shift-<alphabet>"]


def get_system(name: str, working_length: Optional[int] = None) -> SystemHandle:
    """
    Look up a system by catalog name.

    Raises:
        UsageError: for unknown names
    """
    match = _FULL_SHIFT_NAME.match(name)
    if match:
        return make_full_shift(int(match.group(1)), working_length or DEFAULT_WORKING_LENGTH)
    factory = SYSTEM_CATALOG.get(name)
    if factory is None:
        raise UsageError(f"Unknown system '{name}'. Known systems: {', '.join(list_systems())}")
    if name in _SHIFT_BACKED:
        return factory(working_length or DEFAULT_WORKING_LENGTH)
    return factory()


def format_point(s: SystemHandle, point: Point) -> str:
    """Text form of a point; floats keep 17 significant digits so parsing is exact."""
    kind = s.point_kind
    if kind in (PointKind.INTERVAL, PointKind.CIRCLE, PointKind.FINITE_SET):
        return f"{float(point):.17g}"
    if kind == PointKind.SYMBOL_SEQUENCE:
        return ''.join(SYMBOL_DIGITS[int(v)] for v in point.symbols)
    if kind == PointKind.TWO_CIRCLES:
        return f"{point.component}:{float(point.angle):.17g}"
    if kind == PointKind.PRODUCT_PAIR:
        a, b = s.components
        return f"{format_point(a, point[0])} | {format_point(b, point[1])}"
    raise ParameterError(f"no text form for point kind {kind}")


def parse_point(s: SystemHandle, text: str) -> Point:
    kind = s.point_kind
    text = text.strip()
    try:
        if kind in (PointKind.INTERVAL, PointKind.CIRCLE, PointKind.FINITE_SET):
            return float(text)
        if kind == PointKind.SYMBOL_SEQUENCE:
            alphabet = int(s.params['alphabet_size'])
            return SymbolPoint(alphabet, np.array([SYMBOL_DIGITS.index(c) for c in text], dtype=np.uint8))
        if kind == PointKind.TWO_CIRCLES:
            component, angle = text.split(':', 1)
            return TwoCirclesPoint(int(component), float(angle))
        if kind == PointKind.PRODUCT_PAIR:
            a, b = s.components
            left, right = text.split(' | ', 1)
            return (parse_point(a, left), parse_point(b, right))
    except (ValueError, KeyError) as e:
        raise ParameterError(f"cannot parse {kind.value} point from {text!r}") from e
    raise ParameterError(f"no text form for point kind {kind}")
