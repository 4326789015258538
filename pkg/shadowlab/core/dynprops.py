"""
Finite-resolution probes for topological properties.

Chain transitivity is decided on a :class:`TransitionGraph` (epsilon-net nodes,
edge u → v iff d(f(u), v) < delta) with networkx. Transitivity, minimality and
proximality probes are one-sided at the stated horizon and resolution.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..exceptions import ParameterError
from .density import DEFAULT_TAIL_FRACTION, IndexSet, Rational, is_syndetic, max_gap, tail_window
from .pseudo_orbit import (
    PseudoOrbit,
    Schedule,
    doubling_block_schedule,
    periodic_pseudo_orbit,
    proximality_witness_sequence,
)
from .spaces import (
    DEFAULT_MAX_NET_SIZE,
    Point,
    PointKind,
    SymbolPoint,
    SystemHandle,
    build_epsilon_net,
    cylinder_depth,
    make_power,
)
from .verify import (
    Criterion,
    ShadowVerdict,
    check_mean_ergodic,
    search_tracer,
    shift_constructive_tracer,
    trace,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TransitionGraph:
    """Epsilon-net nodes with δ-transition edges; node i is ``nodes[i]``."""

    system_name: str
    nodes: Tuple[Point, ...]
    delta: float
    resolution: float
    graph: nx.DiGraph

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    def edges(self) -> List[Tuple[int, int]]:
        return sorted(self.graph.edges())

    def chain_points(self, path: Sequence[int]) -> List[Point]:
        return [self.nodes[i] for i in path]


class PairKind(str, Enum):
    PROXIMAL = "proximal"
    ASYMPTOTIC = "asymptotic"
    DISTAL_AT_RESOLUTION = "distal_at_resolution"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class PairClass:
    pair: Tuple[Point, Point]
    liminf_distance: float
    limsup_distance: float
    kind: PairKind
    horizon: int = 0
    tolerance: float = 0.0

    @property
    def is_proximal(self) -> bool:
        return self.kind in (PairKind.PROXIMAL, PairKind.ASYMPTOTIC)


@dataclass(frozen=True)
class TransitivityEvidence:
    transitive: bool
    pairs_checked: int
    hit_times: Tuple[int, ...] = ()
    failing_pair: Optional[Tuple[Point, Point]] = None


@dataclass(frozen=True)
class ProximalityOutcome:
    """Result of the proximal-pair construction; ``success`` is False for a failure record."""

    success: bool
    z: Point
    pair_zx: PairClass
    pair_zy: PairClass
    verdict: ShadowVerdict
    witness_sequence: PseudoOrbit
    note: str = ""


@dataclass(frozen=True)
class EquicontinuityProbe:
    delta: float
    modulus: float
    pairs_checked: int
    horizon: int


@dataclass(frozen=True)
class DistalityProbe:
    counts: Dict[PairKind, int]
    pairs_checked: int
    constant_distance_pairs: int
    distal: bool
    almost_distal: bool
    pairs: Tuple[PairClass, ...] = ()


@dataclass(frozen=True)
class RecurrenceOutcome:
    """Measured quantities of the recurrence construction; no theorem is claimed."""

    point: Point
    return_times: IndexSet
    max_return_gap: int
    syndetic: bool
    period: Optional[int]
    pseudo_orbit: Optional[PseudoOrbit]
    verdict: Optional[ShadowVerdict]
    candidate_gaps: Tuple[int, ...] = field(default=())


# ---------------------------------------------------------------------------
# transition graphs


def build_transition_graph(s: SystemHandle, delta: float, resolution: float,
                           max_size: int = DEFAULT_MAX_NET_SIZE,
                           workers: Optional[int] = None) -> TransitionGraph:
    """
    Transition graph of ``s`` on the epsilon-net at ``resolution``.

    Raises:
        ParameterError: unless delta > 2 * resolution
        ResourceError: if the net exceeds ``max_size`` points
    """
    if resolution <= 0 or delta <= 2 * resolution:
        raise ParameterError(
            f"transition graphs need delta > 2 * resolution > 0, got delta={delta}, resolution={resolution}"
        )
    nodes = build_epsilon_net(s, resolution, max_size)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(nodes)))

    if s.supports_vectorized:
        coordinates = np.asarray(nodes, dtype=float)
        images = s.vector_map(coordinates)
        rows = [np.flatnonzero(s.vector_metric(coordinates, image) < delta) for image in images]
    else:
        def successors(u: Point) -> np.ndarray:
            image = s.map(u)
            return np.flatnonzero([s.metric(image, v) < delta for v in nodes])

        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(successors, nodes))

    for u, targets in enumerate(rows):
        graph.add_edges_from((u, int(v)) for v in targets)
    logger.debug(
        f"Transition graph for {s.name}: {len(nodes)} nodes, {graph.number_of_edges()} edges "
        f"(δ={delta:g}, resolution={resolution:g})"
    )
    return TransitionGraph(s.name, tuple(nodes), delta, resolution, graph)


def is_chain_transitive(g: TransitionGraph) -> bool:
    """True iff every ordered pair of nodes is joined by a path."""
    return nx.is_strongly_connected(g.graph)


def strongly_connected_components(g: TransitionGraph) -> List[Tuple[int, ...]]:
    """Components as sorted node tuples, ordered by their smallest node."""
    return sorted(tuple(sorted(c)) for c in nx.strongly_connected_components(g.graph))


def find_chain(g: TransitionGraph, source: int, target: int) -> Optional[List[int]]:
    """
    Shortest path of at least one step from ``source`` to ``target``, or None.

    The node points along the path form a finite δ-chain.
    """
    if source == target:
        if g.graph.has_edge(source, source):
            return [source, source]
        best: Optional[List[int]] = None
        for successor in g.graph.successors(source):
            try:
                tail = nx.shortest_path(g.graph, successor, target)
            except nx.NetworkXNoPath:
                continue
            if best is None or len(tail) + 1 < len(best):
                best = [source] + tail
        return best
    try:
        return nx.shortest_path(g.graph, source, target)
    except nx.NetworkXNoPath:
        return None


def chain_is_valid(s: SystemHandle, points: Sequence[Point], delta: float) -> bool:
    """Every step of ``points`` satisfies d(f(p_i), p_{i+1}) < delta."""
    return all(s.metric(s.map(a), b) < delta for a, b in zip(points, points[1:]))


def is_totally_chain_transitive(s: SystemHandle, delta: float, resolution: float, max_power: int,
                                max_size: int = DEFAULT_MAX_NET_SIZE) -> List[bool]:
    """Entry k-1 is the chain transitivity of f^k, for k = 1..max_power."""
    if max_power < 1:
        raise ParameterError(f"max_power must be at least 1, got {max_power}")
    return [
        is_chain_transitive(build_transition_graph(make_power(s, k), delta, resolution, max_size))
        for k in range(1, max_power + 1)
    ]


# ---------------------------------------------------------------------------
# transitivity and recurrence


def _symbol_bridge(start: SymbolPoint, target: SymbolPoint, depth: int) -> SymbolPoint:
    """The first ``depth`` symbols of ``start`` followed by ``target``."""
    symbols = np.concatenate((start.symbols[:depth], target.symbols))[: start.working_length]
    return SymbolPoint(start.alphabet_size, symbols)


def _ball_candidates(s: SystemHandle, center: Point, target: Point, radius: float,
                     probes: int, rng: np.random.Generator, max_size: int) -> List[Point]:
    candidates: List[Point] = [center]
    if s.point_kind == PointKind.SYMBOL_SEQUENCE:
        candidates.append(_symbol_bridge(center, target, cylinder_depth(radius)))
    candidates.extend(v for v in build_epsilon_net(s, radius / 2, max_size) if s.metric(v, center) < radius)
    candidates.extend(s.perturb(center, radius, rng) for _ in range(probes))
    return candidates


def _first_hit(s: SystemHandle, candidates: Sequence[Point], target: Point, radius: float,
               horizon: int) -> Optional[int]:
    best: Optional[int] = None
    for u in candidates:
        point = u
        for n in range(1, horizon + 1):
            if best is not None and n >= best:
                break
            point = s.map(point)
            if s.metric(point, target) < radius:
                best = n
                break
    return best


def is_transitive_sampled(s: SystemHandle, open_set_radius: float, horizon: int, sample_count: int,
                          seed: int, centers: Optional[Sequence[Tuple[Point, Point]]] = None,
                          probes: int = 8,
                          max_size: int = DEFAULT_MAX_NET_SIZE) -> TransitivityEvidence:
    """
    Look for n <= horizon with f^n(U) ∩ V nonempty for sampled ball pairs U, V.

    Candidates in U are net points at half the radius, perturbation probes and,
    on shift spaces, the point that starts like U's center and continues like V's.
    The first pair without a hit is returned as evidence.
    """
    if open_set_radius <= 0 or horizon <= 0 or sample_count <= 0:
        raise ParameterError("open_set_radius, horizon and sample_count must be positive")
    rng = np.random.default_rng(seed)
    pairs = list(centers) if centers is not None else [
        (s.sampler(rng), s.sampler(rng)) for _ in range(sample_count)
    ]
    hit_times: List[int] = []
    for u_center, v_center in pairs:
        candidates = _ball_candidates(s, u_center, v_center, open_set_radius, probes, rng, max_size)
        hit = _first_hit(s, candidates, v_center, open_set_radius, horizon)
        if hit is None:
            logger.info(f"No hit within {horizon} steps for a ball pair on {s.name}")
            return TransitivityEvidence(False, len(hit_times) + 1, tuple(hit_times), (u_center, v_center))
        hit_times.append(hit)
    return TransitivityEvidence(True, len(pairs), tuple(hit_times))


def syndetic_return_times(s: SystemHandle, x: Point, radius: float, horizon: int) -> IndexSet:
    """{1 <= n <= horizon : d(f^n(x), x) < radius}, as an index set of horizon + 1."""
    if radius <= 0 or horizon <= 0:
        raise ParameterError(f"radius and horizon must be positive, got {radius}, {horizon}")
    returns: List[int] = []
    point = x
    for n in range(1, horizon + 1):
        point = s.map(point)
        if s.metric(point, x) < radius:
            returns.append(n)
    return IndexSet(horizon + 1, tuple(returns))


# ---------------------------------------------------------------------------
# pairs


def classify_pair(s: SystemHandle, x: Point, y: Point, horizon: int, tolerance: float,
                  tail_fraction: Rational = DEFAULT_TAIL_FRACTION) -> PairClass:
    """
    Classify (x, y) from the distances d(f^n x, f^n y), n = 0..horizon.

    liminf is the minimum over all n; limsup the maximum over the tail window.
    Asymptotic if limsup < tolerance, else proximal if liminf < tolerance,
    else distal at this resolution.
    """
    if tolerance <= 0:
        raise ParameterError(f"tolerance must be positive, got {tolerance}")
    if horizon < 0:
        raise ParameterError(f"horizon must be non-negative, got {horizon}")
    distances = np.empty(horizon + 1, dtype=float)
    fx, fy = x, y
    for n in range(horizon + 1):
        distances[n] = s.metric(fx, fy)
        fx, fy = s.map(fx), s.map(fy)
    window = tail_window(horizon + 1, tail_fraction)
    liminf = float(distances.min())
    limsup = float(distances[window.start - 1:].max())
    if limsup < tolerance:
        kind = PairKind.ASYMPTOTIC
    elif liminf < tolerance:
        kind = PairKind.PROXIMAL
    else:
        kind = PairKind.DISTAL_AT_RESOLUTION
    return PairClass((x, y), liminf, limsup, kind, horizon, tolerance)


def proximality_experiment(s: SystemHandle, x: Point, y: Point, epsilon: float, horizon: int,
                           delta: Optional[float] = None,
                           block_schedule: Schedule = doubling_block_schedule,
                           net_resolution: Optional[float] = None,
                           max_size: int = DEFAULT_MAX_NET_SIZE) -> ProximalityOutcome:
    """
    Trace the sequence that follows x on even blocks and y on odd blocks, then
    classify the tracer against both points.

    Shift spaces use the constructive diagonal tracer with prefix depth
    ceil(log2(1/ε)) + 1; other systems search the net at ``net_resolution``
    (ε/2 by default). An unsatisfied mean ergodic verdict yields a failure
    record with undetermined pair classes instead of an exception.
    """
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    step_bound = delta if delta is not None else epsilon / 2
    w = proximality_witness_sequence(s, x, y, horizon, step_bound, block_schedule)

    if s.point_kind == PointKind.SYMBOL_SEQUENCE:
        depth = math.ceil(math.log2(1 / epsilon)) + 1
        z = shift_constructive_tracer(w, min(depth, horizon))
        verdict = check_mean_ergodic(trace(s, z, w), epsilon).with_witness(z)
    else:
        verdict = search_tracer(
            s, w, epsilon, Criterion.MEAN_ERGODIC, net_resolution or epsilon / 2, max_size=max_size
        )
        z = verdict.witness

    if not verdict.satisfied:
        undetermined = PairClass((z, x), math.nan, math.nan, PairKind.UNDETERMINED, horizon, epsilon)
        logger.info(f"Proximality construction on {s.name} failed: tracer statistic {verdict.statistic:.4g}")
        return ProximalityOutcome(
            success=False, z=z, pair_zx=undetermined,
            pair_zy=PairClass((z, y), math.nan, math.nan, PairKind.UNDETERMINED, horizon, epsilon),
            verdict=verdict, witness_sequence=w,
            note="no mean ergodic tracer found; pair classes not computed",
        )

    pair_zx = classify_pair(s, z, x, horizon, epsilon)
    pair_zy = classify_pair(s, z, y, horizon, epsilon)
    return ProximalityOutcome(
        success=pair_zx.is_proximal and pair_zy.is_proximal,
        z=z, pair_zx=pair_zx, pair_zy=pair_zy, verdict=verdict, witness_sequence=w,
    )


# ---------------------------------------------------------------------------
# equicontinuity, distality, recurrence


def equicontinuity_modulus(s: SystemHandle, delta: float, horizon: int, sample_count: int,
                           seed: int) -> EquicontinuityProbe:
    """Largest max_{n<=horizon} d(f^n x, f^n y) over sampled pairs with d(x, y) < delta."""
    if delta <= 0 or horizon < 0 or sample_count <= 0:
        raise ParameterError("delta and sample_count must be positive and horizon non-negative")
    rng = np.random.default_rng(seed)
    modulus = 0.0
    for _ in range(sample_count):
        x = s.sampler(rng)
        y = s.perturb(x, delta, rng)
        for _ in range(horizon + 1):
            modulus = max(modulus, s.metric(x, y))
            x, y = s.map(x), s.map(y)
    return EquicontinuityProbe(delta, modulus, sample_count, horizon)


def distality_probe(s: SystemHandle, sample_count: int, horizon: int, seed: int,
                    tolerance_factor: float = 0.5) -> DistalityProbe:
    """
    Classify sampled pairs x != y at tolerance ``tolerance_factor * d(x, y)``.

    Distal when no pair is proximal or asymptotic; almost distal when no pair
    is proximal without being asymptotic.
    """
    if not 0 < tolerance_factor < 1:
        raise ParameterError(f"tolerance_factor must lie in (0, 1), got {tolerance_factor}")
    rng = np.random.default_rng(seed)
    counts = {kind: 0 for kind in PairKind}
    pairs: List[PairClass] = []
    checked = 0
    constant = 0
    while checked < sample_count:
        x, y = s.sampler(rng), s.sampler(rng)
        initial = s.metric(x, y)
        if initial == 0:
            continue
        pair = classify_pair(s, x, y, horizon, tolerance_factor * initial)
        counts[pair.kind] += 1
        pairs.append(pair)
        if pair.liminf_distance == initial == pair.limsup_distance:
            constant += 1
        checked += 1
    return DistalityProbe(
        counts=counts,
        pairs_checked=checked,
        constant_distance_pairs=constant,
        distal=counts[PairKind.PROXIMAL] == 0 and counts[PairKind.ASYMPTOTIC] == 0,
        almost_distal=counts[PairKind.PROXIMAL] == 0,
        pairs=tuple(pairs),
    )


def recurrence_experiment(s: SystemHandle, delta: float, epsilon: float, horizon: int,
                          net_resolution: float, sample_count: int, seed: int,
                          max_period: int = 256, gap_bound: Optional[int] = None,
                          max_size: int = DEFAULT_MAX_NET_SIZE) -> RecurrenceOutcome:
    """
    Constructive half of the minimal-point argument.

    Among sampled points, take the one whose ε-return times have the smallest
    maximal gap as a stand-in for a minimal point, find its first δ-return
    period k <= max_period, build the periodic δ-pseudo orbit through it and
    search a pointwise ε-tracer for that orbit.
    """
    if sample_count <= 0:
        raise ParameterError(f"sample_count must be positive, got {sample_count}")
    points = s.sample_points(sample_count, seed)
    returns = [syndetic_return_times(s, p, epsilon, horizon) for p in points]
    gaps = [max_gap(r) for r in returns]
    best = int(np.argmin(gaps))
    z, z_returns = points[best], returns[best]
    bound = gap_bound if gap_bound is not None else max(1, horizon // 8)

    period = next(
        (k for k in range(1, max_period + 1) if s.metric(s.iterate(z, k), z) < delta), None
    )
    if period is None:
        logger.info(f"No δ-return within {max_period} steps on {s.name}")
        return RecurrenceOutcome(
            z, z_returns, gaps[best], is_syndetic(z_returns, bound), None, None, None, tuple(gaps)
        )
    orbit = periodic_pseudo_orbit(s, z, period, horizon, delta)
    verdict = search_tracer(s, orbit, epsilon, Criterion.POINTWISE, net_resolution, seeds=(z,), max_size=max_size)
    return RecurrenceOutcome(
        point=z,
        return_times=z_returns,
        max_return_gap=gaps[best],
        syndetic=is_syndetic(z_returns, bound),
        period=period,
        pseudo_orbit=orbit,
        verdict=verdict,
        candidate_gaps=tuple(gaps),
    )
