"""
One pipeline per registered experiment.

A pipeline takes a validated :class:`ExperimentConfig`, computes, and returns a
:class:`PipelineResult`: the pass/fail decision, summary statistics, verdict
records and the tables, orbits and graphs the experiment service writes out.
Pipelines never touch the filesystem.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import logging
import math
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..core.density import (
    bounded_mean_from_density,
    compare_mean,
    density_at,
    density_profile,
    markov_density_bound,
    subsequence_mean_bound,
    tail_window,
)
from ..core.dynprops import (
    TransitionGraph,
    build_transition_graph,
    distality_probe,
    equicontinuity_modulus,
    is_chain_transitive,
    is_totally_chain_transitive,
    is_transitive_sampled,
    proximality_experiment,
    recurrence_experiment,
    strongly_connected_components,
)
from ..core.oracles import doubling_backward_tracer
from ..core.pseudo_orbit import (
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
    perturbed_orbit,
    project_component,
    pseudo_orbit_from_points,
    witness_partition,
)
from ..core.spaces import (
    DEFAULT_MAX_NET_SIZE,
    SymbolPoint,
    SystemHandle,
    build_epsilon_net,
    cylinder_depth,
    format_point,
    get_system,
    make_conjugate,
    make_power,
    make_product,
)
from ..core.verify import (
    Criterion,
    ShadowVerdict,
    check_average,
    check_d_lower,
    check_mean_ergodic,
    check_pointwise,
    score_candidates,
    search_tracer,
    shift_constructive_tracer,
    trace,
)
from ..exceptions import UsageError
from ..schemas import SEED_MODULUS, ExperimentConfig
from .catalog import EXPERIMENTS

logger = logging.getLogger(__name__)

# Grid brute force may land a little under the 1/3 bound of the isometry example.
GRID_TOLERANCE = 0.02


@dataclass(frozen=True)
class Limits:
    max_net_size: int = DEFAULT_MAX_NET_SIZE
    workers: Optional[int] = None


@dataclass(frozen=True)
class LabelledVerdict:
    """A verdict with the system it was computed on; its evidence is written as a trace CSV."""

    system: SystemHandle
    verdict: ShadowVerdict
    label: str


@dataclass
class PipelineResult:
    passed: bool
    assertion: str
    table: pd.DataFrame
    statistics: Dict[str, Any] = field(default_factory=dict)
    verdicts: List[LabelledVerdict] = field(default_factory=list)
    orbits: Dict[str, Tuple[SystemHandle, PseudoOrbit]] = field(default_factory=dict)
    graphs: Dict[str, Tuple[SystemHandle, TransitionGraph]] = field(default_factory=dict)
    extra_tables: Dict[str, pd.DataFrame] = field(default_factory=dict)


def verdict_record(entry: LabelledVerdict) -> Dict[str, Any]:
    """JSON-ready summary of a verdict."""
    s, verdict = entry.system, entry.verdict
    return {
        'label': entry.label,
        'criterion': verdict.criterion.value,
        'epsilon': float(verdict.epsilon),
        'satisfied': bool(verdict.satisfied),
        'statistic': float(verdict.statistic),
        'horizon': int(verdict.horizon),
        'tail_fraction': str(verdict.tail_fraction),
        'witness': format_point(s, verdict.witness) if verdict.witness is not None else None,
        'note': verdict.note,
    }


def _system(config: ExperimentConfig, working_length: Optional[int] = None) -> SystemHandle:
    name = config.system or EXPERIMENTS[config.experiment_name].default_system
    return get_system(name, working_length=config.param('working_length', working_length))


def _trial_seed(config: ExperimentConfig, trial: int) -> int:
    return (config.seed + trial) % SEED_MODULUS


def _start_point(s: SystemHandle, seed: int) -> Any:
    return s.sampler(np.random.default_rng([seed, 2]))


# ---------------------------------------------------------------------------
# density lemma


def run_lemma_equivalence(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config)
    diameter = s.diameter
    epsilon = config.epsilon
    eta = epsilon / (diameter + 1)
    sequences = int(config.param('sequences', 10000))
    length = int(config.param('length', 1000))
    rng = np.random.default_rng(config.rng_seed)

    rows = []
    for index in range(sequences):
        # sparse, heavily skewed errors so that a good share meets mean < ε²
        exponent = rng.uniform(1.0, 12.0)
        keep = rng.uniform(0.005, 1.0)
        errors = diameter * rng.random(length) ** exponent * (rng.random(length) < keep)
        markov = markov_density_bound(errors, epsilon)
        bad_density = markov.bad_density
        premise = markov.premise_holds
        bound = bounded_mean_from_density(errors, eta, diameter)
        rows.append({
            'sequence': index,
            'mean': markov.mean,
            'premise': premise,
            'bad_density': float(bad_density),
            'forward_ok': (not premise) or bad_density < Fraction(epsilon),
            'converse_bound': float(bound),
            'converse_ok': compare_mean(errors, bound) <= 0,
        })
    table = pd.DataFrame(rows, columns=EXPERIMENTS['lemma-equivalence'].csv_columns)
    premise_count = int(table['premise'].sum())
    forward_violations = int((~table['forward_ok']).sum())
    converse_violations = int((~table['converse_ok']).sum())
    return PipelineResult(
        passed=premise_count > 0 and forward_violations == 0 and converse_violations == 0,
        assertion="mean < ε² ⟹ bad density < ε, and mean <= diam·density(bad(η)) + η, in every sequence",
        table=table,
        statistics={
            'sequences': sequences,
            'length': length,
            'premise_count': premise_count,
            'forward_violations': forward_violations,
            'converse_violations': converse_violations,
            'eta': eta,
        },
    )


# ---------------------------------------------------------------------------
# isometry and its conjugate


def _grid_average_search(s: SystemHandle, p: PseudoOrbit, config: ExperimentConfig,
                         limits: Limits, label: str) -> Tuple[pd.DataFrame, bool, List[LabelledVerdict]]:
    """Score the whole net under the average criterion; True when neither criterion finds a tracer."""
    net = build_epsilon_net(s, config.net_resolution, limits.max_net_size)
    scores = score_candidates(
        s, p, net, Criterion.AVERAGE, config.epsilon, config.tail, limits.workers
    )
    best = int(np.argmin(scores))
    average = check_average(trace(s, net[best], p, config.tail), config.epsilon).with_witness(net[best])
    mean_ergodic = search_tracer(
        s, p, config.epsilon, Criterion.MEAN_ERGODIC, config.net_resolution,
        max_size=limits.max_net_size, workers=limits.workers, tail_fraction=config.tail,
    )
    table = pd.DataFrame({'candidate': [float(c) for c in net], 'average_statistic': scores})
    verdicts = [LabelledVerdict(s, average, f"{label}-average"), LabelledVerdict(s, mean_ergodic, f"{label}-mean-ergodic")]
    no_tracer = not average.satisfied and not mean_ergodic.satisfied
    return table, no_tracer, verdicts


def run_isometry_no_mes(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    n_blocks = int(config.param('n_blocks', 8))
    s = _system(config)
    p = isometry_block_sequence(n_blocks, delta=config.delta)
    table, no_tracer, verdicts = _grid_average_search(s, p, config, limits, "isometry")
    threshold = 1 / 3 - GRID_TOLERANCE
    return PipelineResult(
        passed=no_tracer and float(table['average_statistic'].min()) >= threshold,
        assertion=f"no grid candidate traces the block sequence in average; min statistic >= {threshold:.4f}",
        table=table,
        statistics={
            'n_blocks': n_blocks,
            'horizon': p.horizon,
            'breaks': len(p.break_set),
            'break_density': float(density_at(p.break_set, p.horizon)),
            'min_average_statistic': float(table['average_statistic'].min()),
            'threshold': threshold,
        },
        verdicts=verdicts,
        orbits={'block_sequence': (s, p)},
    )


def run_conjugacy_invariance(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    n_blocks = int(config.param('n_blocks', 8))
    base = _system(config)
    conjugate = make_conjugate(
        base,
        h=lambda x: x * x,
        h_inverse=lambda y: math.sqrt(max(0.0, y)),
        metric=lambda a, b: abs(a - b),
        diameter=1.0,
        name=f"{base.name}-squared",
        modulus=lambda t: 2 * t,
        sample_checks=int(config.param('sample_checks', 1000)),
        seed=config.rng_seed,
    )
    rng = np.random.default_rng(config.rng_seed)
    samples = rng.random(int(config.param('sample_checks', 1000)))
    map_miss = max(abs(conjugate.map(q) - (1 - math.sqrt(q)) ** 2) for q in samples)

    base_orbit = isometry_block_sequence(n_blocks, delta=config.delta)
    p = pseudo_orbit_from_points(
        conjugate, [x * x for x in base_orbit.points], config.delta, kind=OrbitKind.DELTA_ERGODIC
    )
    table, no_tracer, verdicts = _grid_average_search(conjugate, p, config, limits, "conjugate")
    threshold = 1 / 3 - GRID_TOLERANCE
    return PipelineResult(
        passed=no_tracer and float(table['average_statistic'].min()) >= threshold and map_miss <= 1e-12,
        assertion="the conjugated isometry still cannot trace the conjugated block sequence in average",
        table=table,
        statistics={
            'n_blocks': n_blocks,
            'map_max_miss': map_miss,
            'min_average_statistic': float(table['average_statistic'].min()),
            'threshold': threshold,
        },
        verdicts=verdicts,
        orbits={'conjugate_block_sequence': (conjugate, p)},
    )


# ---------------------------------------------------------------------------
# constant map


def run_constant_map_mes(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config)
    value = s.params.get('value', 0.5)
    trials = int(config.param('trials', 20))
    radius = float(config.param('radius', 0.0))
    rows = []
    verdicts = []
    for trial in range(trials):
        seed = _trial_seed(config, trial)
        p = ergodic_pseudo_orbit(
            s, [_start_point(s, seed)], config.delta, doubling_gap_schedule, config.horizon, seed, radius=radius
        )
        report = trace(s, value, p, config.tail)
        verdict = check_mean_ergodic(report, config.epsilon).with_witness(value)
        rows.append({
            'trial': trial,
            'breaks': len(p.break_set),
            'bad_upper_density': verdict.statistic,
            'cesaro_mean': report.cesaro_mean_estimate,
            'epsilon': config.epsilon,
            'satisfied': verdict.satisfied,
        })
        if trial == 0:
            verdicts.append(LabelledVerdict(s, verdict, "trial-0"))
            verdicts.append(LabelledVerdict(s, check_average(report, config.epsilon).with_witness(value), "trial-0-average"))
    table = pd.DataFrame(rows, columns=EXPERIMENTS['constant-map-mes'].csv_columns)
    return PipelineResult(
        passed=bool(table['satisfied'].all()),
        assertion="the fixed point traces every δ-ergodic pseudo orbit outside a set of upper density < ε",
        table=table,
        statistics={'trials': trials, 'passed_trials': int(table['satisfied'].sum()), 'tracer': value},
        verdicts=verdicts,
    )


# ---------------------------------------------------------------------------
# two circles


def run_two_circles(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config)
    rows = []
    graphs: Dict[str, Tuple[SystemHandle, TransitionGraph]] = {}
    for k in (1, 2):
        power = make_power(s, k)
        g = build_transition_graph(
            power, config.delta, config.net_resolution, limits.max_net_size, limits.workers
        )
        components = strongly_connected_components(g)
        circles_per_component = [{g.nodes[i].component for i in c} for c in components]
        split = len(components) == 2 and all(len(c) == 1 for c in circles_per_component)
        rows.append({
            'power': k,
            'nodes': len(g.nodes),
            'edges': g.edge_count,
            'components': len(components),
            'chain_transitive': is_chain_transitive(g),
            'split_by_circle': split,
        })
        graphs[f"power-{k}"] = (power, g)
    table = pd.DataFrame(rows, columns=EXPERIMENTS['two-circles'].csv_columns)
    first, second = rows
    return PipelineResult(
        passed=first['chain_transitive'] and not second['chain_transitive'] and second['split_by_circle'],
        assertion="f is chain transitive; the f² graph splits into exactly one component per circle",
        table=table,
        statistics={
            'chain_transitive_by_power': is_totally_chain_transitive(
                s, config.delta, config.net_resolution, int(config.param('max_power', 4)), limits.max_net_size
            ),
        },
        graphs=graphs,
    )


# ---------------------------------------------------------------------------
# doubling map


def _doubling_trial(s: SystemHandle, config: ExperimentConfig, trial: int,
                    limits: Limits) -> Tuple[PseudoOrbit, Any, ShadowVerdict]:
    seed = _trial_seed(config, trial)
    p = ergodic_pseudo_orbit(
        s, [_start_point(s, seed)], config.delta, doubling_gap_schedule, config.horizon, seed
    )
    oracle = doubling_backward_tracer(p)
    verdict = search_tracer(
        s, p, config.epsilon, Criterion.MEAN_ERGODIC, config.net_resolution, seeds=(oracle,),
        max_size=limits.max_net_size, workers=limits.workers, tail_fraction=config.tail,
    )
    return p, oracle, verdict


def run_doubling_mes(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config)
    trials = int(config.param('trials', 100))
    rows = []
    verdicts = []
    orbits = {}
    for trial in range(trials):
        p, oracle, verdict = _doubling_trial(s, config, trial, limits)
        rows.append({
            'trial': trial,
            'breaks': len(p.break_set),
            'break_density': float(density_at(p.break_set, p.horizon)),
            'statistic': verdict.statistic,
            'witness_from_seed': verdict.witness is oracle,
            'epsilon': config.epsilon,
            'satisfied': verdict.satisfied,
        })
        if trial == 0:
            verdicts.append(LabelledVerdict(s, verdict, "trial-0"))
            orbits['trial-0'] = (s, p)
    table = pd.DataFrame(rows, columns=EXPERIMENTS['doubling-mes'].csv_columns)
    return PipelineResult(
        passed=bool(table['satisfied'].all()),
        assertion="every δ-ergodic pseudo orbit has a tracer satisfying the mean ergodic check at ε",
        table=table,
        statistics={'trials': trials, 'passed_trials': int(table['satisfied'].sum())},
        verdicts=verdicts,
        orbits=orbits,
    )


def run_dlower_from_mes(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config)
    trials = int(config.param('trials', 10))
    rows = []
    for trial in range(trials):
        _, _, verdict = _doubling_trial(s, config, trial, limits)
        report = verdict.evidence
        lower = check_d_lower(report, config.epsilon)
        bad_upper = report.bad_upper_density(config.epsilon)
        good_lower = report.good_lower_density(config.epsilon)
        rows.append({
            'trial': trial,
            'bad_upper_density': float(bad_upper),
            'good_lower_density': float(good_lower),
            'mean_ergodic': verdict.satisfied,
            'd_lower': lower.satisfied,
            'complement_ok': good_lower == 1 - bad_upper,
        })
    table = pd.DataFrame(rows, columns=EXPERIMENTS['dlower-from-mes'].csv_columns)
    implication = bool((~table['mean_ergodic'] | table['d_lower']).all())
    return PipelineResult(
        passed=implication and bool(table['complement_ok'].all()) and bool(table['mean_ergodic'].any()),
        assertion="each mean ergodic verdict at ε < 1 comes with a d-lower verdict; good lower = 1 - bad upper",
        table=table,
        statistics={'trials': trials, 'mean_ergodic_trials': int(table['mean_ergodic'].sum())},
    )


def run_almost_average(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config)
    trials = int(config.param('trials', 20))
    diameter = s.diameter
    eta = config.delta / (diameter + 1)
    rows = []
    for trial in range(trials):
        seed = _trial_seed(config, trial)
        # interior steps stay below η so only junctions can be η-bad
        p = ergodic_pseudo_orbit(
            s, [_start_point(s, seed)], config.delta, doubling_gap_schedule, config.horizon, seed,
            radius=eta / 2,
        )
        steps = p.step_errors
        window = tail_window(steps.size, config.tail)
        bounds = [bounded_mean_from_density(steps[:n], eta, diameter) for n in window]
        rows.append({
            'trial': trial,
            'average_step_error': average_error_of_step(p, config.tail),
            'bound': float(max(bounds)),
            'delta': config.delta,
            'bound_ok': all(compare_mean(steps[:n], b) <= 0 for n, b in zip(window, bounds)),
            'almost_average': is_almost_average(p, config.delta, config.tail),
        })
    table = pd.DataFrame(rows, columns=EXPERIMENTS['almost-average'].csv_columns)
    return PipelineResult(
        passed=bool(table['bound_ok'].all() and table['almost_average'].all()),
        assertion="mean step error <= diam·density(η-bad) + η < δ for every δ-ergodic orbit",
        table=table,
        statistics={'trials': trials, 'eta': eta},
    )


# ---------------------------------------------------------------------------
# shift spaces


def run_shift_mes(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config, working_length=config.horizon + 64)
    trials = int(config.param('trials', 100))
    prefix_depth = int(config.param('prefix_depth', cylinder_depth(config.delta)))
    rows = []
    verdicts = []
    for trial in range(trials):
        seed = _trial_seed(config, trial)
        p = ergodic_pseudo_orbit(
            s, [_start_point(s, seed)], config.delta, doubling_gap_schedule, config.horizon, seed
        )
        z = shift_constructive_tracer(p, prefix_depth)
        report = trace(s, z, p, config.tail)
        break_density = float(density_at(p.break_set, p.horizon))
        epsilon = config.epsilon + break_density
        verdict = check_mean_ergodic(report, epsilon).with_witness(z)
        rows.append({
            'trial': trial,
            'breaks': len(p.break_set),
            'break_density': break_density,
            'epsilon': epsilon,
            'bad_upper_density': verdict.statistic,
            'satisfied': verdict.satisfied,
        })
        if trial == 0:
            verdicts.append(LabelledVerdict(s, verdict, "trial-0"))
    table = pd.DataFrame(rows, columns=EXPERIMENTS['shift-mes'].csv_columns)
    return PipelineResult(
        passed=bool(table['satisfied'].all()),
        assertion="the diagonal tracer satisfies the mean ergodic check at ε + break density",
        table=table,
        statistics={'trials': trials, 'prefix_depth': prefix_depth, 'passed_trials': int(table['satisfied'].sum())},
        verdicts=verdicts,
    )


def run_cantor_identity(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config)
    length = int(s.params['working_length'])
    delta = config.delta
    zeros = SymbolPoint.constant(2, 0, length)
    ones = SymbolPoint.constant(2, 1, length)
    checks = []

    p = perturbed_orbit(s, _start_point(s, config.rng_seed), delta, config.horizon, config.rng_seed)
    pointwise = check_pointwise(trace(s, p.points[0], p, config.tail), delta).with_witness(p.points[0])
    checks.append(('pointwise_shadowing', pointwise.statistic, f"< {delta}", pointwise.satisfied))

    evidence = is_transitive_sampled(
        s, delta, config.horizon, 1, config.rng_seed, centers=[(zeros, ones)], max_size=limits.max_net_size
    )
    checks.append(('transitive', float(evidence.transitive), "0", not evidence.transitive))

    g = build_transition_graph(s, delta, config.net_resolution, limits.max_net_size, limits.workers)
    chain_transitive = is_chain_transitive(g)
    checks.append(('chain_transitive', float(chain_transitive), "0", not chain_transitive))

    starts = [zeros if i % 2 == 0 else ones for i in range(64)]
    ergodic = ergodic_pseudo_orbit(s, starts, delta, doubling_gap_schedule, config.horizon, config.rng_seed)
    mean_ergodic = search_tracer(
        s, ergodic, config.epsilon, Criterion.MEAN_ERGODIC, config.net_resolution,
        max_size=limits.max_net_size, workers=limits.workers, tail_fraction=config.tail,
    )
    checks.append(('mean_ergodic_tracer_found', mean_ergodic.statistic, f">= {config.epsilon}", not mean_ergodic.satisfied))

    table = pd.DataFrame(checks, columns=EXPERIMENTS['cantor-identity'].csv_columns)
    return PipelineResult(
        passed=bool(table['ok'].all()),
        assertion="the identity shadows δ-pseudo orbits, is neither transitive nor chain transitive, "
                  "and no net point traces the alternating δ-ergodic orbit",
        table=table,
        statistics={'components': len(strongly_connected_components(g)), 'nodes': len(g.nodes)},
        verdicts=[LabelledVerdict(s, pointwise, "pointwise"), LabelledVerdict(s, mean_ergodic, "alternating-mean-ergodic")],
        graphs={'identity': (s, g)},
    )


def run_product_mes(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    a = _system(config, working_length=config.horizon + 64)
    product = make_product(a, a)
    trials = int(config.param('trials', 100))
    depth = int(config.param('prefix_depth', cylinder_depth(config.delta)))
    half = config.epsilon / 2
    rows = []
    for trial in range(trials):
        seed = _trial_seed(config, trial)
        p = ergodic_pseudo_orbit(
            product, [_start_point(product, seed)], config.delta, doubling_gap_schedule, config.horizon, seed
        )
        parts = [project_component(p, product, i) for i in (0, 1)]
        tracers = [shift_constructive_tracer(q, depth) for q in parts]
        reports = [trace(a, z, q, config.tail) for z, q in zip(tracers, parts)]
        component_verdicts = [check_mean_ergodic(r, half) for r in reports]
        product_report = trace(product, tuple(tracers), p, config.tail)
        verdict = check_mean_ergodic(product_report, config.epsilon)

        bad_a, bad_b = (r.bad_set(half) for r in reports)
        bad_product = product_report.bad_set(config.epsilon)
        union = bad_a.union(bad_b)
        window = tail_window(p.horizon, config.tail)
        union_ok = set(bad_product) <= set(union) and all(
            density_at(union, n) <= density_at(bad_a, n) + density_at(bad_b, n) for n in window
        )
        upper_a, upper_b = (density_profile(b, config.tail).upper_estimate for b in (bad_a, bad_b))
        upper_product = density_profile(bad_product, config.tail).upper_estimate
        rows.append({
            'trial': trial,
            'upper_a': float(upper_a),
            'upper_b': float(upper_b),
            'upper_product': float(upper_product),
            'union_bound_ok': union_ok and upper_product <= upper_a + upper_b,
            'epsilon': config.epsilon,
            'satisfied': verdict.satisfied and all(v.satisfied for v in component_verdicts),
        })
    table = pd.DataFrame(rows, columns=EXPERIMENTS['product-mes'].csv_columns)
    return PipelineResult(
        passed=bool(table['satisfied'].all() and table['union_bound_ok'].all()),
        assertion="componentwise tracers at ε/2 give a product tracer at ε; bad sets obey the union bound",
        table=table,
        statistics={'trials': trials, 'prefix_depth': depth, 'passed_trials': int(table['satisfied'].sum())},
    )


def run_proximality(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config, working_length=config.horizon + 64)
    length = int(s.params['working_length'])
    alphabet = int(s.params['alphabet_size'])
    x = SymbolPoint.constant(alphabet, int(config.param('x_symbol', 0)), length)
    y = SymbolPoint.constant(alphabet, int(config.param('y_symbol', 1)), length)
    outcome = proximality_experiment(s, x, y, config.epsilon, config.horizon, delta=config.delta)

    partitions = {}
    for label, schedule in (('doubling', doubling_block_schedule), ('factorial', factorial_block_schedule)):
        first, second = witness_partition(schedule, config.horizon)
        partitions[f"{label}_m1_upper"] = float(density_profile(first, config.tail).upper_estimate)
        partitions[f"{label}_m2_upper"] = float(density_profile(second, config.tail).upper_estimate)

    table = pd.DataFrame(
        [
            {'pair': label, 'liminf_distance': pc.liminf_distance, 'limsup_distance': pc.limsup_distance,
             'kind': pc.kind.value, 'tolerance': pc.tolerance}
            for label, pc in (('z-x', outcome.pair_zx), ('z-y', outcome.pair_zy))
        ],
        columns=EXPERIMENTS['proximality'].csv_columns,
    )
    close = outcome.success and all(
        pc.liminf_distance <= config.epsilon for pc in (outcome.pair_zx, outcome.pair_zy)
    )
    return PipelineResult(
        passed=close,
        assertion="the tracer of the alternating-block sequence is proximal to both x and y",
        table=table,
        statistics={'success': outcome.success, 'note': outcome.note, **partitions},
        verdicts=[LabelledVerdict(s, outcome.verdict, "witness-sequence")],
        orbits={'witness_sequence': (s, outcome.witness_sequence)},
    )


# ---------------------------------------------------------------------------
# powers


def run_power_interleave(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config)
    powers = [int(k) for k in config.param('powers', [2, 3, 5])]
    trials = int(config.param('trials', 1000))
    sequence_length = int(config.param('sequence_length', 1000))
    rng = np.random.default_rng(config.rng_seed)
    rows = []
    bookkeeping = []
    orbits = {}
    for k in powers:
        power = make_power(s, k)
        base_horizon = max(16, config.horizon // k)
        seed = _trial_seed(config, k)
        base = ergodic_pseudo_orbit(
            power, [_start_point(power, seed)], config.delta, doubling_gap_schedule, base_horizon, seed
        )
        y = interleave_for_power(s, base, k)
        scaled = {k * b + k - 1 for b in base.break_set}

        start = _start_point(s, seed + 1)
        interleaved_exact = interleave_for_power(s, exact_orbit(power, start, base_horizon), k)
        exact_match = all(
            point == reference for point, reference in zip(interleaved_exact.points, s.orbit(start, y.horizon))
        )
        bookkeeping.append({
            'k': k,
            'base_breaks': len(base.break_set),
            'output_breaks': len(y.break_set),
            'scaled_match': set(y.break_set) == scaled,
            'exact_match': exact_match,
        })
        orbits[f"interleaved-k{k}"] = (s, y)

        errors = trace(s, _start_point(s, seed + 2), y).errors
        sampled, scaled_mean = subsequence_mean_bound(errors, k)
        rows.append({'k': k, 'trial': -1, 'subsample_mean': float(sampled),
                     'scaled_mean': float(scaled_mean), 'holds': sampled <= scaled_mean})
        for trial in range(trials):
            values = rng.random(sequence_length * k)
            sampled, scaled_mean = subsequence_mean_bound(values, k)
            rows.append({'k': k, 'trial': trial, 'subsample_mean': float(sampled),
                         'scaled_mean': float(scaled_mean), 'holds': sampled <= scaled_mean})

    table = pd.DataFrame(rows, columns=EXPERIMENTS['power-interleave'].csv_columns)
    books = pd.DataFrame(bookkeeping)
    return PipelineResult(
        passed=bool(table['holds'].all() and books['scaled_match'].all() and books['exact_match'].all()),
        assertion="interleaving keeps breaks at k·i + k - 1 and (1/n)Σ a_ik <= k·(1/nk)Σ a_l exactly",
        table=table,
        statistics={'powers': powers, 'trials': trials, 'violations': int((~table['holds']).sum())},
        orbits=orbits,
        extra_tables={'interleave': books},
    )


# ---------------------------------------------------------------------------
# distality, recurrence, transitivity


def run_distality(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config)
    pairs = int(config.param('pairs', 1000))
    probe = distality_probe(
        s, pairs, config.horizon, config.rng_seed, tolerance_factor=float(config.param('tolerance_factor', 0.5))
    )
    rows = []
    for index, pc in enumerate(probe.pairs):
        x, y = pc.pair
        rows.append({
            'pair': index,
            'x': float(x),
            'y': float(y),
            'initial_distance': s.metric(x, y),
            'liminf_distance': pc.liminf_distance,
            'limsup_distance': pc.limsup_distance,
            'kind': pc.kind.value,
        })
    table = pd.DataFrame(rows, columns=EXPERIMENTS['distality'].csv_columns)
    moduli = {}
    for name in ('interval-isometry', 'interval-contraction'):
        probe_e = equicontinuity_modulus(get_system(name), config.delta, config.horizon, 100, config.rng_seed)
        moduli[f"{name}_modulus"] = probe_e.modulus
    return PipelineResult(
        passed=probe.distal and probe.constant_distance_pairs == probe.pairs_checked,
        assertion="every sampled pair keeps its distance and classifies distal_at_resolution",
        table=table,
        statistics={
            'pairs': probe.pairs_checked,
            'constant_distance_pairs': probe.constant_distance_pairs,
            'distal': probe.distal,
            'almost_distal': probe.almost_distal,
            'equicontinuity_delta': config.delta,
            **moduli,
        },
    )


def run_minimal_recurrence(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config)
    outcome = recurrence_experiment(
        s, config.delta, config.epsilon, config.horizon, config.net_resolution,
        sample_count=int(config.param('sample_count', 16)), seed=config.rng_seed,
        max_period=int(config.param('max_period', 256)), gap_bound=config.param('gap_bound'),
        max_size=limits.max_net_size,
    )
    table = pd.DataFrame(
        {'candidate': range(len(outcome.candidate_gaps)), 'max_return_gap': outcome.candidate_gaps},
        columns=EXPERIMENTS['minimal-recurrence'].csv_columns,
    )
    verdicts = [LabelledVerdict(s, outcome.verdict, "periodic-pointwise")] if outcome.verdict is not None else []
    orbits = {'periodic': (s, outcome.pseudo_orbit)} if outcome.pseudo_orbit is not None else {}
    return PipelineResult(
        passed=(
            outcome.syndetic and outcome.period is not None
            and outcome.pseudo_orbit.kind == OrbitKind.DELTA_PSEUDO
        ),
        assertion="the stand-in minimal point returns syndetically and closes a periodic δ-pseudo orbit",
        table=table,
        statistics={
            'point': format_point(s, outcome.point),
            'max_return_gap': outcome.max_return_gap,
            'returns': len(outcome.return_times),
            'syndetic': outcome.syndetic,
            'period': outcome.period,
            'minimal_point_stand_in': "sampled point with the smallest maximal return gap",
        },
        verdicts=verdicts,
        orbits=orbits,
    )


def run_product_transitivity(config: ExperimentConfig, limits: Limits) -> PipelineResult:
    s = _system(config)
    product = make_product(s, s)
    evidence = is_transitive_sampled(
        product, float(config.param('open_set_radius', 0.3)), config.horizon,
        int(config.param('sample_count', 20)), config.rng_seed, max_size=limits.max_net_size,
    )
    table = pd.DataFrame(
        {'pair': range(len(evidence.hit_times)), 'hit_time': evidence.hit_times},
        columns=EXPERIMENTS['product-transitivity'].csv_columns,
    )
    return PipelineResult(
        passed=evidence.transitive,
        assertion="every sampled ball pair of f × f is joined within the horizon",
        table=table,
        statistics={
            'pairs_checked': evidence.pairs_checked,
            'transitive': evidence.transitive,
            'note': "transitivity of the product is probed; weak mixing is not claimed",
        },
    )


PIPELINES: Dict[str, Callable[[ExperimentConfig, Limits], PipelineResult]] = {
    'lemma-equivalence': run_lemma_equivalence,
    'isometry-no-mes': run_isometry_no_mes,
    'constant-map-mes': run_constant_map_mes,
    'two-circles': run_two_circles,
    'doubling-mes': run_doubling_mes,
    'shift-mes': run_shift_mes,
    'cantor-identity': run_cantor_identity,
    'power-interleave': run_power_interleave,
    'product-mes': run_product_mes,
    'proximality': run_proximality,
    'distality': run_distality,
    'conjugacy-invariance': run_conjugacy_invariance,
    'almost-average': run_almost_average,
    'dlower-from-mes': run_dlower_from_mes,
    'minimal-recurrence': run_minimal_recurrence,
    'product-transitivity': run_product_transitivity,
}


def get_pipeline(name: str) -> Callable[[ExperimentConfig, Limits], PipelineResult]:
    pipeline = PIPELINES.get(name)
    if pipeline is None:
        raise UsageError(f"No pipeline registered for experiment '{name}'")
    return pipeline
