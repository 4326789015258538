from .density import (
    DEFAULT_TAIL_FRACTION,
    DensityProfile,
    IndexSet,
    MarkovBound,
    bounded_mean_from_density,
    compare_mean,
    density_at,
    density_profile,
    exact_sum,
    is_syndetic,
    markov_density_bound,
    max_gap,
    prefix_means_below,
    subsequence_mean_bound,
)
from .spaces import (
    PointKind,
    SymbolPoint,
    SystemHandle,
    TwoCirclesPoint,
    build_epsilon_net,
    get_system,
    list_systems,
    make_circle_rotation,
    make_conjugate,
    make_constant_map,
    make_doubling_circle,
    make_full_shift,
    make_identity,
    make_interval_contraction,
    make_interval_isometry,
    make_power,
    make_product,
    make_two_circles_swap_double,
    make_two_point_identity,
)
from .pseudo_orbit import (
    OrbitKind,
    PseudoOrbit,
    average_error_of_step,
    ergodic_pseudo_orbit,
    interleave_for_power,
    is_almost_average,
    isometry_block_sequence,
    periodic_pseudo_orbit,
    perturbed_orbit,
    project_component,
    proximality_witness_sequence,
    rescan_pseudo_orbit,
)
from .verify import (
    Criterion,
    ShadowVerdict,
    TraceReport,
    check_average,
    check_d_lower,
    check_mean_ergodic,
    check_mean_ergodic_split,
    check_pointwise,
    score_candidates,
    search_tracer,
    shift_constructive_tracer,
    trace,
)
from .dynprops import (
    PairClass,
    PairKind,
    TransitionGraph,
    build_transition_graph,
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
