"""
Registered experiments: name, one-line anchor, default system, CSV columns and
the docs/results.md section that states the checked property.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple


@dataclass(frozen=True)
class ExperimentEntry:
    name: str
    anchor: str
    default_system: Optional[str]
    csv_columns: Tuple[str, ...]
    reference: str


_ENTRIES = (
    ExperimentEntry(
        "lemma-equivalence",
        "Lemma: mean error below ε² forces bad-set density below ε, and the converse bound diam·d(E)+η",
        "interval-isometry",
        ("sequence", "mean", "premise", "bad_density", "forward_ok", "converse_bound", "converse_ok"),
        reference="docs/results.md#density-lemma",
    ),
    ExperimentEntry(
        "isometry-no-mes",
        "Example: x ↦ 1-x cannot trace the block sequence a_0 ∨ a_1 ∨ ... in average",
        "interval-isometry",
        ("candidate", "average_statistic"),
        reference="docs/results.md#examples-on-the-interval",
    ),
    ExperimentEntry(
        "constant-map-mes",
        "Example: the constant map has mean ergodic shadowing",
        "constant-interval",
        ("trial", "breaks", "bad_upper_density", "cesaro_mean", "epsilon", "satisfied"),
        reference="docs/results.md#examples-on-the-interval",
    ),
    ExperimentEntry(
        "two-circles",
        "Example: swap-and-double on two circles; f² is not chain transitive",
        "two-circles",
        ("power", "nodes", "edges", "components", "chain_transitive", "split_by_circle"),
        reference="docs/results.md#examples-on-circles",
    ),
    ExperimentEntry(
        "doubling-mes",
        "Example: the doubling map has mean ergodic shadowing",
        "doubling-circle",
        ("trial", "breaks", "break_density", "statistic", "witness_from_seed", "epsilon", "satisfied"),
        reference="docs/results.md#examples-on-circles",
    ),
    ExperimentEntry(
        "shift-mes",
        "Example: the full shift has mean ergodic shadowing (diagonal tracer)",
        "full-shift-2",
        ("trial", "breaks", "break_density", "epsilon", "bad_upper_density", "satisfied"),
        reference="docs/results.md#examples-on-shift-spaces",
    ),
    ExperimentEntry(
        "cantor-identity",
        "Example: the identity on the Cantor set shadows but is not transitive",
        "cantor-identity",
        ("check", "value", "expected", "ok"),
        reference="docs/results.md#examples-on-shift-spaces",
    ),
    ExperimentEntry(
        "power-interleave",
        "Theorem: powers inherit mean ergodic shadowing through orbit interleaving",
        "doubling-circle",
        ("k", "trial", "subsample_mean", "scaled_mean", "holds"),
        reference="docs/results.md#powers-and-products",
    ),
    ExperimentEntry(
        "product-mes",
        "Theorem: products inherit mean ergodic shadowing (max metric, union bound)",
        "full-shift-2",
        ("trial", "upper_a", "upper_b", "upper_product", "union_bound_ok", "epsilon", "satisfied"),
        reference="docs/results.md#powers-and-products",
    ),
    ExperimentEntry(
        "proximality",
        "Theorem: mean ergodic shadowing yields a point proximal to two given points",
        "full-shift-2",
        ("pair", "liminf_distance", "limsup_distance", "kind", "tolerance"),
        reference="docs/results.md#proximality-and-distality",
    ),
    ExperimentEntry(
        "distality",
        "Corollary: isometries are distal, so pairs keep their distance",
        "interval-isometry",
        ("pair", "x", "y", "initial_distance", "liminf_distance", "limsup_distance", "kind"),
        reference="docs/results.md#proximality-and-distality",
    ),
    ExperimentEntry(
        "conjugacy-invariance",
        "Theorem: mean ergodic shadowing is invariant under conjugacy (x ↦ x²)",
        "interval-isometry",
        ("candidate", "average_statistic"),
        reference="docs/results.md#conjugacy",
    ),
    ExperimentEntry(
        "almost-average",
        "Proposition: a δ-ergodic pseudo orbit is an almost δ-average pseudo orbit",
        "doubling-circle",
        ("trial", "average_step_error", "bound", "delta", "bound_ok", "almost_average"),
        reference="docs/results.md#almost-average-pseudo-orbits",
    ),
    ExperimentEntry(
        "dlower-from-mes",
        "Proposition: mean ergodic shadowing implies d-lower shadowing",
        "doubling-circle",
        ("trial", "bad_upper_density", "good_lower_density", "mean_ergodic", "d_lower", "complement_ok"),
        reference="docs/results.md#d-lower-shadowing",
    ),
    ExperimentEntry(
        "minimal-recurrence",
        "Theorem (constructive part): recurrence, periodic pseudo orbit and syndetic returns of a minimal point",
        "circle-rotation",
        ("candidate", "max_return_gap"),
        reference="docs/results.md#minimal-points-and-recurrence",
    ),
    ExperimentEntry(
        "product-transitivity",
        "Remark: transitivity of f × f probed for the doubling map",
        "doubling-circle",
        ("pair", "hit_time"),
        reference="docs/results.md#powers-and-products",
    ),
)

EXPERIMENTS: Dict[str, ExperimentEntry] = {entry.name: entry for entry in _ENTRIES}


def list_experiments() -> Tuple[ExperimentEntry, ...]:
    """Registered experiments in catalog order."""
    return _ENTRIES
