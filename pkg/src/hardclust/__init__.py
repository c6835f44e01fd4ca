"""Hardness-of-approximation gadgets for clustering.

Builds the point sets, metrics, and set systems behind clustering
inapproximability arguments, verifies their completeness and soundness
certificates exactly at desk scale, and runs the matching approximation
algorithms with enumeration-certified guarantees.
"""

__version__ = "0.1.0"

from .approx import (
    CandidateCenterSet,
    Coreset,
    PipelineResult,
    candidate_center_set,
    coreset_build,
    pipeline_below2,
    pipeline_one_plus_eps,
    two_approx_enumerate,
    weighted_cost,
)
from .coverage import (
    SetSystem,
    StructureStats,
    brute_force_max_coverage,
    covered,
    dual,
    greedy_max_coverage,
    incidence_girth,
    random_uniform_system,
    shortest_incidence_cycle,
    structure_stats,
)
from .gadgets import (
    GadgetInstance,
    GapReport,
    GlobalSoundness,
    OrientedGraph,
    build_centers,
    build_gadget,
    completeness_certificate,
    generate_no_graph,
    generate_yes_graph,
    global_soundness_lb,
    greedy_disjoint_edges,
    independence_number,
    lattice_integral_report,
    orient_edges,
    soundness_lower_bound,
)
from .johnson import (
    JohnsonInstance,
    LemmaCheckResult,
    WeightedHypergraphAssignment,
    cov_johnson,
    gap_constants,
    hypergraph_lemma_check,
    indicator_embed,
    round_center,
)
from .lifting import (
    LiftParams,
    LiftReport,
    TransferReport,
    alpha_budget_fractions,
    balanced_tuple,
    best_hitting_fraction,
    coverage_transfer_experiment,
    expected_cycle_bound,
    hitting_fraction,
    lift,
    lift_solution,
)
from .metrics import (
    CapExceeded,
    CenterResult,
    Clustering,
    FiniteMetric,
    ObjectiveCost,
    PointSet,
    brute_force_cluster,
    distance,
    frechet_embed,
    iter_partitions,
    kmeans_pairwise_identity,
    minsum_cost,
    objective_cost,
    optimal_center,
    pairwise_distances,
)
from .minsum import (
    MinsumConstants,
    SoundnessProfile,
    adaptive_simpson,
    build_minsum_instance,
    cluster_charge_bound,
    f_functions,
    minsum_constants,
    minsum_gap_experiment,
    solve_soundness_constant,
    soundness_integral,
    soundness_profile,
    soundness_residual,
    tree_charge_bound,
)
