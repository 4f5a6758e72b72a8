"""Weighted random intersection graphs: exact cut/discrepancy evaluators,
randomized max-cut heuristics, weak bipartization, and a Monte Carlo
experiment harness.
"""

from .bipartization import (
    BipartizationOutcome,
    BipartizationState,
    VertexLabelSequence,
    count_sequences_exact,
    expected_sequence_count,
    extract_coloring,
    find_codd_member,
    random_maximal_matching,
    weak_bipartization,
)
from .core import (
    Coloring,
    RepresentationMatrix,
    SetSystemView,
    WeightedIntersectionGraph,
    build_graph,
    cut_weight,
    cut_weight_direct,
    discrepancy,
    norm_sq,
    row_sums,
)
from .cuts import (
    CutResult,
    MajorityConfig,
    beta_lower_bound,
    brute_force_max_cut,
    brute_force_min_discrepancy,
    majority_cut,
    random_cut,
)
from .experiment import (
    ExperimentSpec,
    SummaryStats,
    TrialRecord,
    run_experiment,
    summarize,
)
from .sampling import (
    ModelParams,
    Seed,
    derive_rng,
    derive_seed,
    expected_edge_weight_sum,
    sample_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BipartizationOutcome",
    "BipartizationState",
    "Coloring",
    "CutResult",
    "ExperimentSpec",
    "MajorityConfig",
    "ModelParams",
    "RepresentationMatrix",
    "Seed",
    "SetSystemView",
    "SummaryStats",
    "TrialRecord",
    "VertexLabelSequence",
    "WeightedIntersectionGraph",
    "beta_lower_bound",
    "brute_force_max_cut",
    "brute_force_min_discrepancy",
    "build_graph",
    "count_sequences_exact",
    "cut_weight",
    "cut_weight_direct",
    "derive_rng",
    "derive_seed",
    "discrepancy",
    "expected_edge_weight_sum",
    "expected_sequence_count",
    "extract_coloring",
    "find_codd_member",
    "majority_cut",
    "norm_sq",
    "random_cut",
    "random_maximal_matching",
    "row_sums",
    "run_experiment",
    "sample_matrix",
    "summarize",
    "weak_bipartization",
]
