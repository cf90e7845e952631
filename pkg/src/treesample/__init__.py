"""Parent distributions from randomized graph algorithms, and samplers that
extract multiple candidate solutions from them."""

__version__ = "0.1.0"

from .algorithms import (
    TiebreakMode,
    TiebreakPolicy,
    bellman_ford_costs,
    enumerate_dfs_trees,
    enumerate_shortest_path_trees,
    randomized_bellman_ford,
    randomized_dfs,
)
from .distributions import (
    ParentDistribution,
    RerunStudyConfig,
    build_empirical,
    distributions_from_json,
    distributions_to_json,
    kl_divergence,
    perturb,
    rerun_divergence_study,
)
from .evaluation import (
    EvalConfig,
    MetricsRecord,
    accuracy_suite,
    accuracy_table,
    coverage_study,
    diversity_table,
    edge_reuse_evolution,
    mean_edge_reuse,
    uniques_and_valids,
)
from .graphs import (
    BF_EDGE_PROBABILITY,
    DFS_EDGE_PROBABILITY,
    Graph,
    GraphSpec,
    INFINITE_COST,
    Task,
    generate_graph,
    graphs_from_json,
    graphs_to_json,
    path_cost_from_source,
    reachable,
    tree_edges,
)
from .samplers import (
    METHODS,
    SamplerConfig,
    alt_upwards_sample,
    argmax_extract,
    beam_extract,
    draw_samples,
    extract,
    greedy_extract,
    random_extract,
    sample_predecessor,
    upwards_sample,
)
from .tables import StudyTable
from .validity import DfsCondition, DfsVerdict, check_bf_valid, check_dfs_valid

__all__ = [
    "BF_EDGE_PROBABILITY",
    "DFS_EDGE_PROBABILITY",
    "DfsCondition",
    "DfsVerdict",
    "EvalConfig",
    "Graph",
    "GraphSpec",
    "INFINITE_COST",
    "METHODS",
    "MetricsRecord",
    "ParentDistribution",
    "RerunStudyConfig",
    "SamplerConfig",
    "StudyTable",
    "Task",
    "TiebreakMode",
    "TiebreakPolicy",
    "accuracy_suite",
    "accuracy_table",
    "alt_upwards_sample",
    "argmax_extract",
    "beam_extract",
    "bellman_ford_costs",
    "build_empirical",
    "check_bf_valid",
    "check_dfs_valid",
    "coverage_study",
    "distributions_from_json",
    "distributions_to_json",
    "diversity_table",
    "draw_samples",
    "edge_reuse_evolution",
    "enumerate_dfs_trees",
    "enumerate_shortest_path_trees",
    "extract",
    "generate_graph",
    "graphs_from_json",
    "graphs_to_json",
    "greedy_extract",
    "kl_divergence",
    "mean_edge_reuse",
    "path_cost_from_source",
    "perturb",
    "random_extract",
    "randomized_bellman_ford",
    "randomized_dfs",
    "reachable",
    "rerun_divergence_study",
    "sample_predecessor",
    "tree_edges",
    "uniques_and_valids",
    "upwards_sample",
]
