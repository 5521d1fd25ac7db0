"""Graph core: weighted graphs, stable matchings, descending subgraphs and oracles."""

from .errors import (
    BudgetExceededError,
    ConfigurationError,
    EstimationError,
    GraphError,
    MatchingLabError,
    NumericalError,
)
from .graph import CostScale, GraphFamily, WeightedGraph, make_graph, sample_costs
from .profile import CostProfile
from .matching import (
    GreedyResult,
    Matching,
    RankProfile,
    UnstablePairReport,
    dump_matching,
    general_greedy,
    greedy_stable_matching,
    is_stable,
    matching_with_vertex_removed,
    rank_profile,
    step_and_erase_matching,
)
from .descending import DescendingSubgraph, descending_subgraph
from .oracle import enumerate_stable_oracle, maximal_matchings

__all__ = [
    "BudgetExceededError",
    "ConfigurationError",
    "EstimationError",
    "GraphError",
    "MatchingLabError",
    "NumericalError",
    "CostScale",
    "GraphFamily",
    "WeightedGraph",
    "make_graph",
    "sample_costs",
    "CostProfile",
    "GreedyResult",
    "Matching",
    "RankProfile",
    "UnstablePairReport",
    "dump_matching",
    "general_greedy",
    "greedy_stable_matching",
    "is_stable",
    "matching_with_vertex_removed",
    "rank_profile",
    "step_and_erase_matching",
    "DescendingSubgraph",
    "descending_subgraph",
    "enumerate_stable_oracle",
    "maximal_matchings",
]
