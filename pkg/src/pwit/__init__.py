"""Truncated Poisson weighted infinite tree, root matching and the limit rank law."""

from .tree import DEFAULT_NODE_CAP, PwitTree, dump_tree, sample_descending_tree
from .rank import (
    DEFAULT_J_MAX,
    RankReference,
    RankReferenceRow,
    RootOutcome,
    TreeMatchMethod,
    limit_rank_from,
    rank_reference,
    root_match_on_truncation,
    sample_limit_rank,
    sample_limit_ranks,
    subtree_matching_costs,
)

__all__ = [
    "DEFAULT_NODE_CAP",
    "PwitTree",
    "dump_tree",
    "sample_descending_tree",
    "DEFAULT_J_MAX",
    "RankReference",
    "RankReferenceRow",
    "RootOutcome",
    "TreeMatchMethod",
    "limit_rank_from",
    "rank_reference",
    "root_match_on_truncation",
    "sample_limit_rank",
    "sample_limit_ranks",
    "subtree_matching_costs",
]
