"""Epsilon-resampling of edge costs and matching sensitivity experiments."""

from .instance import PerturbationInstance, make_instance, perturbed_costs
from .experiments import (
    CorrReplicate,
    CovarianceSplit,
    OverlapResult,
    TailReplicate,
    TailSet,
    TailSummary,
    corr_experiment,
    corr_replicate,
    covariance_split,
    overlap_fraction,
    overlap_lower_bound,
    summarize_corr,
    summarize_tail,
    tail_experiment,
    tail_replicate,
    tail_vertex_sets,
)

__all__ = [
    "PerturbationInstance",
    "make_instance",
    "perturbed_costs",
    "CorrReplicate",
    "CovarianceSplit",
    "OverlapResult",
    "TailReplicate",
    "TailSet",
    "TailSummary",
    "corr_experiment",
    "corr_replicate",
    "covariance_split",
    "overlap_fraction",
    "overlap_lower_bound",
    "summarize_corr",
    "summarize_tail",
    "tail_experiment",
    "tail_replicate",
    "tail_vertex_sets",
]
