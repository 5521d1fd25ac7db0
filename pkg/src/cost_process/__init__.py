"""Exact exponential-representation samplers, closed-form moments and limit laws."""

from src.core.profile import CostProfile

from .kinds import GraphKind
from .moments import (
    MomentSummary,
    OrderStatMoments,
    PartialSumMoments,
    bulk_tail_moments,
    exact_total_moments,
    exact_total_moments_rational,
    harmonic,
    order_stat_moments,
    partial_sum_moments,
)
from .samplers import (
    DirectSample,
    bulk_tail_split,
    direct_matching_sample,
    sample_cost_profile,
    sample_total_cost,
    typical_cost_from_graph,
    typical_cost_sample,
)
from .limits import (
    GUMBEL_LOCATION,
    LimitLaws,
    finite_mgf,
    gumbel_cdf,
    limit_laws,
    limit_mgf_bipartite,
    limit_mgf_complete,
    typical_cdf,
    typical_density,
    typical_quantile,
)

__all__ = [
    "CostProfile",
    "GraphKind",
    "MomentSummary",
    "OrderStatMoments",
    "PartialSumMoments",
    "bulk_tail_moments",
    "exact_total_moments",
    "exact_total_moments_rational",
    "harmonic",
    "order_stat_moments",
    "partial_sum_moments",
    "DirectSample",
    "bulk_tail_split",
    "direct_matching_sample",
    "sample_cost_profile",
    "sample_total_cost",
    "typical_cost_from_graph",
    "typical_cost_sample",
    "GUMBEL_LOCATION",
    "LimitLaws",
    "finite_mgf",
    "gumbel_cdf",
    "limit_laws",
    "limit_mgf_bipartite",
    "limit_mgf_complete",
    "typical_cdf",
    "typical_density",
    "typical_quantile",
]
