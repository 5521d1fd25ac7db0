"""
Sensitivity of the stable matching to epsilon-perturbations.

Each replicate draws one :class:`PerturbationInstance` and compares the greedy
matchings of ``omega`` and ``omega_eps``. The ``*_replicate`` functions are the
unit of work distributed by the experiment runner; the ``*_experiment``
functions run replicates sequentially from a single stream.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from src.core.errors import EstimationError
from src.core.matching import GreedyResult, Matching, greedy_stable_matching
from src.cost_process.samplers import bulk_tail_split
from src.perturbation.instance import PerturbationInstance, make_instance
from src.stats.estimators import (
    MIN_CORRELATION_PAIRS,
    CorrEstimate,
    ProportionEstimate,
    pearson_corr_ci,
    proportion_ci,
)
from src.stats.streams import RngStream

logger = logging.getLogger(__name__)

# constant in the lower bound 1 - C / log(1/eps) on the mean overlap
OVERLAP_BOUND_CONSTANT = 7.0


@dataclass(frozen=True, eq=False)
class OverlapResult:
    overlap: float
    c0: float
    ceps: float
    base: GreedyResult
    perturbed: GreedyResult

    @property
    def partner_survival(self) -> float:
        """Fraction of matched vertices whose partner is unchanged."""
        before, after = self.base.matching, self.perturbed.matching
        matched = before.partner >= 0
        if not matched.any():
            return 1.0
        return float(np.mean(before.partner[matched] == after.partner[matched]))


def overlap_fraction(
    instance: PerturbationInstance, eps: float, base: Optional[GreedyResult] = None
) -> OverlapResult:
    """Shared-edge fraction of the greedy matchings before and after perturbation.

    The normalizer is the number of matching edges, so the overlap lies in
    [0, 1] for both graph families. Pass ``base`` to reuse the unperturbed
    matching across an eps grid.
    """
    if base is None:
        base = greedy_stable_matching(instance.base_graph())
    perturbed = greedy_stable_matching(instance.perturbed_graph(eps))
    size = base.matching.size
    shared = np.intersect1d(base.matching.edges, perturbed.matching.edges).size
    overlap = shared / size if size else 1.0
    return OverlapResult(
        overlap=float(overlap),
        c0=base.profile.total,
        ceps=perturbed.profile.total,
        base=base,
        perturbed=perturbed,
    )


def overlap_lower_bound(eps: float, constant: float = OVERLAP_BOUND_CONSTANT) -> float:
    """``1 - C / log(1/eps)`` (reported next to the overlap, never gated)."""
    if eps <= 0.0:
        return 1.0
    if eps >= 1.0:
        return -math.inf
    return 1.0 - constant / math.log(1.0 / eps)


@dataclass(frozen=True, eq=False)
class TailSet:
    """The ``m`` most expensive (last selected) matching edges and their endpoints."""

    edges: np.ndarray
    costs: np.ndarray
    vertices: np.ndarray

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices.tolist())

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges.tolist())


def tail_vertex_sets(matching: Matching, order: np.ndarray, m: int) -> TailSet:
    """``L(m)``: the last ``m`` edges of the greedy selection order.

    Raises:
        ValueError: unless ``1 <= m <= matching.size``.
    """
    if not 1 <= m <= matching.size:
        raise ValueError(f"Need 1 <= m <= {matching.size}, got m={m}")
    graph = matching.graph
    edges = np.asarray(order, dtype=np.int64)[-m:]
    vertices = np.sort(np.concatenate([graph.tails[edges], graph.heads[edges]]))
    return TailSet(edges=edges, costs=graph.require_costs()[edges], vertices=vertices)


@dataclass(frozen=True)
class TailReplicate:
    edges_survived: int
    vertex_disjoint: bool
    edge_disjoint: bool


def tail_replicate(n: int, m: int, eps: float, rng: RngStream) -> TailReplicate:
    """Compare ``L_0(m)`` with ``L_eps(m)`` on one coupled instance."""
    result = overlap_fraction(make_instance(n, rng), eps)
    before = tail_vertex_sets(result.base.matching, result.base.order, m)
    after = tail_vertex_sets(result.perturbed.matching, result.perturbed.order, m)
    survived = len(before.edge_set & result.perturbed.matching.edge_set)
    return TailReplicate(
        edges_survived=survived,
        vertex_disjoint=before.vertex_set.isdisjoint(after.vertex_set),
        edge_disjoint=before.edge_set.isdisjoint(after.edge_set),
    )


@dataclass(frozen=True, eq=False)
class TailSummary:
    reps: int
    no_survivor: ProportionEstimate
    vertex_disjoint: ProportionEstimate
    edge_disjoint: ProportionEstimate
    replicates: List[TailReplicate]


def summarize_tail(replicates: Sequence[TailReplicate]) -> TailSummary:
    reps = len(replicates)
    return TailSummary(
        reps=reps,
        no_survivor=proportion_ci(sum(r.edges_survived == 0 for r in replicates), reps),
        vertex_disjoint=proportion_ci(sum(r.vertex_disjoint for r in replicates), reps),
        edge_disjoint=proportion_ci(sum(r.edge_disjoint for r in replicates), reps),
        replicates=list(replicates),
    )


def tail_experiment(n: int, m: int, eps: float, reps: int, rng: RngStream) -> TailSummary:
    """Frequencies of the tail events over ``reps`` sequential replicates."""
    if reps < 1 or m < 1:
        raise ValueError(f"Need reps >= 1 and m >= 1, got reps={reps}, m={m}")
    return summarize_tail([tail_replicate(n, m, eps, rng) for _ in range(reps)])


@dataclass(frozen=True)
class CorrReplicate:
    """Totals before/after perturbation, optionally split into bulk and tail parts."""

    c0: float
    ceps: float
    bulk0: Optional[float] = None
    tail0: Optional[float] = None
    bulk_eps: Optional[float] = None
    tail_eps: Optional[float] = None


def corr_replicate(
    n: int, eps: float, rng: RngStream, split_m: Optional[int] = None
) -> CorrReplicate:
    result = overlap_fraction(make_instance(n, rng), eps)
    if split_m is None:
        return CorrReplicate(c0=result.c0, ceps=result.ceps)
    bulk0, tail0 = bulk_tail_split(result.base.profile, split_m)
    bulk_eps, tail_eps = bulk_tail_split(result.perturbed.profile, split_m)
    return CorrReplicate(result.c0, result.ceps, bulk0, tail0, bulk_eps, tail_eps)


def summarize_corr(replicates: Sequence[CorrReplicate]) -> CorrEstimate:
    pairs = np.array([(r.c0, r.ceps) for r in replicates], dtype=float)
    return pearson_corr_ci(pairs)


@dataclass(frozen=True)
class CovarianceSplit:
    """``Cov(C0, Ceps)`` as the sum of the four bulk/tail cross covariances."""

    total: float
    bulk_bulk: float
    bulk_tail: float
    tail_bulk: float
    tail_tail: float

    @property
    def parts_sum(self) -> float:
        return self.bulk_bulk + self.bulk_tail + self.tail_bulk + self.tail_tail


def covariance_split(replicates: Sequence[CorrReplicate]) -> CovarianceSplit:
    """Empirical bulk/tail decomposition of the covariance of the totals."""
    if any(r.bulk0 is None for r in replicates):
        raise EstimationError("Replicates were run without a bulk/tail split")
    if len(replicates) < 2:
        raise EstimationError("Need at least 2 replicates for a covariance")
    data = np.array(
        [(r.c0, r.ceps, r.bulk0, r.tail0, r.bulk_eps, r.tail_eps) for r in replicates],
        dtype=float,
    )
    cov = np.cov(data, rowvar=False)
    return CovarianceSplit(
        total=float(cov[0, 1]),
        bulk_bulk=float(cov[2, 4]),
        bulk_tail=float(cov[2, 5]),
        tail_bulk=float(cov[3, 4]),
        tail_tail=float(cov[3, 5]),
    )


def corr_experiment(n: int, eps: float, reps: int, rng: RngStream) -> CorrEstimate:
    """Correlation of ``C0`` and ``Ceps`` over ``reps`` coupled replicates.

    Raises:
        EstimationError: for fewer than 30 replicates.
    """
    if reps < MIN_CORRELATION_PAIRS:
        raise EstimationError(f"Need at least {MIN_CORRELATION_PAIRS} replicates, got {reps}")
    return summarize_corr([corr_replicate(n, eps, rng) for _ in range(reps)])
