"""
O(n) samplers built on the exponential representation of the greedy matching.

By memorylessness, after ``k - 1`` selections the cheapest available edge
exceeds the previous one by an exponential with rate equal to the number of
available edges. Summing the increments gives the cost profile; regrouping the
total by increment gives independent ``Exp(r_j)`` terms.
"""

import math
from typing import NamedTuple, Tuple

import numpy as np

from src.core.graph import DEFAULT_MAX_FULL_GRAPH_N, make_graph, sample_costs
from src.core.matching import greedy_stable_matching
from src.core.profile import CostProfile
from src.cost_process.kinds import GraphKind
from src.stats.streams import RngStream, exp_sample


def sample_total_cost(kind: GraphKind, rng: RngStream) -> float:
    """One draw of the total greedy matching cost, ``sum_j Z_j`` with ``Z_j ~ Exp(r_j)``."""
    if kind.matching_size == 0:
        return 0.0
    return float(np.sum(exp_sample(rng, kind.total_rates())))


def sample_cost_profile(kind: GraphKind, rng: RngStream) -> CostProfile:
    """One draw of ``Y_1 <= ... <= Y_m`` as cumulative exponential increments."""
    if kind.matching_size == 0:
        return CostProfile(np.empty(0))
    increments = exp_sample(rng, kind.profile_rates())
    return CostProfile(np.cumsum(increments))


class DirectSample(NamedTuple):
    """Jointly sampled matched pairs (selection order) and cost profile."""
    pairs: np.ndarray
    profile: CostProfile

    @property
    def total(self) -> float:
        return self.profile.total


def direct_matching_sample(kind: GraphKind, rng: RngStream) -> DirectSample:
    """Pairs and profile with the joint law of the greedy stable matching.

    The ``k``-th selected pair is uniform over the still-unmatched vertices and
    independent of the costs, so shuffled vertex orders paired off position by
    position have the right law.
    """
    m = kind.matching_size
    if kind.is_bipartite:
        left = rng.permutation(kind.n)
        right = kind.n + rng.permutation(kind.n)
        pairs = np.column_stack([left, right])
    else:
        order = rng.permutation(kind.n)
        pairs = order[: 2 * m].reshape(m, 2)
    return DirectSample(pairs=pairs.astype(np.int64), profile=sample_cost_profile(kind, rng))


def typical_cost_sample(n: int, rng: RngStream) -> float:
    """``n * Y_K`` with ``K = ceil(U n)`` uniform on 1..n, on ``K_{n,n}``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    k = max(1, math.ceil(float(rng.uniform()) * n))
    rates = (n - np.arange(1, k + 1, dtype=float) + 1.0) ** 2
    return n * float(np.sum(exp_sample(rng, rates)))


def typical_cost_from_graph(
    n: int, rng: RngStream, max_full_graph_n: int = DEFAULT_MAX_FULL_GRAPH_N
) -> float:
    """``n * c(v)`` for a uniform left vertex ``v`` of a sampled ``K_{n,n}``."""
    graph = sample_costs(make_graph("bipartite", n, max_full_graph_n=max_full_graph_n), rng)
    matching = greedy_stable_matching(graph).matching
    v = int(rng.integers(0, n))
    return n * matching.cost_of(v)


def bulk_tail_split(profile: CostProfile, m: int) -> Tuple[float, float]:
    """Split one realized total into ``(W_m^-, W_m^+)``.

    With increments ``X_k = Y_k - Y_{k-1}`` the total is
    ``sum_k (len - k + 1) X_k``; ``W_m^+`` keeps the terms ``k > len - m``.
    """
    size = len(profile)
    if not 1 <= m <= size:
        raise ValueError(f"Need 1 <= m <= {size}, got {m}")
    increments = np.diff(profile.values, prepend=0.0)
    weights = size - np.arange(1, size + 1, dtype=float) + 1.0
    terms = weights * increments
    return float(terms[: size - m].sum()), float(terms[size - m:].sum())
