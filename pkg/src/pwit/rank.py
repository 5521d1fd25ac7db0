"""
Matching of the PWIT root and the limiting rank law.

On a finite tree the matching cost of node ``x`` within its own subtree is
``W_x = min{T_xj : T_xj < W_xj}`` over its children ``j`` (``+inf`` if no child
accepts). The root's rank is the position of the accepting child.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Union

import numpy as np
from scipy import integrate, stats

from src.core.errors import GraphError
from src.core.matching import general_greedy
from src.cost_process.limits import typical_quantile
from src.pwit.tree import PwitTree
from src.stats.quadrature import rank_one_probability
from src.stats.streams import RngStream, exp_sample

logger = logging.getLogger(__name__)

DEFAULT_J_MAX = 1_000_000
RANK_BLOCK = 64

Rank = Union[int, float]


class TreeMatchMethod(Enum):
    RECURSION = "recursion"
    GENERAL_GREEDY = "general-greedy"


@dataclass(frozen=True)
class RootOutcome:
    """Root matched flag, matching cost ``W_0`` and rank (``+inf`` when unmatched)."""

    matched: bool
    cost: float
    rank: Rank

    @classmethod
    def unmatched(cls) -> "RootOutcome":
        return cls(matched=False, cost=math.inf, rank=math.inf)


def subtree_matching_costs(tree: PwitTree) -> np.ndarray:
    """``W_x`` for every node, evaluated generation by generation from the leaves."""
    w = np.full(tree.size, np.inf)
    order = np.argsort(tree.depth, kind="stable")
    bounds = np.searchsorted(tree.depth[order], np.arange(tree.depth.max() + 2))
    for level in range(int(tree.depth.max()), 0, -1):
        nodes = order[bounds[level]:bounds[level + 1]]
        accept = nodes[tree.cost[nodes] < w[nodes]]
        np.minimum.at(w, tree.parent[accept], tree.cost[accept])
    return w


def root_match_on_truncation(
    tree: PwitTree, method: Union[TreeMatchMethod, str] = TreeMatchMethod.RECURSION
) -> RootOutcome:
    """Matching cost and rank of the root in the stable matching of ``tree``.

    ``recursion`` evaluates the subtree costs bottom-up; ``general-greedy`` runs
    the mutual-favourites algorithm on the explicit tree. Both give the same
    outcome.

    Raises:
        GraphError: if the tree was cut at the node cap.
    """
    if tree.truncated:
        raise GraphError("Tree hit the node cap; its root outcome is not valid")
    children = tree.children(0)
    if children.size == 0:
        return RootOutcome.unmatched()

    if TreeMatchMethod(method) is TreeMatchMethod.RECURSION:
        w = subtree_matching_costs(tree)
        accepting = np.flatnonzero(tree.cost[children] < w[children])
        if accepting.size == 0:
            return RootOutcome.unmatched()
        first = int(accepting[0])
        return RootOutcome(matched=True, cost=float(tree.cost[children[first]]), rank=first + 1)

    matching = general_greedy(tree.to_graph())
    partner = matching.partner_of(0)
    if partner is None:
        return RootOutcome.unmatched()
    rank = int(np.searchsorted(children, partner)) + 1
    return RootOutcome(matched=True, cost=matching.cost_of(0), rank=rank)


def limit_rank_from(times: Sequence[float], thresholds: Sequence[float]) -> Rank:
    """``min{j : T_j <= W_j}`` (1-based) for given sequences, ``+inf`` if none."""
    hits = np.flatnonzero(np.asarray(times, dtype=float) <= np.asarray(thresholds, dtype=float))
    return int(hits[0]) + 1 if hits.size else math.inf


def sample_limit_rank(rng: RngStream, j_max: int = DEFAULT_J_MAX) -> Rank:
    """One draw of the limit rank ``R = min{j : T_j <= W_j}``.

    ``T_j`` are unit-rate Poisson arrivals (Exp(1) gaps) and ``W_j = U/(1-U)``
    are i.i.d. with cdf ``F_W``. Returns ``+inf`` when no ``j <= j_max`` hits.
    """
    if j_max < 1:
        raise ValueError(f"j_max must be at least 1, got {j_max}")
    elapsed = 0.0
    j = 0
    while j < j_max:
        size = min(RANK_BLOCK, j_max - j)
        times = elapsed + np.cumsum(exp_sample(rng, 1.0, size))
        thresholds = typical_quantile(rng.uniform(size))
        rank = limit_rank_from(times, thresholds)
        if rank != math.inf:
            return j + int(rank)
        elapsed = float(times[-1])
        j += size
    return math.inf


def sample_limit_ranks(rng: RngStream, reps: int, j_max: int = DEFAULT_J_MAX) -> np.ndarray:
    """``reps`` independent limit ranks as a float array (``inf`` on overflow)."""
    ranks = np.full(reps, np.inf)
    active = np.arange(reps)
    elapsed = np.zeros(reps)
    j = 0
    while active.size and j < j_max:
        j += 1
        elapsed = elapsed + exp_sample(rng, 1.0, active.size)
        thresholds = typical_quantile(rng.uniform(active.size))
        hit = elapsed <= thresholds
        ranks[active[hit]] = j
        active = active[~hit]
        elapsed = elapsed[~hit]
    if active.size:
        logger.warning(f"{active.size} of {reps} limit ranks exceeded j_max={j_max}")
    return ranks


@dataclass(frozen=True)
class RankReferenceRow:
    """Reference values for rank ``r``.

    ``tail_product`` is ``P(R > r) = E[prod_{j<=r} F_W(T_j)]`` by Monte Carlo,
    ``tail_display`` is ``E[1/(1+T_r)]`` by quadrature; ``at_least`` is
    ``P(R >= r) = P(R > r-1)``.
    """

    r: int
    at_least: float
    at_least_se: float
    tail_product: float
    tail_product_se: float
    tail_display: float

    @property
    def discrepancy(self) -> float:
        return self.tail_display - self.tail_product


@dataclass(frozen=True)
class RankReference:
    p_one: float
    reps: int
    rows: List[RankReferenceRow]


def _display_tail(r: int) -> float:
    """``E[1/(1+T_r)]`` with ``T_r ~ Gamma(r, 1)``."""
    density = stats.gamma(r).pdf
    value, _ = integrate.quad(lambda t: density(t) / (1.0 + t), 0.0, math.inf, epsabs=1e-12)
    return float(value)


def rank_reference(
    r_max: int, rng: RngStream, reps: int = 10_000_000, chunk: int = 100_000
) -> RankReference:
    """Table of ``P(R = 1)`` (quadrature) and ``P(R >= r)``, ``r <= r_max``."""
    if r_max < 1:
        raise ValueError(f"r_max must be at least 1, got {r_max}")
    totals = np.zeros(r_max)
    squares = np.zeros(r_max)
    done = 0
    while done < reps:
        size = min(chunk, reps - done)
        times = np.cumsum(exp_sample(rng, 1.0, (size, r_max)), axis=1)
        products = np.cumprod(times / (1.0 + times), axis=1)
        totals += products.sum(axis=0)
        squares += (products ** 2).sum(axis=0)
        done += size
    tail = totals / reps
    tail_se = np.sqrt(np.maximum(squares / reps - tail ** 2, 0.0) / reps)

    rows = []
    for r in range(1, r_max + 1):
        at_least = 1.0 if r == 1 else float(tail[r - 2])
        at_least_se = 0.0 if r == 1 else float(tail_se[r - 2])
        rows.append(
            RankReferenceRow(
                r=r,
                at_least=at_least,
                at_least_se=at_least_se,
                tail_product=float(tail[r - 1]),
                tail_product_se=float(tail_se[r - 1]),
                tail_display=_display_tail(r),
            )
        )
    return RankReference(p_one=rank_one_probability(), reps=reps, rows=rows)
