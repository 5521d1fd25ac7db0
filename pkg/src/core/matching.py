"""
Stable matchings of weighted graphs.

A matching is stable when no non-matching edge is cheaper than the matching
costs of both of its endpoints (unmatched vertices have matching cost +inf).
With distinct costs the stable matching is unique; it is produced by the
greedy algorithm (repeatedly take the globally cheapest edge between two
unmatched vertices) and, on arbitrary finite graphs, by rounds of matching
mutual favourites.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from src.core.errors import GraphError
from src.core.graph import GraphFamily, WeightedGraph
from src.core.profile import CostProfile

logger = logging.getLogger(__name__)

UNMATCHED = -1
SWEEP_CHUNK = 1 << 18


class Matching:
    """Vertex-disjoint edge set with partner and cost lookup.

    ``partner[v]`` is the matched vertex or ``UNMATCHED``; ``cost[v]`` is the
    cost of ``v``'s matching edge or ``+inf`` when unmatched.
    """

    def __init__(self, graph: WeightedGraph, edges: Iterable[int]):
        self.graph = graph
        self.edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                                dtype=np.int64)
        self.partner = np.full(graph.num_vertices, UNMATCHED, dtype=np.int64)
        self.cost = np.full(graph.num_vertices, np.inf)
        if self.edges.size == 0:
            return
        if self.edges.min() < 0 or self.edges.max() >= graph.num_edges:
            raise GraphError("Matching refers to an edge index outside the graph")
        u = graph.tails[self.edges]
        v = graph.heads[self.edges]
        endpoints = np.concatenate([u, v])
        if np.unique(endpoints).size != endpoints.size:
            raise GraphError("Matching edges share a vertex")
        self.partner[u] = v
        self.partner[v] = u
        edge_costs = graph.costs[self.edges] if graph.has_costs else np.full(self.edges.size, np.nan)
        self.cost[u] = edge_costs
        self.cost[v] = edge_costs

    @classmethod
    def from_pairs(cls, graph: WeightedGraph, pairs: Iterable[Tuple[int, int]]) -> "Matching":
        """Matching from vertex pairs; every pair must be an edge of ``graph``."""
        return cls(graph, [graph.edge_index(u, v) for u, v in pairs])

    @property
    def size(self) -> int:
        return int(self.edges.size)

    def partner_of(self, v: int) -> Optional[int]:
        p = int(self.partner[v])
        return None if p == UNMATCHED else p

    def cost_of(self, v: int) -> float:
        return float(self.cost[v])

    def is_matched(self, v: int) -> bool:
        return bool(self.partner[v] != UNMATCHED)

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges.tolist())

    @property
    def total_cost(self) -> float:
        return float(self.graph.require_costs()[self.edges].sum())

    def pairs(self) -> List[Tuple[int, int]]:
        return [
            (int(self.graph.tails[e]), int(self.graph.heads[e])) for e in self.edges.tolist()
        ]

    def labelled_pairs(self) -> List[Tuple[str, str]]:
        label = self.graph.vertex_label
        return sorted((label(u), label(v)) for u, v in self.pairs())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self.edge_set == other.edge_set

    def __repr__(self) -> str:
        return f"Matching(size={self.size}, pairs={self.labelled_pairs()})"


class GreedyResult(NamedTuple):
    """Greedy output: the matching, edges in selection order, and the cost profile."""
    matching: Matching
    order: np.ndarray
    profile: CostProfile


@dataclass(frozen=True)
class UnstablePairReport:
    """An unstable pair (lowest edge index) or nothing when the matching is stable."""

    edge_index: Optional[int] = None
    pair: Optional[Tuple[int, int]] = None
    edge_cost: Optional[float] = None
    cost_u: Optional[float] = None
    cost_v: Optional[float] = None

    @property
    def stable(self) -> bool:
        return self.pair is None


@dataclass(frozen=True, eq=False)
class RankProfile:
    """Rank of the matching edge among each matched vertex's incident edges (1 = cheapest)."""

    vertices: np.ndarray
    ranks: np.ndarray

    def fraction(self, rank: int = 1) -> float:
        if self.ranks.size == 0:
            return float("nan")
        return float(np.mean(self.ranks == rank))

    def as_dict(self) -> dict:
        return dict(zip(self.vertices.tolist(), self.ranks.tolist()))


def _matching_limit(graph: WeightedGraph, removed: int = 0) -> Optional[int]:
    """Size of a maximal matching on the complete families, ``None`` if unknown."""
    if graph.family is GraphFamily.BIPARTITE:
        return graph.n - removed
    if graph.family is GraphFamily.COMPLETE:
        return (graph.n - removed) // 2
    return None


def _greedy_sweep(
    graph: WeightedGraph,
    edge_mask: Optional[np.ndarray] = None,
    limit: Optional[int] = None,
) -> np.ndarray:
    """Scan edges in increasing cost order, accepting an edge iff both ends are free.

    Edges are sorted once (stable, so equal costs go by lower index); the scan
    stops as soon as ``limit`` edges are selected.
    """
    costs = graph.require_costs()
    if limit == 0:
        return np.empty(0, dtype=np.int64)
    order = np.argsort(costs, kind="stable")
    if edge_mask is not None:
        order = order[edge_mask[order]]

    matched = bytearray(graph.num_vertices)
    selected: List[int] = []
    for start in range(0, order.size, SWEEP_CHUNK):
        chunk = order[start:start + SWEEP_CHUNK]
        tails = graph.tails[chunk].tolist()
        heads = graph.heads[chunk].tolist()
        for e, u, v in zip(chunk.tolist(), tails, heads):
            if matched[u] or matched[v]:
                continue
            matched[u] = matched[v] = 1
            selected.append(e)
            if len(selected) == limit:
                return np.asarray(selected, dtype=np.int64)
    return np.asarray(selected, dtype=np.int64)


def greedy_stable_matching(graph: WeightedGraph) -> GreedyResult:
    """Greedy stable matching of a costed graph.

    Returns:
        GreedyResult(matching, selection order, cost profile). The profile is
        the selection-order costs, which are nondecreasing.

    Raises:
        GraphError: if the costs are unset.
    """
    order = _greedy_sweep(graph, limit=_matching_limit(graph))
    profile = CostProfile(graph.require_costs()[order])
    return GreedyResult(Matching(graph, order), order, profile)


def step_and_erase_matching(graph: WeightedGraph) -> Matching:
    """Literal greedy: pick the cheapest remaining edge, erase all edges at its ends, repeat."""
    costs = graph.require_costs()
    remaining = costs.copy()
    selected: List[int] = []
    while np.isfinite(remaining).any():
        e = int(np.argmin(remaining))
        selected.append(e)
        for v in (int(graph.tails[e]), int(graph.heads[e])):
            remaining[graph.incident_edges(v)] = np.inf
    return Matching(graph, selected)


def general_greedy(graph: WeightedGraph) -> Matching:
    """Stable matching of any finite graph by rounds of mutual favourites.

    Each round, every vertex with an unmatched neighbour points at its cheapest
    edge to an unmatched neighbour; all mutually chosen edges are matched.
    """
    costs = graph.require_costs()
    offsets, edge_ids = graph.incidence()
    owners = np.repeat(np.arange(graph.num_vertices), np.diff(offsets))
    # per-vertex preference lists: by cost, then by edge index
    order = np.lexsort((edge_ids, costs[edge_ids], owners))
    preferences = edge_ids[order].tolist()
    tails = graph.tails.tolist()
    heads = graph.heads.tolist()
    ends = offsets[1:].tolist()
    pointer = offsets[:-1].tolist()

    matched = bytearray(graph.num_vertices)
    active = [v for v in range(graph.num_vertices) if pointer[v] < ends[v]]
    selected: List[int] = []
    rounds = 0
    while active:
        rounds += 1
        favourite = {}
        for v in active:
            p = pointer[v]
            while p < ends[v]:
                e = preferences[p]
                w = heads[e] if tails[e] == v else tails[e]
                if not matched[w]:
                    break
                p += 1
            pointer[v] = p
            if p < ends[v]:
                favourite[v] = preferences[p]

        for v, e in favourite.items():
            w = heads[e] if tails[e] == v else tails[e]
            if v < w and favourite.get(w) == e:
                matched[v] = matched[w] = 1
                selected.append(e)
        active = [v for v in favourite if not matched[v]]

    logger.debug(f"general_greedy matched {len(selected)} edges in {rounds} rounds")
    return Matching(graph, selected)


def _align(graph: WeightedGraph, matching: Matching) -> Matching:
    if matching.graph is graph:
        return matching
    if matching.graph.num_vertices != graph.num_vertices:
        raise GraphError("Matching and graph have different vertex sets")
    return Matching.from_pairs(graph, matching.pairs())


def is_stable(graph: WeightedGraph, matching: Matching) -> UnstablePairReport:
    """Check stability; report the violating pair with the lowest edge index.

    Raises:
        GraphError: if a matching edge is absent from ``graph``.
    """
    matching = _align(graph, matching)
    costs = graph.require_costs()
    bound = np.minimum(matching.cost[graph.tails], matching.cost[graph.heads])
    violating = costs < bound
    violating[matching.edges] = False
    hits = np.flatnonzero(violating)
    if hits.size == 0:
        return UnstablePairReport()
    e = int(hits[0])
    u, v = int(graph.tails[e]), int(graph.heads[e])
    return UnstablePairReport(
        edge_index=e,
        pair=(u, v),
        edge_cost=float(costs[e]),
        cost_u=float(matching.cost[u]),
        cost_v=float(matching.cost[v]),
    )


def matching_with_vertex_removed(graph: WeightedGraph, u: int) -> Tuple[Matching, CostProfile]:
    """Greedy stable matching after deleting ``u`` and its edges.

    The matching is expressed on the original vertex ids (``u`` unmatched).

    Raises:
        GraphError: if ``u`` is not a vertex of ``graph``.
    """
    graph.check_vertex(u)
    keep = (graph.tails != u) & (graph.heads != u)
    order = _greedy_sweep(graph, edge_mask=keep, limit=_matching_limit(graph, removed=1))
    return Matching(graph, order), CostProfile(graph.require_costs()[order])


def rank_profile(graph: WeightedGraph, matching: Matching) -> RankProfile:
    """Position of each matched vertex's edge in its increasing incident-cost order."""
    matching = _align(graph, matching)
    costs = graph.require_costs()
    offsets, edge_ids = graph.incidence()
    owners = np.repeat(np.arange(graph.num_vertices), np.diff(offsets))

    matched_edge = np.full(graph.num_vertices, -1, dtype=np.int64)
    matched_edge[graph.tails[matching.edges]] = matching.edges
    matched_edge[graph.heads[matching.edges]] = matching.edges

    own_cost = matching.cost[owners]
    incident_cost = costs[edge_ids]
    cheaper = (incident_cost < own_cost) | (
        (incident_cost == own_cost) & (edge_ids < matched_edge[owners])
    )
    counts = np.bincount(owners[cheaper], minlength=graph.num_vertices)
    vertices = np.flatnonzero(matched_edge >= 0)
    return RankProfile(vertices=vertices, ranks=counts[vertices] + 1)


def dump_matching(graph: WeightedGraph, matching: Matching) -> str:
    """Debug dump, one edge per line: ``u,v,cost,in_matching``."""
    costs = graph.require_costs()
    chosen = np.zeros(graph.num_edges, dtype=bool)
    chosen[_align(graph, matching).edges] = True
    lines = [
        f"{graph.vertex_label(u)},{graph.vertex_label(v)},{c:.17g},{int(flag)}"
        for u, v, c, flag in zip(
            graph.tails.tolist(), graph.heads.tolist(), costs.tolist(), chosen.tolist()
        )
    ]
    return "\n".join(lines)
