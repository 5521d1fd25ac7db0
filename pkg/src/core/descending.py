"""Descending subgraphs: union of the strictly-decreasing-cost paths from a vertex."""

import heapq
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from src.core.graph import GraphFamily, WeightedGraph


@dataclass(frozen=True, eq=False)
class DescendingSubgraph:
    """``D_v(G, s)``: every path from ``root`` with strictly decreasing costs, all below ``ceiling``."""

    root: int
    ceiling: float
    vertices: np.ndarray
    edges: np.ndarray
    costs: np.ndarray
    graph: WeightedGraph = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.vertices.size)

    def issubgraph(self, other: "DescendingSubgraph") -> bool:
        return set(self.vertices.tolist()) <= set(other.vertices.tolist()) and set(
            self.edges.tolist()
        ) <= set(other.edges.tolist())

    def to_graph(self) -> WeightedGraph:
        """Explicit costed graph on the subgraph; labels are the original vertex ids."""
        if self.edges.size == 0:
            return WeightedGraph(
                GraphFamily.EXPLICIT,
                1,
                1,
                np.empty(0, dtype=np.int64),
                np.empty(0, dtype=np.int64),
                costs=np.empty(0),
                labels=(self.root,),
            )
        return self.graph.edge_subgraph(self.edges)


def descending_subgraph(graph: WeightedGraph, v: int, s: float) -> DescendingSubgraph:
    """Extract ``D_v(G, s)``.

    From ``v`` every incident edge with cost < ``s`` is taken; from a vertex
    entered through an edge of cost ``t`` every incident edge with cost < ``t``.
    Vertices are expanded in decreasing order of their largest entry cost, so
    each vertex is expanded once with its final label.

    Raises:
        GraphError: if ``v`` is not a vertex or the costs are unset.
        ValueError: if ``s <= 0``.
    """
    graph.check_vertex(v)
    if not s > 0:
        raise ValueError(f"Ceiling must be positive, got {s}")
    costs = graph.require_costs()
    offsets, edge_ids = graph.incidence()
    tails, heads = graph.tails, graph.heads

    label: Dict[int, float] = {int(v): float(s)}
    heap: List[Tuple[float, int]] = [(-float(s), int(v))]
    included = set()
    while heap:
        negative, w = heapq.heappop(heap)
        t = -negative
        if t < label[w]:
            continue
        incident = edge_ids[offsets[w]:offsets[w + 1]]
        below = incident[costs[incident] < t]
        for e, c in zip(below.tolist(), costs[below].tolist()):
            included.add(e)
            x = int(heads[e]) if int(tails[e]) == w else int(tails[e])
            if c > label.get(x, -np.inf):
                label[x] = c
                heapq.heappush(heap, (-c, x))

    edges = np.array(sorted(included), dtype=np.int64)
    return DescendingSubgraph(
        root=int(v),
        ceiling=float(s),
        vertices=np.array(sorted(label), dtype=np.int64),
        edges=edges,
        costs=costs[edges],
        graph=graph,
    )
