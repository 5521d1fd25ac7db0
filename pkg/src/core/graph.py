"""
Finite weighted graphs with deterministic edge indexing.

Vertices are integers ``0 .. V-1``. For the bipartite family ``K_{n,n}`` the
left vertices are ``0 .. n-1`` and the right vertices ``n .. 2n-1``; edge
``(i, j')`` has index ``i * n + j`` (row-major). For the complete family ``K_n``
edges are the pairs ``i < j`` in lexicographic order. Explicit graphs keep the
caller's vertex labels and edge order.
"""

import logging
from enum import Enum
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from src.core.errors import BudgetExceededError, GraphError
from src.stats.streams import RngStream, exp_sample

logger = logging.getLogger(__name__)

DEFAULT_MAX_FULL_GRAPH_N = 4096


class GraphFamily(Enum):
    """Graph families supported by the lab."""
    BIPARTITE = "bipartite"
    COMPLETE = "complete"
    EXPLICIT = "explicit"


class CostScale(Enum):
    """Cost scale: unit-mean exponentials, or the typical scale (mean n)."""
    UNIT = "unit"
    MEAN_N = "mean-n"


class WeightedGraph:
    """Graph skeleton plus an optional cost per edge.

    Instances are treated as immutable; :meth:`with_costs` returns a new graph
    that shares the skeleton arrays and the incidence index.
    """

    def __init__(
        self,
        family: GraphFamily,
        n: int,
        num_vertices: int,
        tails: np.ndarray,
        heads: np.ndarray,
        costs: Optional[np.ndarray] = None,
        labels: Optional[Tuple[Hashable, ...]] = None,
        _incidence: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    ):
        self.family = family
        self.n = n
        self.num_vertices = num_vertices
        self.tails = tails
        self.heads = heads
        self.costs = costs
        self.labels = labels
        self._incidence = _incidence
        self._edge_lookup: Optional[Dict[Tuple[int, int], int]] = None

    @property
    def num_edges(self) -> int:
        return int(self.tails.size)

    @property
    def has_costs(self) -> bool:
        return self.costs is not None

    def require_costs(self) -> np.ndarray:
        if self.costs is None:
            raise GraphError("Edge costs are unset; call sample_costs or with_costs first")
        return self.costs

    def with_costs(self, costs: Sequence[float]) -> "WeightedGraph":
        """Attach costs (positive, finite, one per edge) to a copy of the skeleton."""
        values = np.asarray(costs, dtype=float).ravel()
        if values.size != self.num_edges:
            raise GraphError(f"Expected {self.num_edges} costs, got {values.size}")
        if values.size and not (np.all(np.isfinite(values)) and np.all(values > 0)):
            raise GraphError("Edge costs must be finite and strictly positive")
        if values.size > 1 and np.unique(values).size != values.size:
            logger.warning("Tied edge costs; ties are broken by lower edge index")
        return WeightedGraph(
            self.family,
            self.n,
            self.num_vertices,
            self.tails,
            self.heads,
            costs=values,
            labels=self.labels,
            _incidence=self.incidence(),
        )

    def incidence(self) -> Tuple[np.ndarray, np.ndarray]:
        """CSR incidence index ``(offsets, edge_ids)``.

        The edges at vertex ``v`` are ``edge_ids[offsets[v]:offsets[v + 1]]`` in
        increasing edge-index order.
        """
        if self._incidence is None:
            owners = np.concatenate([self.tails, self.heads])
            edge_ids = np.concatenate([np.arange(self.num_edges)] * 2)
            order = np.argsort(owners, kind="stable")
            degrees = np.bincount(owners, minlength=self.num_vertices)
            offsets = np.zeros(self.num_vertices + 1, dtype=np.int64)
            np.cumsum(degrees, out=offsets[1:])
            self._incidence = (offsets, edge_ids[order].astype(np.int64))
        return self._incidence

    def incident_edges(self, v: int) -> np.ndarray:
        self.check_vertex(v)
        offsets, edge_ids = self.incidence()
        return edge_ids[offsets[v]:offsets[v + 1]]

    def degrees(self) -> np.ndarray:
        offsets, _ = self.incidence()
        return np.diff(offsets)

    def other_end(self, edge: int, v: int) -> int:
        u, w = int(self.tails[edge]), int(self.heads[edge])
        return w if u == v else u

    def check_vertex(self, v: int) -> None:
        if not 0 <= int(v) < self.num_vertices:
            raise GraphError(f"Vertex {v} is not in the graph (0..{self.num_vertices - 1})")

    def edge_index(self, u: int, v: int) -> int:
        """Index of the edge joining ``u`` and ``v`` (either orientation)."""
        self.check_vertex(u)
        self.check_vertex(v)
        a, b = min(u, v), max(u, v)
        if self.family is GraphFamily.BIPARTITE:
            if a < self.n <= b:
                return a * self.n + (b - self.n)
        elif self.family is GraphFamily.COMPLETE:
            if a != b:
                return a * (2 * self.n - a - 1) // 2 + (b - a - 1)
        else:
            if self._edge_lookup is None:
                self._edge_lookup = {
                    (min(t, h), max(t, h)): e
                    for e, (t, h) in enumerate(zip(self.tails.tolist(), self.heads.tolist()))
                }
            if (a, b) in self._edge_lookup:
                return self._edge_lookup[(a, b)]
        raise GraphError(f"No edge between {self.vertex_label(u)} and {self.vertex_label(v)}")

    def vertex_label(self, v: int) -> str:
        if self.family is GraphFamily.BIPARTITE:
            return f"v{v + 1}" if v < self.n else f"v{v - self.n + 1}'"
        if self.family is GraphFamily.COMPLETE:
            return f"v{v + 1}"
        assert self.labels is not None
        return str(self.labels[v])

    def vertex_of(self, label: Hashable) -> int:
        """Vertex id of an explicit-graph label."""
        if self.labels is None:
            raise GraphError("Only explicit graphs carry labels")
        try:
            return self.labels.index(label)
        except ValueError:
            raise GraphError(f"Unknown vertex label {label!r}") from None

    def edge_subgraph(self, edges: np.ndarray) -> "WeightedGraph":
        """Explicit graph on the given edges; labels are the original vertex ids."""
        edges = np.asarray(edges, dtype=np.int64)
        vertices = np.unique(np.concatenate([self.tails[edges], self.heads[edges]]))
        tails = np.searchsorted(vertices, self.tails[edges])
        heads = np.searchsorted(vertices, self.heads[edges])
        costs = None if self.costs is None else self.costs[edges].copy()
        return WeightedGraph(
            GraphFamily.EXPLICIT,
            int(vertices.size),
            int(vertices.size),
            tails.astype(np.int64),
            heads.astype(np.int64),
            costs=costs,
            labels=tuple(int(v) for v in vertices),
        )

    def to_networkx(self) -> nx.Graph:
        """networkx view: nodes are vertex ids, edges carry ``index`` and ``weight``."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.num_vertices))
        for e, (u, v) in enumerate(zip(self.tails.tolist(), self.heads.tolist())):
            attributes: Dict[str, Any] = {"index": e}
            if self.costs is not None:
                attributes["weight"] = float(self.costs[e])
            graph.add_edge(u, v, **attributes)
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph, weight: str = "weight") -> "WeightedGraph":
        """Explicit graph from a networkx graph, keeping its edge order."""
        edges = list(graph.edges(data=True))
        skeleton = make_graph(GraphFamily.EXPLICIT, [(u, v) for u, v, _ in edges])
        if edges and all(weight in data for _, _, data in edges):
            return skeleton.with_costs([data[weight] for _, _, data in edges])
        return skeleton

    def __repr__(self) -> str:
        return (
            f"WeightedGraph(family={self.family.value}, vertices={self.num_vertices}, "
            f"edges={self.num_edges}, costs={'set' if self.has_costs else 'unset'})"
        )


def _explicit_graph(edge_list: Iterable[Tuple[Hashable, Hashable]]) -> WeightedGraph:
    labels: List[Hashable] = []
    index: Dict[Hashable, int] = {}
    tails: List[int] = []
    heads: List[int] = []
    seen = set()
    for pair in edge_list:
        if len(pair) != 2:
            raise GraphError(f"Edges must be pairs, got {pair!r}")
        a, b = pair
        if a == b:
            raise GraphError(f"Self-loop at {a!r} is not allowed")
        ids = []
        for label in (a, b):
            if label not in index:
                index[label] = len(labels)
                labels.append(label)
            ids.append(index[label])
        key = (min(ids), max(ids))
        if key in seen:
            raise GraphError(f"Duplicate edge ({a!r}, {b!r})")
        seen.add(key)
        tails.append(ids[0])
        heads.append(ids[1])
    if not tails:
        raise GraphError("An explicit graph needs at least one edge")
    return WeightedGraph(
        GraphFamily.EXPLICIT,
        len(labels),
        len(labels),
        np.asarray(tails, dtype=np.int64),
        np.asarray(heads, dtype=np.int64),
        labels=tuple(labels),
    )


def make_graph(
    kind: Union[GraphFamily, str],
    size_or_edges: Union[int, Iterable[Tuple[Hashable, Hashable]]],
    max_full_graph_n: int = DEFAULT_MAX_FULL_GRAPH_N,
) -> WeightedGraph:
    """Build a graph skeleton with costs unset.

    Args:
        kind: graph family (``"bipartite"``, ``"complete"`` or ``"explicit"``)
        size_or_edges: ``n`` for the complete families, an edge list otherwise
        max_full_graph_n: memory budget on ``n`` for the complete families

    Returns:
        WeightedGraph without costs

    Raises:
        GraphError: size 0 or duplicate edges
        BudgetExceededError: ``n`` above the memory budget
    """
    family = GraphFamily(kind)
    if family is GraphFamily.EXPLICIT:
        return _explicit_graph(size_or_edges)  # type: ignore[arg-type]

    n = int(size_or_edges)  # type: ignore[arg-type]
    if n < 1:
        raise GraphError(f"Graph size must be at least 1, got {n}")
    if n > max_full_graph_n:
        raise BudgetExceededError(
            f"Full {family.value} graph with n={n} exceeds the memory budget "
            f"(n <= {max_full_graph_n})"
        )

    if family is GraphFamily.BIPARTITE:
        left = np.arange(n, dtype=np.int64)
        tails = np.repeat(left, n)
        heads = n + np.tile(left, n)
        return WeightedGraph(family, n, 2 * n, tails, heads)

    tails, heads = np.triu_indices(n, k=1)
    return WeightedGraph(family, n, n, tails.astype(np.int64), heads.astype(np.int64))


def sample_costs(
    graph: WeightedGraph,
    rng: RngStream,
    scale: Union[CostScale, str] = CostScale.UNIT,
) -> WeightedGraph:
    """Assign i.i.d. exponential costs (mean 1, or mean ``n`` on the typical scale)."""
    factor = float(graph.n) if CostScale(scale) is CostScale.MEAN_N else 1.0
    costs = exp_sample(rng, 1.0, size=graph.num_edges) * factor
    return graph.with_costs(costs)

