"""Graph kinds for the exact cost representations."""

from dataclasses import dataclass

import numpy as np

from src.core.errors import GraphError
from src.core.graph import DEFAULT_MAX_FULL_GRAPH_N, GraphFamily, WeightedGraph, make_graph


@dataclass(frozen=True)
class GraphKind:
    """``K_{n,n}`` (bipartite) or ``K_n`` (complete, even ``n`` unless ``allow_odd``)."""

    family: GraphFamily
    n: int
    allow_odd: bool = False

    def __post_init__(self) -> None:
        if self.family is GraphFamily.EXPLICIT:
            raise GraphError("Cost representations exist only for bipartite and complete graphs")
        if self.n < 1:
            raise GraphError(f"n must be at least 1, got {self.n}")
        if self.family is GraphFamily.COMPLETE and self.n % 2 and not self.allow_odd:
            raise GraphError(
                f"Complete graph with odd n={self.n} leaves a vertex unmatched; "
                "pass allow_odd to accept it"
            )

    @classmethod
    def bipartite(cls, n: int) -> "GraphKind":
        return cls(GraphFamily.BIPARTITE, n)

    @classmethod
    def complete(cls, n: int, allow_odd: bool = False) -> "GraphKind":
        return cls(GraphFamily.COMPLETE, n, allow_odd)

    @property
    def is_bipartite(self) -> bool:
        return self.family is GraphFamily.BIPARTITE

    @property
    def matching_size(self) -> int:
        return self.n if self.is_bipartite else self.n // 2

    def profile_rates(self) -> np.ndarray:
        """Rates of the increments ``X_k = Y_k - Y_{k-1}``, k = 1..m.

        ``X_k`` is the minimum over the edges still available after ``k - 1``
        selections: ``(n-k+1)^2`` of them on ``K_{n,n}``, ``C(n-2k+2, 2)`` on ``K_n``.
        """
        k = np.arange(1, self.matching_size + 1, dtype=float)
        if self.is_bipartite:
            return (self.n - k + 1.0) ** 2
        free = self.n - 2.0 * k + 2.0
        return free * (free - 1.0) / 2.0

    def total_denominators(self) -> range:
        """Rates ``r_j`` of the independent terms ``Z_j`` in ``C = sum_j Z_j``."""
        m = self.matching_size
        if self.is_bipartite:
            return range(1, m + 1)
        if self.n % 2 == 0:
            return range(1, 2 * m, 2)
        return range(3, 2 * m + 2, 2)

    def total_rates(self) -> np.ndarray:
        rates = self.total_denominators()
        return np.arange(rates.start, rates.stop, rates.step, dtype=float)

    def make_graph(self, max_full_graph_n: int = DEFAULT_MAX_FULL_GRAPH_N) -> WeightedGraph:
        return make_graph(self.family, self.n, max_full_graph_n=max_full_graph_n)

    def __str__(self) -> str:
        return f"{self.family.value}({self.n})"
