"""Brute-force stable-matching oracle for small graphs."""

import logging
from typing import List

import networkx as nx

from src.core.errors import BudgetExceededError
from src.core.graph import GraphFamily, WeightedGraph
from src.core.matching import Matching, is_stable

logger = logging.getLogger(__name__)

MAX_ORACLE_N = 8
MAX_ORACLE_EDGES = 40


def _check_size(graph: WeightedGraph) -> None:
    if graph.family is GraphFamily.EXPLICIT:
        too_large = graph.num_edges > MAX_ORACLE_EDGES
    else:
        too_large = graph.n > MAX_ORACLE_N
    if too_large:
        raise BudgetExceededError(
            f"Graph too large for exhaustive enumeration: {graph!r} "
            f"(n <= {MAX_ORACLE_N}, explicit edges <= {MAX_ORACLE_EDGES})"
        )


def maximal_matchings(graph: WeightedGraph) -> List[Matching]:
    """All maximal matchings, as the maximal cliques of the edge-compatibility graph.

    Two edges are compatible when they share no endpoint, so a clique is a
    matching and a maximal clique is a maximal matching.
    """
    _check_size(graph)
    if graph.num_edges == 0:
        return [Matching(graph, [])]
    compatible = nx.Graph()
    compatible.add_nodes_from(range(graph.num_edges))
    ends = list(zip(graph.tails.tolist(), graph.heads.tolist()))
    for e, (a, b) in enumerate(ends):
        for f in range(e + 1, graph.num_edges):
            c, d = ends[f]
            if len({a, b, c, d}) == 4:
                compatible.add_edge(e, f)
    return [Matching(graph, sorted(clique)) for clique in nx.find_cliques(compatible)]


def enumerate_stable_oracle(graph: WeightedGraph) -> List[Matching]:
    """Every maximal matching that passes :func:`is_stable`.

    Raises:
        BudgetExceededError: bipartite/complete ``n > 8`` or an explicit graph
            with more than 40 edges.
    """
    candidates = maximal_matchings(graph)
    stable = [m for m in candidates if is_stable(graph, m).stable]
    logger.debug(f"Oracle: {len(stable)} stable among {len(candidates)} maximal matchings")
    return stable
