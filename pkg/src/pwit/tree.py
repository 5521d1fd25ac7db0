"""
Truncated Poisson weighted infinite tree.

Only the part of the tree reachable from the root by descending paths below
the ceiling ``s`` is sampled: the root's child edges are the arrivals of a
unit-rate Poisson process on ``[0, s)`` and a node entered through an edge of
cost ``t`` gets the arrivals on ``[0, t)``. Arrivals on ``[0, t)`` are drawn as
a Poisson(t) count of sorted uniform points, one whole generation at a time.
"""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from src.core.graph import GraphFamily, WeightedGraph
from src.stats.streams import RngStream

logger = logging.getLogger(__name__)

DEFAULT_NODE_CAP = 10_000_000


@dataclass(frozen=True, eq=False)
class PwitTree:
    """Finite truncation ``D_0(T, s)`` in breadth-first order.

    Node 0 is the root (``parent = -1``, ``cost = nan``); the children of a node
    are contiguous and sorted by increasing edge cost.
    """

    parent: np.ndarray
    cost: np.ndarray
    depth: np.ndarray
    ceiling: float
    truncated: bool = False

    @property
    def size(self) -> int:
        return int(self.parent.size)

    def child_offsets(self) -> np.ndarray:
        """Children of ``v`` are nodes ``offsets[v] .. offsets[v + 1] - 1``.

        Valid because parents are nondecreasing in breadth-first order.
        """
        return np.searchsorted(self.parent[1:], np.arange(self.size + 1)) + 1

    def children(self, v: int) -> np.ndarray:
        """Child node ids of ``v`` in increasing edge-cost order."""
        offsets = self.child_offsets()
        return np.arange(offsets[v], offsets[v + 1], dtype=np.int64)

    def depth_counts(self) -> np.ndarray:
        return np.bincount(self.depth)

    def to_graph(self) -> WeightedGraph:
        """Explicit costed graph; edge ``i - 1`` joins node ``i`` to its parent."""
        nodes = np.arange(1, self.size, dtype=np.int64)
        return WeightedGraph(
            GraphFamily.EXPLICIT,
            self.size,
            self.size,
            self.parent[1:].astype(np.int64),
            nodes,
            costs=self.cost[1:].copy(),
            labels=tuple(range(self.size)),
        )


def sample_descending_tree(s: float, node_cap: int, rng: RngStream) -> PwitTree:
    """Sample the descending truncation of the PWIT below ceiling ``s``.

    The expected size is ``e^s`` and the expected number of depth-``k`` nodes
    is ``s^k / k!``. If adding a generation would exceed ``node_cap`` nodes,
    sampling stops and the tree is flagged ``truncated``.
    """
    if not s > 0:
        raise ValueError(f"Ceiling must be positive, got {s}")
    if node_cap < 1:
        raise ValueError(f"node_cap must be at least 1, got {node_cap}")

    parents: List[np.ndarray] = [np.array([-1], dtype=np.int64)]
    costs: List[np.ndarray] = [np.array([np.nan])]
    depths: List[np.ndarray] = [np.array([0], dtype=np.int64)]
    frontier = np.array([0], dtype=np.int64)
    ceilings = np.array([float(s)])
    total = 1
    truncated = False
    level = 0
    while frontier.size:
        counts = rng.poisson(ceilings)
        born = int(counts.sum())
        if born == 0:
            break
        if total + born > node_cap:
            truncated = True
            logger.warning(f"PWIT sample at s={s} hit node cap {node_cap}; flagged as truncated")
            break
        parent = np.repeat(frontier, counts)
        cost = rng.uniform(born) * np.repeat(ceilings, counts)
        order = np.lexsort((cost, parent))
        level += 1
        parents.append(parent[order])
        costs.append(cost[order])
        depths.append(np.full(born, level, dtype=np.int64))
        frontier = np.arange(total, total + born, dtype=np.int64)
        ceilings = cost[order]
        total += born

    return PwitTree(
        parent=np.concatenate(parents),
        cost=np.concatenate(costs),
        depth=np.concatenate(depths),
        ceiling=float(s),
        truncated=truncated,
    )


def dump_tree(tree: PwitTree) -> str:
    """Preorder dump, one node per line: ``parent_index,edge_cost`` (indices in preorder)."""
    offsets = tree.child_offsets()
    preorder_index = {}
    lines = []
    stack = [0]
    while stack:
        v = stack.pop()
        preorder_index[v] = len(lines)
        if v == 0:
            lines.append("-1,")
        else:
            lines.append(f"{preorder_index[int(tree.parent[v])]},{tree.cost[v]:.17g}")
        stack.extend(range(offsets[v + 1] - 1, offsets[v] - 1, -1))
    return "\n".join(lines)
