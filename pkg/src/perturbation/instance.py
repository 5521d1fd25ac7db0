"""Coupled epsilon-perturbations of the edge costs."""

from dataclasses import dataclass
from typing import Union

import numpy as np

from src.core.graph import DEFAULT_MAX_FULL_GRAPH_N, GraphFamily, WeightedGraph, make_graph
from src.stats.streams import RngStream, exp_sample


@dataclass(frozen=True, eq=False)
class PerturbationInstance:
    """Base costs, replacement costs and update uniforms, aligned with the edge indexing.

    One instance defines ``omega_eps`` for every ``eps``: edge ``e`` is resampled
    iff ``U(e) <= eps``, so the resampled set grows with ``eps``.
    """

    graph: WeightedGraph
    base: np.ndarray
    replacement: np.ndarray
    uniforms: np.ndarray

    @property
    def n(self) -> int:
        return self.graph.n

    def base_graph(self) -> WeightedGraph:
        return self.graph.with_costs(self.base)

    def perturbed_graph(self, eps: float) -> WeightedGraph:
        return self.graph.with_costs(perturbed_costs(self, eps))


def make_instance(
    n: int,
    rng: RngStream,
    family: Union[GraphFamily, str] = GraphFamily.BIPARTITE,
    max_full_graph_n: int = DEFAULT_MAX_FULL_GRAPH_N,
) -> PerturbationInstance:
    """Draw ``omega, omega' ~ Exp(1)`` and ``U`` uniform on (0, 1], i.i.d. per edge.

    Raises:
        BudgetExceededError: if ``n`` exceeds the full-graph memory budget.
    """
    graph = make_graph(family, n, max_full_graph_n=max_full_graph_n)
    size = graph.num_edges
    base = exp_sample(rng, 1.0, size)
    replacement = exp_sample(rng, 1.0, size)
    # (0, 1] so that eps = 0 never and eps = 1 always resamples
    uniforms = 1.0 - rng.uniform(size)
    return PerturbationInstance(graph=graph, base=base, replacement=replacement, uniforms=uniforms)


def perturbed_costs(instance: PerturbationInstance, eps: float) -> np.ndarray:
    """``omega_eps(e) = omega(e)`` if ``U(e) > eps``, else ``omega'(e)``.

    Raises:
        ValueError: if ``eps`` is outside [0, 1].
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    return np.where(instance.uniforms <= eps, instance.replacement, instance.base)
