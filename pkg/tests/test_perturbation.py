"""
Tests for coupled perturbations and the sensitivity experiments.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.core.errors import BudgetExceededError, EstimationError
from src.core.graph import make_graph
from src.core.matching import greedy_stable_matching, is_stable
from src.perturbation.experiments import (
    CorrReplicate,
    covariance_split,
    corr_experiment,
    corr_replicate,
    overlap_fraction,
    overlap_lower_bound,
    summarize_corr,
    tail_experiment,
    tail_vertex_sets,
)
from src.perturbation.instance import PerturbationInstance, make_instance, perturbed_costs
from src.stats.streams import derive_stream


class TestInstance:
    """Drawing instances and applying eps."""

    def setup_method(self):
        self.instance = make_instance(60, derive_stream(1, 0))

    def test_shapes(self):
        single = make_instance(1, derive_stream(1, 1))
        assert single.base.shape == single.replacement.shape == single.uniforms.shape == (1,)
        assert self.instance.n == 60
        assert self.instance.base.size == 3600

    def test_uniforms_in_half_open_interval(self):
        assert np.all(self.instance.uniforms > 0.0)
        assert np.all(self.instance.uniforms <= 1.0)

    def test_endpoints(self):
        assert np.array_equal(perturbed_costs(self.instance, 0.0), self.instance.base)
        assert np.array_equal(perturbed_costs(self.instance, 1.0), self.instance.replacement)
        with pytest.raises(ValueError):
            perturbed_costs(self.instance, 1.5)

    def test_single_edge_rule(self):
        graph = make_graph("bipartite", 1)
        instance = PerturbationInstance(
            graph=graph, base=np.array([0.8]), replacement=np.array([0.2]), uniforms=np.array([0.3])
        )
        assert perturbed_costs(instance, 0.5).tolist() == [0.2]
        assert perturbed_costs(instance, 0.25).tolist() == [0.8]

    def test_replaced_set_grows_with_eps(self):
        previous = np.zeros(self.instance.base.size, dtype=bool)
        for eps in (0.0, 0.1, 0.3, 0.7, 1.0):
            replaced = perturbed_costs(self.instance, eps) != self.instance.base
            assert np.all(replaced[previous])
            previous = replaced

    def test_resampled_fraction(self):
        fraction = float(np.mean(self.instance.uniforms <= 0.25))
        se = math.sqrt(0.25 * 0.75 / self.instance.uniforms.size)
        assert abs(fraction - 0.25) <= 3 * se

    def test_base_and_replacement_independent(self):
        r = np.corrcoef(self.instance.base, self.instance.replacement)[0, 1]
        assert abs(r) < 4 / math.sqrt(self.instance.base.size)

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            make_instance(50, derive_stream(0, 0), max_full_graph_n=10)


class TestOverlap:
    def test_eps_zero_is_identical(self):
        result = overlap_fraction(make_instance(80, derive_stream(2, 0)), 0.0)
        assert result.overlap == 1.0
        assert result.c0 == result.ceps
        assert result.partner_survival == 1.0

    def test_single_edge_always_overlaps(self):
        instance = make_instance(1, derive_stream(2, 1))
        for eps in (0.0, 0.5, 1.0):
            assert overlap_fraction(instance, eps).overlap == 1.0

    def test_shared_base(self):
        instance = make_instance(40, derive_stream(2, 2))
        first = overlap_fraction(instance, 0.2)
        again = overlap_fraction(instance, 0.2, base=first.base)
        assert again.overlap == first.overlap
        assert is_stable(instance.perturbed_graph(0.2), first.perturbed.matching).stable

    def test_lower_bound(self):
        assert overlap_lower_bound(0.0) == 1.0
        assert overlap_lower_bound(1.0) == -math.inf
        assert overlap_lower_bound(1e-4, 7.0) == pytest.approx(1 - 7 / math.log(1e4))

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32), eps=st.floats(0.0, 1.0))
    def test_overlap_in_unit_interval(self, seed, eps):
        result = overlap_fraction(make_instance(12, derive_stream(seed, 0)), eps)
        assert 0.0 <= result.overlap <= 1.0
        assert 0.0 <= result.partner_survival <= 1.0

    def test_mean_overlap_decreases(self):
        means = []
        for eps in (0.01, 0.1, 1.0):
            means.append(
                np.mean([overlap_fraction(make_instance(100, derive_stream(3, i)), eps).overlap
                         for i in range(20)])
            )
        assert means[0] > means[1] > means[2]


class TestTail:
    def test_k22_last_edge(self, k22):
        result = greedy_stable_matching(k22)
        tail = tail_vertex_sets(result.matching, result.order, 1)
        assert tail.edges.tolist() == [2]
        assert tail.costs.tolist() == [0.2]
        assert tail.vertex_set == frozenset({1, 2})
        assert tail.costs[0] == result.profile[2]

    def test_full_tail_covers_all_vertices(self, k22):
        result = greedy_stable_matching(k22)
        assert tail_vertex_sets(result.matching, result.order, 2).vertex_set == frozenset(range(4))
        with pytest.raises(ValueError):
            tail_vertex_sets(result.matching, result.order, 3)

    def test_degenerate_m_never_disjoint(self):
        summary = tail_experiment(6, 6, 0.5, 20, derive_stream(4, 0))
        assert summary.vertex_disjoint.value == 0.0

    def test_no_change_at_eps_zero(self):
        summary = tail_experiment(30, 2, 0.0, 10, derive_stream(4, 1))
        assert summary.no_survivor.value == 0.0
        assert summary.edge_disjoint.value == 0.0

    def test_edge_disjointness_contains_vertex_disjointness(self):
        summary = tail_experiment(50, 1, 0.5, 40, derive_stream(4, 2))
        for replicate in summary.replicates:
            assert replicate.edge_disjoint or not replicate.vertex_disjoint
        assert summary.edge_disjoint.value >= summary.vertex_disjoint.value


class TestCorrelation:
    def test_identical_at_eps_zero(self):
        estimate = corr_experiment(20, 0.0, 30, derive_stream(5, 0))
        assert estimate.correlation == 1.0
        assert estimate.ci == (1.0, 1.0)

    def test_too_few_replicates(self):
        with pytest.raises(EstimationError):
            corr_experiment(20, 0.5, 10, derive_stream(5, 1))

    def test_independent_at_eps_one(self):
        estimate = corr_experiment(15, 1.0, 200, derive_stream(5, 2))
        assert estimate.ci[0] <= 0.0 <= estimate.ci[1] or abs(estimate.correlation) < 0.25

    def test_covariance_split_adds_up(self):
        stream = derive_stream(5, 3)
        replicates = [corr_replicate(20, 0.3, stream, split_m=4) for _ in range(40)]
        split = covariance_split(replicates)
        assert split.parts_sum == pytest.approx(split.total, rel=1e-9, abs=1e-12)
        assert summarize_corr(replicates).size == 40

    def test_covariance_split_needs_parts(self):
        with pytest.raises(EstimationError):
            covariance_split([CorrReplicate(1.0, 2.0), CorrReplicate(2.0, 3.0)])
