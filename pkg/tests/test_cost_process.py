"""
Tests for the exact cost representations, their moments and limit laws.
"""

import math

import numpy as np
import pytest
import sympy as sp

from src.core.errors import GraphError
from src.core.graph import make_graph, sample_costs
from src.core.matching import greedy_stable_matching
from src.cost_process.kinds import GraphKind
from src.cost_process.limits import (
    GUMBEL_LOCATION,
    finite_mgf,
    gumbel_cdf,
    limit_laws,
    limit_mgf_bipartite,
    limit_mgf_complete,
    typical_cdf,
    typical_density,
    typical_quantile,
)
from src.cost_process.moments import (
    bulk_tail_moments,
    exact_total_moments,
    exact_total_moments_rational,
    harmonic,
    order_stat_moments,
    partial_sum_moments,
)
from src.cost_process.samplers import (
    bulk_tail_split,
    direct_matching_sample,
    sample_cost_profile,
    sample_total_cost,
    typical_cost_sample,
)
from src.stats.goodness_of_fit import EcdfSummary, ks_two_sample, ks_two_sample_critical
from src.stats.streams import derive_stream


def within_3se(values, expected):
    values = np.asarray(values, dtype=float)
    se = values.std(ddof=1) / math.sqrt(values.size)
    return abs(values.mean() - expected) <= 3 * se


class TestGraphKind:
    def test_rates(self):
        assert GraphKind.bipartite(3).profile_rates().tolist() == [9.0, 4.0, 1.0]
        assert GraphKind.complete(6).profile_rates().tolist() == [15.0, 6.0, 1.0]
        assert GraphKind.bipartite(3).total_rates().tolist() == [1.0, 2.0, 3.0]
        assert GraphKind.complete(4).total_rates().tolist() == [1.0, 3.0]

    def test_odd_complete_needs_flag(self):
        with pytest.raises(GraphError):
            GraphKind.complete(5)
        kind = GraphKind.complete(5, allow_odd=True)
        assert kind.matching_size == 2
        assert kind.total_rates().tolist() == [3.0, 5.0]

    def test_explicit_rejected(self):
        with pytest.raises(GraphError):
            GraphKind(make_graph("explicit", [(0, 1)]).family, 2)


class TestMoments:
    """Closed-form sums."""

    def test_bipartite_three(self):
        summary = exact_total_moments(GraphKind.bipartite(3))
        assert summary.mean == pytest.approx(11 / 6)
        assert summary.variance == pytest.approx(1 + 1 / 4 + 1 / 9)

    def test_complete_four(self):
        summary = exact_total_moments(GraphKind.complete(4))
        assert summary.mean == pytest.approx(4 / 3)
        assert summary.variance == pytest.approx(10 / 9)

    def test_rational_forms(self):
        assert exact_total_moments_rational(GraphKind.bipartite(3)) == (
            sp.Rational(11, 6), sp.Rational(49, 36)
        )
        mean, variance = exact_total_moments_rational(GraphKind.complete(6))
        assert mean == sp.Rational(1) + sp.Rational(1, 3) + sp.Rational(1, 5)
        assert variance == sp.Rational(1) + sp.Rational(1, 9) + sp.Rational(1, 25)
        odd_mean, _ = exact_total_moments_rational(GraphKind.complete(5, allow_odd=True))
        assert odd_mean == sp.Rational(1, 3) + sp.Rational(1, 5)

    def test_variance_limits(self):
        assert exact_total_moments(GraphKind.bipartite(100_000)).variance == pytest.approx(
            math.pi ** 2 / 6, abs=1e-4
        )
        assert exact_total_moments(GraphKind.complete(100_000)).variance == pytest.approx(
            math.pi ** 2 / 8, abs=1e-4
        )

    def test_harmonic_matches_sympy(self):
        assert harmonic(1000) == pytest.approx(float(sp.harmonic(1000)), rel=1e-14)

    def test_order_statistics(self):
        assert order_stat_moments(2, 0).summary.mean == pytest.approx(1.25)
        assert order_stat_moments(2, 1).summary.mean == pytest.approx(0.25)
        bounds = order_stat_moments(100, 10)
        assert bounds.mean_lower <= bounds.summary.mean <= bounds.mean_upper
        assert bounds.summary.variance <= bounds.variance_upper
        assert bounds.lower_tail_bound == pytest.approx(1.2)
        assert order_stat_moments(10, 5).lower_threshold is None
        with pytest.raises(ValueError):
            order_stat_moments(3, 3)

    def test_partial_sums_bracketed(self):
        moments = partial_sum_moments(1000, 10)
        assert moments.mean_lower <= moments.summary.mean <= moments.mean_upper

    def test_bulk_tail_split_moments(self):
        bulk, tail = bulk_tail_moments(10, 10)
        assert bulk.mean == 0.0 and bulk.variance == 0.0
        assert tail.mean == pytest.approx(harmonic(10))
        assert bulk_tail_moments(5, 2)[1].mean == pytest.approx(1.5)
        bulk, tail = bulk_tail_moments(10_000, 100)
        assert bulk.variance <= 1 / 100
        assert bulk.mean + tail.mean == pytest.approx(harmonic(10_000))
        with pytest.raises(ValueError):
            bulk_tail_moments(5, 0)


class TestSamplers:
    """O(n) samplers against exact values and the full-graph engine."""

    def test_n_one_is_unit_exponential(self):
        totals = [sample_total_cost(GraphKind.bipartite(1), derive_stream(1, i)) for i in range(4000)]
        assert within_3se(totals, 1.0)
        typical = [typical_cost_sample(1, derive_stream(2, i)) for i in range(4000)]
        assert within_3se(typical, 1.0)

    def test_profile_means_for_n_two(self):
        profiles = np.array(
            [sample_cost_profile(GraphKind.bipartite(2), derive_stream(3, i)).values for i in range(6000)]
        )
        assert within_3se(profiles[:, 0], 0.25)
        assert within_3se(profiles[:, 1], 1.25)
        assert np.all(np.diff(profiles, axis=1) >= 0)

    def test_total_mean_is_harmonic(self):
        kind = GraphKind.bipartite(1000)
        totals = [sample_total_cost(kind, derive_stream(4, i)) for i in range(3000)]
        assert within_3se(totals, harmonic(1000))

    def test_order_statistic_by_simulation(self):
        kind = GraphKind.bipartite(100)
        values = [sample_cost_profile(kind, derive_stream(5, i))[90] for i in range(5000)]
        assert within_3se(values, order_stat_moments(100, 10).summary.mean)

    def test_direct_sample_structure(self):
        single = direct_matching_sample(GraphKind.bipartite(1), derive_stream(6, 0))
        assert single.pairs.tolist() == [[0, 1]]
        sample = direct_matching_sample(GraphKind.complete(8), derive_stream(6, 1))
        assert sample.pairs.shape == (4, 2)
        assert sorted(sample.pairs.ravel().tolist()) == list(range(8))
        assert len(sample.profile) == 4

    def test_direct_partner_marginal_is_uniform(self):
        partners = [
            int(direct_matching_sample(GraphKind.bipartite(10), derive_stream(7, i)).pairs[0, 1])
            for i in range(5000)
        ]
        counts = np.bincount(np.array(partners) - 10, minlength=10)
        assert counts.min() > 400 and counts.max() < 600

    @pytest.mark.slow
    def test_engines_agree_in_law(self):
        kind = GraphKind.bipartite(30)
        exact = [sample_total_cost(kind, derive_stream(8, i)) for i in range(1500)]
        full = [
            greedy_stable_matching(sample_costs(kind.make_graph(), derive_stream(9, i))).profile.total
            for i in range(1500)
        ]
        direct = [direct_matching_sample(kind, derive_stream(10, i)).total for i in range(1500)]
        critical = ks_two_sample_critical(1500, 1500)
        assert ks_two_sample(exact, full) < critical
        assert ks_two_sample(exact, direct) < critical

    @pytest.mark.slow
    def test_typical_cost_law(self):
        values = [typical_cost_sample(2000, derive_stream(11, i)) for i in range(5000)]
        assert EcdfSummary.from_sample(values).sup_distance(typical_cdf) < 0.03
        assert abs(np.median(values) - 1.0) < 0.1

    def test_bulk_tail_split_sums_to_total(self):
        profile = sample_cost_profile(GraphKind.bipartite(50), derive_stream(12, 0))
        bulk, tail = bulk_tail_split(profile, 5)
        assert bulk + tail == pytest.approx(profile.total)
        assert bulk_tail_split(profile, 50)[0] == 0.0
        with pytest.raises(ValueError):
            bulk_tail_split(profile, 51)


class TestLimitLaws:
    def test_typical_law_values(self):
        laws = limit_laws()
        assert laws.F_W(0.0) == 0.0
        assert laws.F_W(1.0) == 0.5
        assert laws.f_W(0.0) == 1.0
        assert typical_density(-1.0) == 0.0
        assert typical_cdf(np.inf) == 1.0
        assert typical_quantile(0.5) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            typical_quantile(1.0)

    def test_gumbel(self):
        assert gumbel_cdf(0.0) == pytest.approx(math.exp(-1.0))
        assert gumbel_cdf(GUMBEL_LOCATION, GUMBEL_LOCATION, 1.0) == pytest.approx(math.exp(-1.0))
        with pytest.raises(ValueError):
            gumbel_cdf(0.0, scale=0.0)

    def test_mgf_domain_and_origin(self):
        assert limit_mgf_complete(0.0) == 1.0
        assert limit_mgf_bipartite(0.0) == 1.0
        with pytest.raises(ValueError):
            limit_mgf_complete(1.0)
        with pytest.raises(ValueError):
            finite_mgf(GraphKind.bipartite(5), 1.0)

    def test_finite_mgf_converges(self):
        for t in (-1.0, -0.5, 0.5):
            assert finite_mgf(GraphKind.complete(20_000), t) == pytest.approx(
                limit_mgf_complete(t), rel=1e-3
            )
            assert finite_mgf(GraphKind.bipartite(20_000), t) == pytest.approx(
                limit_mgf_bipartite(t), rel=1e-3
            )

    def test_limit_mgf_second_derivative_is_variance(self):
        h = 1e-3
        curvature = (limit_mgf_complete(h) - 2.0 + limit_mgf_complete(-h)) / h ** 2
        assert curvature == pytest.approx(math.pi ** 2 / 8, rel=1e-3)
