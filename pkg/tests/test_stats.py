"""
Tests for random streams, estimators, goodness-of-fit and quadrature.
"""

import math

import numpy as np
import pytest
from scipy import special

from src.core.errors import EstimationError, NumericalError
from src.cost_process.limits import typical_cdf, typical_quantile
from src.stats import quadrature
from src.stats.estimators import confidence_for, moments_ci, pearson_corr_ci, proportion_ci
from src.stats.goodness_of_fit import (
    EcdfSummary,
    chi_square_uniform,
    ks_coefficient,
    ks_one_sample,
    ks_one_sample_critical,
    ks_two_sample,
    ks_two_sample_critical,
)
from src.stats.quadrature import quad_E1, rank_one_probability, series_E1
from src.stats.streams import derive_stream, exp_sample, stream_id_for


class TestStreams:
    """Counter-based stream derivation."""

    def test_same_arguments_reproduce(self):
        a = derive_stream(42, 7).uniform(1000)
        b = derive_stream(42, 7).uniform(1000)
        assert np.array_equal(a, b)

    def test_neighbouring_streams_uncorrelated(self):
        a = derive_stream(42, 7).uniform(200_000)
        b = derive_stream(42, 8).uniform(200_000)
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.01

    def test_uniforms_pass_chi_square(self):
        _, p_value = chi_square_uniform(derive_stream(5, 0).uniform(200_000), bins=100)
        assert p_value > 0.001

    def test_stream_ids(self):
        assert stream_id_for("overlap:n=10", 3) == stream_id_for("overlap:n=10", 3)
        assert stream_id_for("overlap:n=10", 3) != stream_id_for("overlap:n=10", 4)
        assert 0 <= stream_id_for("x", 0) < 2 ** 64

    def test_exponential_means(self):
        stream = derive_stream(1, 2)
        for rate, mean in ((1.0, 1.0), (4.0, 0.25)):
            draws = exp_sample(stream, rate, 200_000)
            se = draws.std(ddof=1) / math.sqrt(draws.size)
            assert abs(draws.mean() - mean) <= 3 * se

    def test_exponential_scaling_identity(self):
        unit = exp_sample(derive_stream(9, 9), 1.0, 100)
        fast = exp_sample(derive_stream(9, 9), 5.0, 100)
        np.testing.assert_allclose(fast, unit / 5.0)

    def test_rate_array_and_invalid_rate(self):
        draws = exp_sample(derive_stream(0, 0), np.array([1.0, 2.0, 3.0]))
        assert draws.shape == (3,)
        assert isinstance(exp_sample(derive_stream(0, 0)), float)
        with pytest.raises(ValueError):
            exp_sample(derive_stream(0, 0), 0.0)


class TestEstimators:
    def test_moments_examples(self):
        constant = moments_ci([1.0, 1.0, 1.0])
        assert constant.mean == 1.0 and constant.variance == 0.0
        pair = moments_ci([0.0, 2.0])
        assert pair.mean == 1.0 and pair.variance == 2.0
        with pytest.raises(EstimationError):
            moments_ci([1.0])

    def test_exponential_variance(self):
        est = moments_ci(exp_sample(derive_stream(3, 3), 1.0, 200_000))
        assert abs(est.variance - 1.0) <= 3 * est.variance_se
        assert est.mean_ci[0] < est.mean < est.mean_ci[1]

    def test_proportion(self):
        est = proportion_ci(30, 100)
        assert est.value == 0.3
        assert est.se == pytest.approx(math.sqrt(0.3 * 0.7 / 100))
        assert proportion_ci(0, 10).ci[0] == 0.0
        with pytest.raises(EstimationError):
            proportion_ci(0, 0)

    def test_correlation_extremes(self):
        x = np.arange(40, dtype=float)
        assert pearson_corr_ci(np.column_stack([x, x])).correlation == 1.0
        assert pearson_corr_ci(np.column_stack([x, -x])).correlation == -1.0

    def test_correlation_errors(self):
        x = np.arange(10, dtype=float)
        with pytest.raises(EstimationError):
            pearson_corr_ci(np.column_stack([x, x]))
        flat = np.column_stack([np.ones(40), np.arange(40.0)])
        with pytest.raises(EstimationError):
            pearson_corr_ci(flat)

    def test_independent_pairs_cover_zero(self):
        stream = derive_stream(4, 4)
        pairs = np.column_stack([stream.uniform(5000), stream.uniform(5000)])
        est = pearson_corr_ci(pairs)
        assert est.ci[0] <= est.correlation <= est.ci[1]
        assert abs(est.correlation) < 0.06

    def test_se_band_confidence(self):
        assert confidence_for(3.0) == pytest.approx(0.99730020, abs=1e-7)
        assert confidence_for(1.959964) == pytest.approx(0.95, abs=1e-6)
        with pytest.raises(EstimationError):
            confidence_for(0.0)

    def test_wide_interval_contains_default(self):
        stream = derive_stream(4, 5)
        pairs = np.column_stack([stream.uniform(60), stream.uniform(60)])
        narrow = pearson_corr_ci(pairs)
        wide = pearson_corr_ci(pairs, confidence=confidence_for(3.0))
        assert wide.ci[0] < narrow.ci[0] and narrow.ci[1] < wide.ci[1]


class TestGoodnessOfFit:
    """KS statistics and sup-distances."""

    def test_single_point_against_uniform(self):
        assert ks_one_sample([0.5], lambda x: np.clip(x, 0.0, 1.0)) == pytest.approx(0.5)

    def test_two_sample_extremes(self):
        a = [0.1, 0.5, 0.9]
        assert ks_two_sample(a, a) == 0.0
        assert ks_two_sample([0.0], [1.0]) == 1.0
        with pytest.raises(EstimationError):
            ks_two_sample([], [1.0])

    def test_inverse_cdf_sampler_is_self_consistent(self):
        draws = typical_quantile(derive_stream(8, 0).uniform(10_000))
        assert ks_one_sample(draws, typical_cdf) < ks_one_sample_critical(10_000)

    def test_shift_increases_distance(self):
        draws = typical_quantile(derive_stream(8, 1).uniform(5000))
        distances = [ks_one_sample(draws + shift, typical_cdf) for shift in (0.0, 0.5, 1.0)]
        assert distances[0] < distances[1] < distances[2]

    def test_critical_values(self):
        assert ks_coefficient(0.001) == pytest.approx(1.9495, abs=1e-4)
        assert ks_two_sample_critical(10_000, 10_000) == pytest.approx(0.0276, abs=1e-4)
        assert ks_one_sample_critical(10_000) == pytest.approx(0.0195, abs=1e-4)

    def test_sup_distance_restricted_interval(self):
        ecdf = EcdfSummary.from_sample([1.0, 2.0, 10.0])
        whole = ecdf.sup_distance(typical_cdf)
        window = ecdf.sup_distance(typical_cdf, lower=0.0, upper=5.0)
        assert window <= whole
        assert ecdf(np.array([1.5]))[0] == pytest.approx(1 / 3)

    def test_sup_distance_matches_ks(self):
        draws = typical_quantile(derive_stream(8, 2).uniform(500))
        ecdf = EcdfSummary.from_sample(draws)
        assert ecdf.sup_distance(typical_cdf) == pytest.approx(ks_one_sample(draws, typical_cdf))


class TestQuadrature:
    """Exponential integral and the rank-one probability."""

    def test_rank_one_probability(self):
        assert rank_one_probability() == pytest.approx(0.596347362, abs=1e-8)

    def test_e1_at_ten(self):
        assert quad_E1(10.0) == pytest.approx(4.156968929685324e-06, abs=1e-12)
        assert abs(quad_E1(10.0) - series_E1(10.0)) < 1e-9

    def test_upper_bound(self):
        for x in (1.0, 2.0, 5.0, 10.0, 30.0):
            assert quad_E1(x) < math.exp(-x) / x

    def test_series_matches_scipy(self):
        for x in (0.1, 1.0, 7.5):
            assert series_E1(x) == pytest.approx(float(special.exp1(x)), abs=1e-10)

    def test_invalid_argument(self):
        with pytest.raises(ValueError):
            quad_E1(0.0)

    def test_oracle_disagreement_is_fatal(self, monkeypatch):
        monkeypatch.setattr(quadrature, "series_E1", lambda x: 0.0)
        with pytest.raises(NumericalError):
            quad_E1(1.0)
