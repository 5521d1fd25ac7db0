"""Random streams, estimators, goodness-of-fit statistics and quadrature."""

from .streams import RngStream, derive_stream, exp_sample, stream_id_for
from .goodness_of_fit import (
    EcdfSummary,
    chi_square_uniform,
    ks_one_sample,
    ks_one_sample_critical,
    ks_two_sample,
    ks_two_sample_critical,
)
from .estimators import (
    CorrEstimate,
    MomentsEstimate,
    ProportionEstimate,
    moments_ci,
    pearson_corr_ci,
    proportion_ci,
)
from .quadrature import EULER_GAMMA, quad_E1, rank_one_probability, series_E1

__all__ = [
    "RngStream",
    "derive_stream",
    "exp_sample",
    "stream_id_for",
    "EcdfSummary",
    "chi_square_uniform",
    "ks_one_sample",
    "ks_one_sample_critical",
    "ks_two_sample",
    "ks_two_sample_critical",
    "CorrEstimate",
    "MomentsEstimate",
    "ProportionEstimate",
    "moments_ci",
    "pearson_corr_ci",
    "proportion_ci",
    "EULER_GAMMA",
    "quad_E1",
    "rank_one_probability",
    "series_E1",
]
