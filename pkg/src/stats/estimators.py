"""Point estimates with standard errors and 95% confidence intervals."""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import stats

from src.core.errors import EstimationError

Interval = Tuple[float, float]


def _z(confidence: float) -> float:
    return float(stats.norm.ppf(0.5 + confidence / 2.0))


@dataclass(frozen=True)
class MomentsEstimate:
    """Sample mean and unbiased variance with CLT-based intervals."""

    size: int
    mean: float
    variance: float
    mean_se: float
    variance_se: float
    mean_ci: Interval
    variance_ci: Interval


def moments_ci(sample: Sequence[float], confidence: float = 0.95) -> MomentsEstimate:
    """Mean and variance of ``sample`` with standard errors.

    The variance SE uses the fourth central moment, ``sqrt((m4 - s^2) / n)``.
    CIs are nominal only for moderately large samples (n >= 30).

    Raises:
        EstimationError: for fewer than two observations.
    """
    values = np.asarray(sample, dtype=float).ravel()
    n = values.size
    if n < 2:
        raise EstimationError(f"Need at least 2 observations, got {n}")

    mean = float(values.mean())
    variance = float(values.var(ddof=1))
    m4 = float(np.mean((values - mean) ** 4))
    mean_se = math.sqrt(variance / n)
    variance_se = math.sqrt(max(m4 - variance ** 2, 0.0) / n)
    z = _z(confidence)
    return MomentsEstimate(
        size=n,
        mean=mean,
        variance=variance,
        mean_se=mean_se,
        variance_se=variance_se,
        mean_ci=(mean - z * mean_se, mean + z * mean_se),
        variance_ci=(variance - z * variance_se, variance + z * variance_se),
    )


@dataclass(frozen=True)
class ProportionEstimate:
    successes: int
    trials: int
    value: float
    se: float
    ci: Interval


def proportion_ci(successes: int, trials: int, confidence: float = 0.95) -> ProportionEstimate:
    """Binomial proportion with Wald SE, CI clipped to [0, 1]."""
    if trials < 1:
        raise EstimationError(f"Need at least one trial, got {trials}")
    if not 0 <= successes <= trials:
        raise EstimationError(f"successes={successes} outside [0, {trials}]")
    p = successes / trials
    se = math.sqrt(p * (1.0 - p) / trials)
    z = _z(confidence)
    return ProportionEstimate(
        successes=int(successes),
        trials=int(trials),
        value=p,
        se=se,
        ci=(max(0.0, p - z * se), min(1.0, p + z * se)),
    )


@dataclass(frozen=True)
class CorrEstimate:
    """Pearson correlation with its Fisher-z confidence interval."""

    correlation: float
    size: int
    ci: Interval


MIN_CORRELATION_PAIRS = 30


def pearson_corr_ci(pairs: Sequence[Sequence[float]], confidence: float = 0.95) -> CorrEstimate:
    """Pearson correlation of an ``(N, 2)`` array of pairs.

    Identical (or exactly negated) coordinates report exactly +1 (or -1)
    with a degenerate interval.

    Raises:
        EstimationError: for fewer than 30 pairs or a constant coordinate.
    """
    data = np.asarray(pairs, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise EstimationError(f"Expected an (N, 2) array of pairs, got shape {data.shape}")
    n = data.shape[0]
    if n < MIN_CORRELATION_PAIRS:
        raise EstimationError(
            f"Need at least {MIN_CORRELATION_PAIRS} pairs for a correlation, got {n}"
        )
    x, y = data[:, 0], data[:, 1]
    if np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        raise EstimationError("Correlation undefined: zero variance in a coordinate")

    if np.array_equal(x, y):
        return CorrEstimate(correlation=1.0, size=n, ci=(1.0, 1.0))
    if np.array_equal(x, -y):
        return CorrEstimate(correlation=-1.0, size=n, ci=(-1.0, -1.0))

    result = stats.pearsonr(x, y)
    r = float(np.clip(result.statistic, -1.0, 1.0))
    if abs(r) == 1.0:
        return CorrEstimate(correlation=r, size=n, ci=(r, r))
    interval = result.confidence_interval(confidence_level=confidence)
    low, high = float(interval.low), float(interval.high)
    return CorrEstimate(correlation=r, size=n, ci=(min(low, r), max(high, r)))


def confidence_for(k: float) -> float:
    """Two-sided normal coverage of a ``±k`` standard-error band."""
    if k <= 0.0:
        raise EstimationError(f"Standard-error multiplier must be positive, got {k}")
    return float(2.0 * stats.norm.cdf(k) - 1.0)
