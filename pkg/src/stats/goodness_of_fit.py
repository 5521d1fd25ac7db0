"""Goodness-of-fit statistics: empirical cdfs, Kolmogorov-Smirnov and chi-square."""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from src.core.errors import EstimationError

Cdf = Callable[[np.ndarray], np.ndarray]


def _as_sample(sample: Sequence[float], name: str = "sample") -> np.ndarray:
    values = np.asarray(sample, dtype=float).ravel()
    if values.size == 0:
        raise EstimationError(f"{name} must be nonempty")
    return values


@dataclass(frozen=True)
class EcdfSummary:
    """Empirical cdf of a sample, right-continuous from 0 to 1."""

    sorted_sample: np.ndarray

    @classmethod
    def from_sample(cls, sample: Sequence[float]) -> "EcdfSummary":
        return cls(np.sort(_as_sample(sample)))

    @property
    def size(self) -> int:
        return int(self.sorted_sample.size)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        counts = np.searchsorted(self.sorted_sample, x, side="right")
        return counts / self.size

    def sup_distance(
        self,
        cdf: Cdf,
        lower: Optional[float] = None,
        upper: Optional[float] = None,
    ) -> float:
        """sup |ECDF(x) - cdf(x)| over x in [lower, upper] (whole line by default).

        The supremum of a step function against a continuous cdf is attained at
        the jump points (from either side) or at the interval ends.
        """
        xs = self.sorted_sample
        ranks = np.arange(1, self.size + 1)
        inside = np.ones(self.size, dtype=bool)
        if lower is not None:
            inside &= xs >= lower
        if upper is not None:
            inside &= xs <= upper

        candidates = [0.0]
        if np.any(inside):
            fx = cdf(xs[inside])
            after = np.abs(ranks[inside] / self.size - fx)
            # left limits only count strictly inside the interval
            left_ok = xs[inside] > lower if lower is not None else np.ones(fx.size, bool)
            before = np.abs((ranks[inside] - 1) / self.size - fx)[left_ok]
            candidates.append(float(after.max()))
            if before.size:
                candidates.append(float(before.max()))
        for end in (lower, upper):
            if end is not None:
                value = float(self(np.array([end]))[0])
                candidates.append(abs(value - float(cdf(np.array([end]))[0])))
        return max(candidates)


def ks_one_sample(sample: Sequence[float], cdf: Cdf) -> float:
    """Two-sided one-sample Kolmogorov-Smirnov statistic ``D``.

    Raises:
        EstimationError: for an empty sample.
    """
    values = _as_sample(sample)
    return float(stats.ks_1samp(values, cdf, method="asymp").statistic)


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> float:
    """Sup-distance between the empirical cdfs of ``a`` and ``b``."""
    first = _as_sample(a, "first sample")
    second = _as_sample(b, "second sample")
    return float(stats.ks_2samp(first, second, method="asymp").statistic)


def ks_coefficient(alpha: float) -> float:
    """Asymptotic KS coefficient ``c(alpha) = sqrt(-ln(alpha / 2) / 2)``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return math.sqrt(-math.log(alpha / 2.0) / 2.0)


def ks_two_sample_critical(m: int, n: int, alpha: float = 0.001) -> float:
    """Critical value ``c(alpha) * sqrt((m + n) / (m n))`` of the two-sample test."""
    if m < 1 or n < 1:
        raise EstimationError(f"Sample sizes must be positive, got {m} and {n}")
    return ks_coefficient(alpha) * math.sqrt((m + n) / (m * n))


def ks_one_sample_critical(n: int, alpha: float = 0.001) -> float:
    if n < 1:
        raise EstimationError(f"Sample size must be positive, got {n}")
    return ks_coefficient(alpha) / math.sqrt(n)


def chi_square_uniform(sample: Sequence[float], bins: int = 100) -> Tuple[float, float]:
    """Chi-square test of uniformity on [0, 1) with equal-width bins.

    Returns:
        Tuple of (statistic, p_value)
    """
    values = _as_sample(sample)
    counts, _ = np.histogram(values, bins=bins, range=(0.0, 1.0))
    result = stats.chisquare(counts)
    return float(result.statistic), float(result.pvalue)
