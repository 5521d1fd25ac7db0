"""
Closed-form moments of matching costs.

All sums are evaluated by direct summation (largest denominators first,
chunked so that n up to 1e8 stays within memory); no asymptotic expansions.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import sympy as sp

from src.cost_process.kinds import GraphKind

SUM_CHUNK = 1 << 20


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    second_moment: Optional[float] = None

    def __post_init__(self) -> None:
        if self.variance < 0:
            raise ValueError(f"Variance must be nonnegative, got {self.variance}")


def chunked_sum(start: int, stop: int, term: Callable[[np.ndarray], np.ndarray], step: int = 1) -> float:
    """``sum(term(i) for i in range(start, stop, step))`` in float64, top chunk first."""
    if stop <= start:
        return 0.0
    partials = []
    top = stop
    span = SUM_CHUNK * step
    while top > start:
        low = max(start, top - span)
        # align low onto the progression start, step, ...
        low = start + -(-(low - start) // step) * step
        values = np.arange(low, top, step, dtype=float)
        partials.append(float(np.sum(term(values[::-1]))))
        top = low
    return math.fsum(partials)


def _inverse_power_sum(denominators: range, power: int) -> float:
    return chunked_sum(
        denominators.start, denominators.stop, lambda d: d ** (-float(power)), denominators.step
    )


def harmonic(n: int, power: int = 1) -> float:
    """Generalized harmonic number ``H_n^{(p)} = sum_{k<=n} k^{-p}``."""
    return _inverse_power_sum(range(1, n + 1), power)


def exact_total_moments(kind: GraphKind) -> MomentSummary:
    """Mean and variance of the total greedy matching cost.

    ``K_{n,n}``: ``H_n`` and ``sum 1/k^2``. ``K_n`` (n even): the sums of
    ``1/(2k-1)`` and ``1/(2k-1)^2`` over ``k <= n/2``.
    """
    rates = kind.total_denominators()
    mean = _inverse_power_sum(rates, 1)
    variance = _inverse_power_sum(rates, 2)
    return MomentSummary(mean=mean, variance=variance, second_moment=variance + mean ** 2)


def exact_total_moments_rational(kind: GraphKind) -> Tuple[sp.Rational, sp.Rational]:
    """Exact rational (mean, variance) via generalized harmonic numbers."""
    n, m = kind.n, kind.matching_size
    if kind.is_bipartite:
        return sp.harmonic(n), sp.harmonic(n, 2)
    if n % 2 == 0:
        # odd reciprocals up to 2m - 1
        mean = sp.harmonic(2 * m) - sp.harmonic(m) / 2
        variance = sp.harmonic(2 * m, 2) - sp.harmonic(m, 2) / 4
    else:
        mean = sp.harmonic(2 * m + 1) - sp.harmonic(m) / 2 - 1
        variance = sp.harmonic(2 * m + 1, 2) - sp.harmonic(m, 2) / 4 - 1
    return mean, variance


@dataclass(frozen=True)
class OrderStatMoments:
    """Moments of ``Y_{n-l}`` with the bracketing and concentration bounds.

    ``lower_tail_bound`` bounds ``P(Y_{n-l} < lower_threshold)`` and
    ``upper_tail_bound`` bounds ``P(Y_{n-l} > upper_threshold)``; both are
    ``None`` unless ``l >= 1`` and ``n >= 6 l``.
    """

    n: int
    ell: int
    summary: MomentSummary
    mean_lower: float
    mean_upper: float
    variance_upper: float
    lower_threshold: Optional[float] = None
    upper_threshold: Optional[float] = None
    lower_tail_bound: Optional[float] = None
    upper_tail_bound: Optional[float] = None


def order_stat_moments(n: int, ell: int) -> OrderStatMoments:
    """Exact mean ``sum_{i>l} 1/i^2`` and variance ``sum_{i>l} 1/i^4`` of ``Y_{n-l}`` on ``K_{n,n}``.

    Raises:
        ValueError: unless ``0 <= l < n``.
    """
    if not 0 <= ell < n:
        raise ValueError(f"Need 0 <= l < n, got l={ell}, n={n}")
    mean = _inverse_power_sum(range(ell + 1, n + 1), 2)
    variance = _inverse_power_sum(range(ell + 1, n + 1), 4)
    summary = MomentSummary(mean=mean, variance=variance, second_moment=variance + mean ** 2)
    concentration = {}
    if ell >= 1 and n >= 6 * ell:
        concentration = dict(
            lower_threshold=1.0 / (6 * ell),
            upper_threshold=7.0 / (6 * ell),
            lower_tail_bound=12.0 / ell,
            upper_tail_bound=12.0 / ell,
        )
    return OrderStatMoments(
        n=n,
        ell=ell,
        summary=summary,
        mean_lower=1.0 / (ell + 1) - 1.0 / n,
        mean_upper=1.0 / ell if ell else math.inf,
        variance_upper=1.0 / (3 * ell ** 3) if ell else math.inf,
        **concentration,
    )


@dataclass(frozen=True)
class PartialSumMoments:
    n: int
    ell: int
    summary: MomentSummary
    mean_lower: float
    mean_upper: float


def partial_sum_moments(n: int, ell: int) -> PartialSumMoments:
    """Moments of ``sum_{k <= n-l} Y_k`` on ``K_{n,n}``.

    Mean ``sum_{i>l} (i-l)/i^2``, variance ``sum_{i>l} (i-l)^2/i^4``, bracketed
    by ``log(n/l) - 2 <= mean <= log(n/l)``.
    """
    if not 1 <= ell < n:
        raise ValueError(f"Need 1 <= l < n, got l={ell}, n={n}")
    mean = chunked_sum(ell + 1, n + 1, lambda i: (i - ell) / i ** 2)
    variance = chunked_sum(ell + 1, n + 1, lambda i: (i - ell) ** 2 / i ** 4)
    log_ratio = math.log(n / ell)
    return PartialSumMoments(
        n=n,
        ell=ell,
        summary=MomentSummary(mean=mean, variance=variance),
        mean_lower=log_ratio - 2.0,
        mean_upper=log_ratio,
    )


def bulk_tail_moments(n: int, m: int) -> Tuple[MomentSummary, MomentSummary]:
    """Moments of the bulk ``W_m^-`` and tail ``W_m^+`` parts of the total cost.

    Writing ``C = sum_k (n-k+1) X_k`` over the profile increments, ``W_m^+``
    collects the last ``m`` increments (k > n - m): ``E = H_m``,
    ``Var = sum_{k<=m} 1/k^2``. ``W_m^-`` is the rest: ``E = sum_{k>m} 1/k``,
    ``Var = sum_{k>m} 1/k^2 <= 1/m``.

    Raises:
        ValueError: unless ``1 <= m <= n``.
    """
    if not 1 <= m <= n:
        raise ValueError(f"Need 1 <= m <= n, got m={m}, n={n}")
    bulk = MomentSummary(
        mean=_inverse_power_sum(range(m + 1, n + 1), 1),
        variance=_inverse_power_sum(range(m + 1, n + 1), 2),
    )
    tail = MomentSummary(
        mean=_inverse_power_sum(range(1, m + 1), 1),
        variance=_inverse_power_sum(range(1, m + 1), 2),
    )
    return bulk, tail
