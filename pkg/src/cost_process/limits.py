"""Limit laws of the matching costs."""

import math
from typing import Callable, NamedTuple, Union

import numpy as np
from scipy.special import gammaln

from src.cost_process.kinds import GraphKind
from src.cost_process.moments import chunked_sum
from src.stats.quadrature import EULER_GAMMA

ArrayLike = Union[float, np.ndarray]

# C_{n,n} - H_n converges to Gumbel(location, 1)
GUMBEL_LOCATION = -EULER_GAMMA


def typical_density(x: ArrayLike) -> ArrayLike:
    """Density ``f_W(x) = 1 / (1 + x)^2`` of a typical vertex's scaled matching cost."""
    x = np.asarray(x, dtype=float)
    return np.where(x >= 0, 1.0 / (1.0 + np.maximum(x, 0.0)) ** 2, 0.0)


def typical_cdf(x: ArrayLike) -> ArrayLike:
    """``F_W(x) = x / (1 + x)`` for ``x >= 0``."""
    x = np.asarray(x, dtype=float)
    clipped = np.maximum(x, 0.0)
    return np.where(np.isinf(clipped), 1.0, clipped / (1.0 + clipped))


def typical_quantile(u: ArrayLike) -> ArrayLike:
    """Inverse of ``F_W``: ``u / (1 - u)``."""
    u = np.asarray(u, dtype=float)
    if np.any((u < 0) | (u >= 1)):
        raise ValueError("Quantile level must lie in [0, 1)")
    return u / (1.0 - u)


def gumbel_cdf(x: ArrayLike, location: float = 0.0, scale: float = 1.0) -> ArrayLike:
    if scale <= 0:
        raise ValueError(f"Gumbel scale must be positive, got {scale}")
    z = (np.asarray(x, dtype=float) - location) / scale
    return np.exp(-np.exp(-z))


def _check_mgf_argument(t: float) -> None:
    if t >= 1:
        raise ValueError(f"Limit MGF is finite only for t < 1, got {t}")


def limit_mgf_complete(t: float) -> float:
    """Limit MGF of ``C_n - E[C_n]``: ``Gamma(1-t) / Gamma(1-t/2) * e^{-gamma t/2}``.

    The ratio of the full product ``Gamma(1-t) e^{-gamma t}`` over the even-rate
    product ``Gamma(1-t/2) e^{-gamma t/2}``.
    """
    _check_mgf_argument(t)
    return math.exp(gammaln(1.0 - t) - gammaln(1.0 - t / 2.0) - EULER_GAMMA * t / 2.0)


def limit_mgf_bipartite(t: float) -> float:
    """MGF of Gumbel(-gamma, 1), the limit of ``C_{n,n} - H_n``: ``Gamma(1-t) e^{-gamma t}``."""
    _check_mgf_argument(t)
    return math.exp(gammaln(1.0 - t) - EULER_GAMMA * t)


def finite_mgf(kind: GraphKind, t: float) -> float:
    """Exact MGF of ``C - E[C]``: ``prod_j e^{-t/r_j} / (1 - t/r_j)`` over the rates ``r_j``."""
    rates = kind.total_denominators()
    if rates.stop > rates.start and t >= rates.start:
        raise ValueError(f"MGF is finite only for t < {rates.start}, got {t}")
    log_mgf = chunked_sum(
        rates.start, rates.stop, lambda r: -t / r - np.log1p(-t / r), rates.step
    )
    return math.exp(log_mgf)


class LimitLaws(NamedTuple):
    f_W: Callable[[ArrayLike], ArrayLike]
    F_W: Callable[[ArrayLike], ArrayLike]
    gumbel_cdf: Callable[..., ArrayLike]
    limit_mgf_complete: Callable[[float], float]


def limit_laws() -> LimitLaws:
    """Evaluators of the limit distributions."""
    return LimitLaws(
        f_W=typical_density,
        F_W=typical_cdf,
        gumbel_cdf=gumbel_cdf,
        limit_mgf_complete=limit_mgf_complete,
    )
