"""Exponential integral by adaptive quadrature, guarded by independent oracles."""

import logging
import math

from scipy import integrate, special

from src.core.errors import NumericalError

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061

QUAD_ABS_TOL = 1e-10
ORACLE_TOL = 1e-9
# float64 cancellation in the alternating series stays below 1e-10 up to here
SERIES_MAX_X = 20.0


def series_E1(x: float, max_terms: int = 1000) -> float:
    """E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)."""
    if x <= 0:
        raise ValueError(f"E1 is defined for x > 0, got {x}")
    total = 0.0
    term = 1.0
    for k in range(1, max_terms + 1):
        term *= -x / k
        contribution = term / k
        total += contribution
        if k > x and abs(contribution) < 1e-18 * max(1.0, abs(total)):
            break
    return -EULER_GAMMA - math.log(x) - total


def quad_E1(x: float) -> float:
    """Exponential integral ``int_x^inf e^{-t} / t dt`` by adaptive quadrature.

    The result is checked against the alternating series for ``x <= 20`` and
    against ``scipy.special.exp1`` beyond that.

    Raises:
        ValueError: if ``x <= 0``.
        NumericalError: if quadrature and oracle differ by more than 1e-9.
    """
    if x <= 0:
        raise ValueError(f"E1 is defined for x > 0, got {x}")
    value, error = integrate.quad(
        lambda t: math.exp(-t) / t, x, math.inf, epsabs=QUAD_ABS_TOL, epsrel=1e-12, limit=200
    )
    oracle = series_E1(x) if x <= SERIES_MAX_X else float(special.exp1(x))
    if abs(value - oracle) > ORACLE_TOL:
        logger.error(f"E1({x}) quadrature {value!r} disagrees with oracle {oracle!r}")
        raise NumericalError(
            f"E1({x}): quadrature {value:.15g} vs oracle {oracle:.15g} (tolerance {ORACLE_TOL})"
        )
    logger.debug(f"E1({x}) = {value:.15g} (quadrature error estimate {error:.2e})")
    return float(value)


def rank_one_probability() -> float:
    """Limit probability that a vertex is matched along its cheapest edge, e E1(1)."""
    return math.e * quad_E1(1.0)
