"""Exception hierarchy shared by every module of the lab."""


class MatchingLabError(Exception):
    """Base class for all errors raised by the lab."""


class GraphError(MatchingLabError, ValueError):
    """Invalid graph construction or a graph/matching mismatch."""


class BudgetExceededError(MatchingLabError, ValueError):
    """A request would exceed a configured memory or enumeration budget."""


class NumericalError(MatchingLabError, ArithmeticError):
    """Two independent numerical evaluations disagree beyond tolerance."""


class EstimationError(MatchingLabError, ValueError):
    """Not enough (or degenerate) data for an estimator."""


class ConfigurationError(MatchingLabError, ValueError):
    """Invalid settings file or invalid combination of experiment options."""
