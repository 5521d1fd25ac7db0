"""Acceptance suite for the lab's estimators and algorithms."""

from .criterion import (
    Check,
    Criterion,
    CriterionResult,
    FunctionCriterion,
    SuiteReport,
    VerifyContext,
    VerifyLevel,
)
from .suite import CRITERIA, verify

__all__ = [
    "Check",
    "Criterion",
    "CriterionResult",
    "FunctionCriterion",
    "SuiteReport",
    "VerifyContext",
    "VerifyLevel",
    "CRITERIA",
    "verify",
]
