"""Acceptance criteria framework: numbered criteria made of expected/observed checks."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional

import pandas as pd

from src.config import LabSettings, VerifyScale
from src.experiments.runner import execute_tasks
from src.experiments.studies import ReplicateTask

logger = logging.getLogger(__name__)


class VerifyLevel(Enum):
    """Verification depth."""
    QUICK = "quick"
    FULL = "full"


@dataclass
class Check:
    """One comparison inside a criterion."""
    name: str
    expected: str
    observed: str
    passed: bool


@dataclass
class CriterionResult:
    """Outcome of one criterion; an exception counts as a failure."""
    number: int
    title: str
    checks: List[Check] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and bool(self.checks) and all(c.passed for c in self.checks)


@dataclass
class VerifyContext:
    """Level, seed and settings shared by every criterion of one run."""
    level: VerifyLevel
    seed: int
    settings: LabSettings
    threads: int = 1

    @property
    def scale(self) -> VerifyScale:
        return getattr(self.settings.verify, self.level.value)

    def run_tasks(self, tasks: List[ReplicateTask]) -> pd.DataFrame:
        return pd.DataFrame(execute_tasks(self.seed, tasks, self.threads))


def check_within(name: str, observed: float, expected: float, tolerance: float) -> Check:
    return Check(
        name=name,
        expected=f"{expected:.6f} +/- {tolerance:.6f}",
        observed=f"{observed:.6f}",
        passed=abs(observed - expected) <= tolerance,
    )


def check_below(name: str, observed: float, threshold: float) -> Check:
    return Check(
        name=name,
        expected=f"< {threshold:.6f}",
        observed=f"{observed:.6f}",
        passed=observed < threshold,
    )


def check_between(name: str, observed: float, lower: float, upper: float) -> Check:
    return Check(
        name=name,
        expected=f"in [{lower:.4f}, {upper:.4f}]",
        observed=f"{observed:.6f}",
        passed=lower <= observed <= upper,
    )


def check_count(name: str, successes: int, trials: int) -> Check:
    return Check(
        name=name,
        expected=f"{trials}/{trials}",
        observed=f"{successes}/{trials}",
        passed=successes == trials,
    )


class Criterion(ABC):
    """Base class for acceptance criteria."""

    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title

    @abstractmethod
    def evaluate(self, context: VerifyContext) -> List[Check]:
        """Compute the checks of this criterion."""
        pass

    def run(self, context: VerifyContext) -> CriterionResult:
        logger.info(f"Criterion {self.number}: {self.title} ({context.level.value})")
        try:
            checks = self.evaluate(context)
        except Exception as e:
            logger.error(f"Criterion {self.number} raised {type(e).__name__}: {e}")
            return CriterionResult(self.number, self.title, error=f"{type(e).__name__}: {e}")
        result = CriterionResult(self.number, self.title, checks)
        logger.info(f"Criterion {self.number}: {'PASS' if result.passed else 'FAIL'}")
        return result


class FunctionCriterion(Criterion):
    """Criterion whose checks come from a plain function."""

    def __init__(self, number: int, title: str, evaluate: Callable[[VerifyContext], List[Check]]):
        super().__init__(number, title)
        self._evaluate = evaluate

    def evaluate(self, context: VerifyContext) -> List[Check]:
        return self._evaluate(context)


@dataclass
class SuiteReport:
    level: VerifyLevel
    seed: int
    results: List[CriterionResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def table(self) -> pd.DataFrame:
        """One row per check: criterion, check, expected, observed, verdict."""
        records: List[Dict[str, str]] = []
        for result in self.results:
            label = f"{result.number}. {result.title}"
            if result.error is not None:
                records.append(
                    dict(criterion=label, check="error", expected="-", observed=result.error, verdict="FAIL")
                )
            for check in result.checks:
                records.append(
                    dict(
                        criterion=label,
                        check=check.name,
                        expected=check.expected,
                        observed=check.observed,
                        verdict="PASS" if check.passed else "FAIL",
                    )
                )
        return pd.DataFrame(records, columns=["criterion", "check", "expected", "observed", "verdict"])

    def format(self) -> str:
        summary = "ALL PASS" if self.passed else "FAILURES"
        lines = [
            "=" * 60,
            f"Acceptance suite: level={self.level.value} seed={self.seed}",
            "=" * 60,
            self.table().to_string(index=False),
            "=" * 60,
            f"{sum(r.passed for r in self.results)}/{len(self.results)} criteria passed: {summary}",
        ]
        return "\n".join(lines) + "\n"
