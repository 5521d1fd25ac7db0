"""Sorted matching-edge costs of one realization."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class CostProfile:
    """Nondecreasing sequence ``Y_1 <= ... <= Y_m`` of matching-edge costs."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float).ravel()
        if values.size > 1 and np.any(np.diff(values) < 0):
            raise ValueError("Cost profile must be nondecreasing")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_costs(cls, costs: Sequence[float]) -> "CostProfile":
        return cls(np.sort(np.asarray(costs, dtype=float)))

    def __len__(self) -> int:
        return int(self.values.size)

    def __getitem__(self, k: int) -> float:
        """``Y_k`` with the 1-based index used throughout the lab."""
        if not 1 <= k <= len(self):
            raise IndexError(f"Profile index {k} outside 1..{len(self)}")
        return float(self.values[k - 1])

    @property
    def total(self) -> float:
        return float(self.values.sum())

    def __repr__(self) -> str:
        return f"CostProfile(m={len(self)}, total={self.total:.6g})"
