"""Validated request model for one CLI experiment run."""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from src.core.errors import ConfigurationError
from src.core.graph import CostScale, GraphFamily


class Subcommand(str, Enum):
    SIMULATE_COST = "simulate-cost"
    TYPICAL_COST = "typical-cost"
    RANK = "rank"
    PWIT_TREE = "pwit-tree"
    PWIT_RANK = "pwit-rank"
    OVERLAP = "overlap"
    TAIL = "tail"
    NOISE_CORR = "noise-corr"
    INTERLACING = "interlacing"
    ORACLE = "oracle"


class Engine(str, Enum):
    FULL_GRAPH = "full-graph"
    EXACT = "exact"
    DIRECT = "direct"


# allowed engines per subcommand; the first entry is the default
ENGINES: Dict[Subcommand, List[Engine]] = {
    Subcommand.SIMULATE_COST: [Engine.EXACT, Engine.FULL_GRAPH, Engine.DIRECT],
    Subcommand.TYPICAL_COST: [Engine.EXACT, Engine.FULL_GRAPH],
    Subcommand.RANK: [Engine.FULL_GRAPH],
    Subcommand.OVERLAP: [Engine.FULL_GRAPH],
    Subcommand.TAIL: [Engine.FULL_GRAPH],
    Subcommand.NOISE_CORR: [Engine.FULL_GRAPH],
    Subcommand.INTERLACING: [Engine.FULL_GRAPH],
    Subcommand.ORACLE: [Engine.FULL_GRAPH],
    Subcommand.PWIT_TREE: [],
    Subcommand.PWIT_RANK: [],
}

# fields that never influence results and stay out of the provenance echo
NON_PROVENANCE_FIELDS = {"threads", "out_csv", "out_json"}


class ExperimentConfig(BaseModel):
    """One experiment request; grids are expanded by the study."""

    command: Subcommand
    seed: int = Field(..., ge=0)
    kind: GraphFamily = GraphFamily.BIPARTITE
    n: List[int] = [100]
    eps: List[float] = [0.5]
    s: List[float] = [1.0]
    m: int = Field(1, ge=1)
    reps: int = Field(100, ge=1)
    engine: Optional[Engine] = None
    scale: CostScale = CostScale.UNIT
    allow_odd: bool = False
    split_m: Optional[int] = Field(None, ge=1)
    method: str = "recursion"
    node_cap: int = Field(10_000_000, ge=1)
    j_max: int = Field(1_000_000, ge=1)
    r_max: int = Field(20, ge=1)
    reference_reps: int = Field(1_000_000, ge=1)
    threads: int = Field(1, ge=1)
    out_csv: Optional[str] = None
    out_json: Optional[str] = None
    record_runtime: bool = False

    @field_validator("n")
    @classmethod
    def n_grid_valid(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("n grid must be nonempty")
        if min(v) < 1:
            raise ValueError(f"n must be at least 1, got {min(v)}")
        return v

    @field_validator("eps")
    @classmethod
    def eps_grid_valid(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("eps grid must be nonempty")
        if any(not 0.0 <= e <= 1.0 for e in v):
            raise ValueError(f"eps values must lie in [0, 1], got {v}")
        return v

    @field_validator("s")
    @classmethod
    def s_grid_valid(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("s grid must be nonempty")
        if any(x <= 0.0 for x in v):
            raise ValueError(f"s values must be positive, got {v}")
        return v

    @field_validator("kind")
    @classmethod
    def kind_not_explicit(cls, v: GraphFamily) -> GraphFamily:
        if v is GraphFamily.EXPLICIT:
            raise ValueError("Experiments run on bipartite or complete graphs only")
        return v

    @model_validator(mode="after")
    def check_combination(self) -> "ExperimentConfig":
        allowed = ENGINES[self.command]
        if self.engine is None:
            self.engine = allowed[0] if allowed else None
        elif self.engine not in allowed:
            names = ", ".join(e.value for e in allowed) or "none"
            raise ValueError(
                f"Engine {self.engine.value} is not available for {self.command.value} (allowed: {names})"
            )
        if self.command is Subcommand.TYPICAL_COST and self.kind is not GraphFamily.BIPARTITE:
            raise ValueError("typical-cost is defined on K_{n,n} only")
        if self.command in (Subcommand.OVERLAP, Subcommand.TAIL, Subcommand.NOISE_CORR):
            if self.kind is not GraphFamily.BIPARTITE:
                raise ValueError(f"{self.command.value} runs on K_{{n,n}} only")
        if self.kind is GraphFamily.COMPLETE and not self.allow_odd:
            odd = [x for x in self.n if x % 2]
            if odd and self.command is not Subcommand.ORACLE:
                raise ValueError(f"Odd n {odd} on the complete graph needs --allow-odd")
        if self.command is Subcommand.TAIL and self.m > min(self.n):
            raise ValueError(f"m={self.m} exceeds the smallest n={min(self.n)}")
        if self.method not in ("recursion", "general-greedy"):
            raise ValueError(f"Unknown tree matching method: {self.method}")
        return self

    def provenance(self) -> Dict[str, Any]:
        """Config echo embedded in every output file."""
        return self.model_dump(mode="json", exclude=NON_PROVENANCE_FIELDS)


def build_config(**fields: Any) -> ExperimentConfig:
    """Validate ``fields`` into an :class:`ExperimentConfig`.

    Raises:
        ConfigurationError: on any invalid value or flag combination.
    """
    try:
        return ExperimentConfig(**fields)
    except ValidationError as e:
        raise ConfigurationError(str(e)) from e
