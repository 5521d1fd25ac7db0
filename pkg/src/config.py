"""Lab settings: budgets, thresholds, default grids and verification scales."""

import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

from src.core.errors import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "simulation.yaml"


class BudgetSettings(BaseModel):
    max_full_graph_n: int = Field(4096, ge=1)
    pwit_node_cap: int = Field(10_000_000, ge=1)
    limit_rank_j_max: int = Field(1_000_000, ge=1)
    # replicates per derived stream for scalar samplers
    scalar_block: int = Field(10_000, ge=1)


class PwitSettings(BaseModel):
    method: str = "recursion"
    rank_reference_reps: int = Field(1_000_000, ge=1)
    rank_reference_r_max: int = Field(20, ge=1)

    @field_validator("method")
    @classmethod
    def method_must_be_known(cls, v: str) -> str:
        if v not in ("recursion", "general-greedy"):
            raise ValueError(f"Unknown tree matching method: {v}")
        return v


class ThresholdSettings(BaseModel):
    ks_alpha: float = Field(0.001, gt=0.0, lt=1.0)
    se_multiplier: float = Field(3.0, gt=0.0)
    gumbel_ks: float = 0.03
    typical_sup: float = 0.02
    variance_relative: float = 0.05
    rank_one_finite: float = 0.02
    rank_one_min_n: int = Field(100, ge=1)
    rank_one_limit: float = 0.005
    rank_tail_band: Tuple[float, float] = (0.75, 1.30)
    rank_tail_r: List[int] = [10, 20]
    root_cost_sup: float = 0.02
    root_cost_interval: Tuple[float, float] = (0.0, 5.0)
    root_unmatched: float = 0.01
    overlap_bound_constant: float = 7.0


class GridSettings(BaseModel):
    """Defaults for CLI grid flags that were not given."""

    n: List[int] = [100]
    eps: List[float] = [0.001, 0.01, 0.1, 1.0]
    s: List[float] = [1.0, 2.0]

    @field_validator("n", "eps", "s")
    @classmethod
    def grid_must_be_nonempty(cls, v: List[Any]) -> List[Any]:
        if not v:
            raise ValueError("Grids must be nonempty")
        return v


class VerifyScale(BaseModel):
    """Sizes and replicate counts of one verification level."""

    oracle_instances: int = 500
    engine_n: int = 100
    engine_reps: int = 10_000
    moments_n: int = 10_000
    moments_reps: int = 10_000
    typical_n: int = 2000
    typical_reps: int = 20_000
    rank_n: int = 1000
    rank_matchings: int = 2000
    limit_rank_reps: int = 1_000_000
    pwit_trees: int = 100_000
    root_s: float = 10.0
    root_trees: int = 10_000
    interlacing_n: int = 50
    interlacing_instances: int = 200
    overlap_n: int = 1000
    overlap_reps: int = 100
    tail_n: List[int] = [300, 1000, 3000]
    tail_reps: int = 400
    corr_n: List[int] = [100, 1000, 3000]
    corr_reps: int = 200
    complete_n: int = 10_000
    complete_reps: int = 10_000


class VerifySettings(BaseModel):
    quick: VerifyScale = VerifyScale(
        oracle_instances=50,
        engine_reps=2000,
        moments_reps=2000,
        typical_reps=5000,
        rank_n=300,
        rank_matchings=50,
        limit_rank_reps=100_000,
        pwit_trees=10_000,
        root_trees=1000,
        interlacing_instances=20,
        overlap_n=200,
        overlap_reps=30,
        tail_n=[100, 300, 1000],
        tail_reps=100,
        corr_n=[100, 300, 1000],
        corr_reps=60,
        complete_reps=2000,
    )
    full: VerifyScale = VerifyScale()


class LabSettings(BaseModel):
    budget: BudgetSettings = BudgetSettings()
    pwit: PwitSettings = PwitSettings()
    thresholds: ThresholdSettings = ThresholdSettings()
    grids: GridSettings = GridSettings()
    verify: VerifySettings = VerifySettings()


def _read_yaml(config_path: Path) -> Dict[str, Any]:
    with open(config_path, "r") as f:
        loaded = yaml.safe_load(f) or {}
    if not isinstance(loaded, dict):
        raise ConfigurationError(f"{config_path}: expected a mapping at the top level")
    return loaded.get("simulation", loaded)


def load_settings(config_path: Optional[str] = None) -> LabSettings:
    """Load settings from YAML, falling back to built-in defaults.

    An explicitly requested file must exist; the default file may be absent,
    in which case a warning is logged.

    Raises:
        ConfigurationError: if the file is missing (explicit path only) or
            its contents fail validation.
    """
    if config_path is not None and not os.path.exists(config_path):
        raise ConfigurationError(f"Config file not found: {config_path}")
    path = Path(config_path) if config_path is not None else DEFAULT_CONFIG_PATH

    if not path.exists():
        logger.warning(f"Config file {path} does not exist. Using default settings.")
        return LabSettings()

    try:
        raw = _read_yaml(path)
    except (OSError, yaml.YAMLError) as e:
        logger.error(f"Error loading config {path}: {str(e)}")
        if config_path is not None:
            raise ConfigurationError(f"Unreadable config file {path}: {e}") from e
        return LabSettings()

    try:
        settings = LabSettings.model_validate(raw)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid settings in {path}: {e}") from e
    logger.debug(f"Loaded settings from {path}")
    return settings
