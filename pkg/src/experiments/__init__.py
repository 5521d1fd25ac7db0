"""Experiment requests, studies, the parallel runner and output files."""

from .config import Engine, ExperimentConfig, Subcommand, build_config
from .runner import ExperimentResult, execute_tasks, run
from .studies import STUDIES, ReplicateTask, Study

__all__ = [
    "Engine",
    "ExperimentConfig",
    "Subcommand",
    "build_config",
    "ExperimentResult",
    "execute_tasks",
    "run",
    "STUDIES",
    "ReplicateTask",
    "Study",
]
