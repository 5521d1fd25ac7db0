"""Execute a study across worker processes and collect an ordered result."""

import concurrent.futures
import logging
import math
import os
import time
from concurrent.futures.process import BrokenProcessPool
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd

from src.config import LabSettings, load_settings
from src.experiments.config import ExperimentConfig
from src.experiments.output import write_csv, write_json
from src.experiments.studies import STUDIES, Estimates, ReplicateTask, Row, Verdicts, run_task

logger = logging.getLogger(__name__)

# target number of blocks handed to each worker
BLOCKS_PER_WORKER = 4


def default_threads() -> int:
    return os.cpu_count() or 1


@dataclass
class ExperimentResult:
    """Rows, estimates and verdicts of one run, with the config echo."""

    config: ExperimentConfig
    columns: List[str]
    rows: pd.DataFrame
    estimates: Estimates = field(default_factory=dict)
    verdicts: Verdicts = field(default_factory=dict)
    runtime_seconds: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def table(self) -> pd.DataFrame:
        """The CSV view: schema columns only, in replicate order."""
        return self.rows.loc[:, self.columns]


def _run_inline(seed: int, tasks: List[ReplicateTask]) -> List[Row]:
    rows: List[Row] = []
    for task in tasks:
        rows.extend(run_task(seed, task))
    return rows


def _run_parallel(seed: int, blocks: List[ReplicateTask], threads: int) -> List[Row]:
    results: Dict[int, List[Row]] = {}
    with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as executor:
        futures = {executor.submit(run_task, seed, block): i for i, block in enumerate(blocks)}
        for future in concurrent.futures.as_completed(futures):
            results[futures[future]] = future.result()
    return [row for i in sorted(results) for row in results[i]]


def execute_tasks(seed: int, tasks: List[ReplicateTask], threads: int = 1) -> List[Row]:
    """Run every replicate of ``tasks``; row order never depends on ``threads``."""
    total = sum(len(task.indices) for task in tasks)
    if threads <= 1 or total <= 1:
        return _run_inline(seed, tasks)

    block = max(1, math.ceil(total / (threads * BLOCKS_PER_WORKER)))
    blocks = [part for task in tasks for part in task.split(block)]
    workers = min(threads, len(blocks))
    logger.debug(f"Dispatching {len(blocks)} blocks of <= {block} replicates to {workers} workers")
    try:
        return _run_parallel(seed, blocks, workers)
    except BrokenProcessPool as e:
        logger.warning(f"Worker pool failed ({e}); rerunning inline")
        return _run_inline(seed, tasks)


def run(config: ExperimentConfig, settings: Optional[LabSettings] = None) -> ExperimentResult:
    """Run the study behind ``config.command`` and write the requested files."""
    settings = settings or load_settings()
    study = STUDIES[config.command]
    start_time = time.time()

    tasks = study.plan(config, settings)
    reps = sum(len(task.indices) for task in tasks)
    logger.info(
        f"Running {config.command.value}: {len(tasks)} grid points, {reps} replicates, "
        f"seed={config.seed}, threads={config.threads}"
    )
    rows = execute_tasks(config.seed, tasks, config.threads)
    frame = pd.DataFrame(rows)
    estimates, verdicts = study.summarize(config, settings, frame)

    result = ExperimentResult(
        config=config,
        columns=study.columns(config),
        rows=frame,
        estimates=estimates,
        verdicts=verdicts,
        runtime_seconds=time.time() - start_time if config.record_runtime else None,
    )
    failed = [name for name, ok in verdicts.items() if not ok]
    if failed:
        logger.warning(f"{len(failed)} verdict(s) failed: {', '.join(failed)}")
    logger.info(f"{config.command.value} finished with {len(rows)} rows")

    if config.out_csv:
        write_csv(result, config.out_csv)
    if config.out_json:
        write_json(result, config.out_json)
    return result
