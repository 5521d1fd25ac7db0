"""CSV rows and JSON summaries with provenance headers."""

import json
import logging
import math
from typing import Any

import numpy as np

from src import __version__

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _jsonable(value: Any) -> Any:
    """Plain JSON values; infinities become ``"inf"``/``"-inf"``, NaN becomes null."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float):
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
    return value


def provenance_lines(result) -> str:
    config = json.dumps(_jsonable(result.config.provenance()), sort_keys=True)
    return (
        f"# stable-matching-lab {__version__}\n"
        f"# seed={result.config.seed}\n"
        f"# config={config}\n"
    )


def format_csv(result) -> str:
    """Comment lines with version, seed and config, then the header row and data."""
    body = result.table().to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return provenance_lines(result) + body


def format_json(result) -> str:
    summary = {
        "version": __version__,
        "seed": result.config.seed,
        "config": result.config.provenance(),
        "estimates": result.estimates,
        "verdicts": result.verdicts,
        "runtime_seconds": result.runtime_seconds,
    }
    return json.dumps(_jsonable(summary), sort_keys=True, indent=2) + "\n"


def write_csv(result, path: str) -> None:
    with open(path, "w", newline="") as f:
        f.write(format_csv(result))
    logger.info(f"Wrote {len(result.rows)} rows to {path}")


def write_json(result, path: str) -> None:
    with open(path, "w") as f:
        f.write(format_json(result))
    logger.info(f"Wrote summary to {path}")
