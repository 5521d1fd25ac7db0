"""Command-line interface: one subcommand per study plus ``verify``."""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from src.config import LabSettings, load_settings
from src.core.errors import (
    BudgetExceededError,
    ConfigurationError,
    EstimationError,
    GraphError,
    NumericalError,
)
from src.experiments.config import ENGINES, Subcommand, build_config
from src.experiments.runner import ExperimentResult, default_threads, run
from src.validation.criterion import VerifyLevel
from src.validation.suite import verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

HELP = {
    Subcommand.SIMULATE_COST: "total matching cost on K_{n,n} or K_n",
    Subcommand.TYPICAL_COST: "matching cost of a typical vertex on the mean-n scale",
    Subcommand.RANK: "rank of each vertex's partner in its preference list",
    Subcommand.PWIT_TREE: "descending PWIT truncations: size, depth counts and root outcome",
    Subcommand.PWIT_RANK: "limit rank law and its reference table",
    Subcommand.OVERLAP: "shared matching edges before and after an eps-perturbation",
    Subcommand.TAIL: "most expensive matching edges before and after perturbation",
    Subcommand.NOISE_CORR: "correlation of total costs before and after perturbation",
    Subcommand.INTERLACING: "matching costs after removing one vertex",
    Subcommand.ORACLE: "exhaustive stable-matching enumeration on small graphs",
}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, required=True, help="Master seed (required)")
    common.add_argument("--threads", type=int, default=default_threads(), help="Worker processes")
    common.add_argument("--out-csv", type=str, help="Write per-replicate rows here")
    common.add_argument("--out-json", type=str, help="Write the summary here")
    common.add_argument("--config", type=str, help="Settings YAML (default: config/simulation.yaml)")
    common.add_argument(
        "--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (logs go to stderr)",
    )
    common.add_argument(
        "--record-runtime", action="store_true",
        help="Record wall-clock time in the JSON summary (makes it run-dependent)",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stable-matching-lab",
        description="Monte Carlo lab for the stable matching of exponential edge costs",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    for command in Subcommand:
        sub = commands.add_parser(command.value, parents=[common], help=HELP[command])
        sub.add_argument("--reps", type=int, default=100, help="Replicates per grid point")
        if command in (Subcommand.PWIT_TREE, Subcommand.PWIT_RANK):
            if command is Subcommand.PWIT_TREE:
                sub.add_argument("--s", type=float, nargs="+", help="Ceiling grid")
                sub.add_argument("--node-cap", type=int, help="Node cap per tree")
                sub.add_argument("--method", choices=["recursion", "general-greedy"])
            else:
                sub.add_argument("--j-max", type=int, help="Overflow bound on the rank")
                sub.add_argument("--r-max", type=int, help="Largest r in the reference table")
                sub.add_argument("--reference-reps", type=int, help="Monte Carlo reps for the table")
            continue

        sub.add_argument("--n", type=int, nargs="+", help="Size grid")
        sub.add_argument("--kind", choices=["bipartite", "complete"], default="bipartite")
        sub.add_argument("--allow-odd", action="store_true", help="Accept odd n on K_n")
        engines = [e.value for e in ENGINES[command]]
        if len(engines) > 1:
            sub.add_argument("--engine", choices=engines, help=f"Default: {engines[0]}")
        if command is Subcommand.SIMULATE_COST:
            sub.add_argument("--scale", choices=["unit", "mean-n"], default="unit")
        if command in (Subcommand.OVERLAP, Subcommand.TAIL, Subcommand.NOISE_CORR):
            sub.add_argument("--eps", type=float, nargs="+", help="Perturbation grid")
        if command is Subcommand.TAIL:
            sub.add_argument("--m", type=int, default=1, help="Tail size")
        if command is Subcommand.NOISE_CORR:
            sub.add_argument("--split-m", type=int, help="Also decompose the covariance at m")

    check = commands.add_parser("verify", parents=[common], help="Run the acceptance suite")
    check.add_argument("--level", choices=[level.value for level in VerifyLevel], default="quick")
    check.add_argument("--criteria", type=int, nargs="+", help="Run only these criterion numbers")
    return parser


def config_fields(args: argparse.Namespace, settings: LabSettings) -> Dict[str, Any]:
    """Flags merged with settings defaults for anything left unset."""
    fields: Dict[str, Any] = dict(
        command=args.command,
        seed=args.seed,
        reps=args.reps,
        threads=args.threads,
        out_csv=args.out_csv,
        out_json=args.out_json,
        record_runtime=args.record_runtime,
        n=getattr(args, "n", None) or settings.grids.n,
        eps=getattr(args, "eps", None) or settings.grids.eps,
        s=getattr(args, "s", None) or settings.grids.s,
        node_cap=getattr(args, "node_cap", None) or settings.budget.pwit_node_cap,
        method=getattr(args, "method", None) or settings.pwit.method,
        j_max=getattr(args, "j_max", None) or settings.budget.limit_rank_j_max,
        r_max=getattr(args, "r_max", None) or settings.pwit.rank_reference_r_max,
        reference_reps=getattr(args, "reference_reps", None) or settings.pwit.rank_reference_reps,
    )
    for name in ("kind", "allow_odd", "engine", "scale", "m", "split_m"):
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = value
    return fields


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def print_result(result: ExperimentResult) -> None:
    config = result.config
    print(f"\n{'='*60}")
    print(f"{config.command.value}  seed={config.seed}  reps={config.reps}")
    print(f"{'='*60}")
    for name in sorted(result.estimates):
        entry = result.estimates[name]
        line = f"{name}: {_format_value(entry['value'])}"
        if entry.get("se") is not None:
            line += f" (se {_format_value(entry['se'])})"
        print(line)
    if result.verdicts:
        print(f"{'-'*60}")
        for name in sorted(result.verdicts):
            print(f"{name}: {'PASS' if result.verdicts[name] else 'FAIL'}")
    print(f"{'='*60}\n")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    try:
        settings = load_settings(args.config)
        if args.command == "verify":
            report = verify(args.level, args.seed, settings, args.threads, only=args.criteria)
            print(report.format(), end="")
            if args.out_csv:
                report.table().to_csv(args.out_csv, index=False, lineterminator="\n")
            return EXIT_OK if report.passed else EXIT_FAILED

        config = build_config(**config_fields(args, settings))
        result = run(config, settings)
        print_result(result)
        return EXIT_OK
    except (ConfigurationError, GraphError, BudgetExceededError, EstimationError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
