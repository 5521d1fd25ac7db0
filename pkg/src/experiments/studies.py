"""
Replicate functions and summaries for every CLI subcommand.

A study plans :class:`ReplicateTask` objects (one per grid point), the runner
executes them replicate by replicate, each with its own derived stream, and
the study turns the collected rows into estimates and verdicts. Replicate
functions are module-level so that they pickle into worker processes.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.config import LabSettings
from src.core.errors import EstimationError
from src.core.graph import CostScale, GraphFamily, make_graph, sample_costs
from src.core.matching import greedy_stable_matching, matching_with_vertex_removed, rank_profile
from src.core.oracle import enumerate_stable_oracle
from src.cost_process.kinds import GraphKind
from src.cost_process.limits import (
    GUMBEL_LOCATION,
    finite_mgf,
    gumbel_cdf,
    limit_mgf_complete,
    typical_cdf,
)
from src.cost_process.moments import exact_total_moments
from src.cost_process.samplers import (
    direct_matching_sample,
    sample_total_cost,
    typical_cost_from_graph,
    typical_cost_sample,
)
from src.experiments.config import Engine, ExperimentConfig, Subcommand
from src.perturbation.experiments import (
    CorrReplicate,
    TailReplicate,
    corr_replicate,
    covariance_split,
    overlap_fraction,
    overlap_lower_bound,
    summarize_corr,
    summarize_tail,
    tail_replicate,
)
from src.perturbation.instance import make_instance
from src.pwit.rank import rank_reference, root_match_on_truncation, sample_limit_ranks
from src.pwit.tree import sample_descending_tree
from src.stats.estimators import MIN_CORRELATION_PAIRS, moments_ci, proportion_ci
from src.stats.goodness_of_fit import EcdfSummary, ks_one_sample, ks_one_sample_critical
from src.stats.quadrature import rank_one_probability
from src.stats.streams import RngStream, derive_stream, stream_id_for

logger = logging.getLogger(__name__)

Row = Dict[str, Any]
Estimates = Dict[str, Dict[str, Any]]
Verdicts = Dict[str, bool]

TREE_DEPTHS = 4
MGF_POINTS = (-1.0, -0.5, 0.5)


@dataclass(frozen=True)
class ReplicateTask:
    """Replicates ``indices`` of stream family ``key``; each runs ``fn(index, stream, **params)``."""

    key: str
    fn: Callable[..., List[Row]]
    params: Dict[str, Any]
    indices: range

    def split(self, block: int) -> List["ReplicateTask"]:
        return [
            ReplicateTask(self.key, self.fn, self.params, self.indices[i:i + block])
            for i in range(0, len(self.indices), block)
        ]


def run_task(seed: int, task: ReplicateTask) -> List[Row]:
    """Execute a task; replicate ``k`` always draws from stream ``(seed, key, k)``."""
    rows: List[Row] = []
    for index in task.indices:
        stream = derive_stream(seed, stream_id_for(task.key, index))
        rows.extend(task.fn(index, stream, **task.params))
    return rows


def estimate(
    value: Optional[float],
    se: Optional[float] = None,
    ci: Optional[Sequence[float]] = None,
    reps: Optional[int] = None,
) -> Dict[str, Any]:
    return {
        "value": value,
        "se": se,
        "ci": [float(c) for c in ci] if ci is not None else None,
        "reps": reps,
    }


def mean_estimate(values: Iterable[float]) -> Dict[str, Any]:
    """Mean with SE and CI; a bare mean for a single observation."""
    sample = np.asarray(list(values), dtype=float)
    if sample.size < 2:
        return estimate(float(sample.mean()), reps=int(sample.size))
    est = moments_ci(sample)
    return estimate(est.mean, est.mean_se, est.mean_ci, est.size)


def variance_estimate(values: Iterable[float]) -> Dict[str, Any]:
    est = moments_ci(np.asarray(list(values), dtype=float))
    return estimate(est.variance, est.variance_se, est.variance_ci, est.size)


def proportion_estimate(flags: Iterable[bool]) -> Dict[str, Any]:
    flags = np.asarray(list(flags), dtype=bool)
    est = proportion_ci(int(flags.sum()), int(flags.size))
    return estimate(est.value, est.se, est.ci, est.trials)


def gof_threshold(fixed: float, size: int, alpha: float) -> float:
    """The fixed tolerance, widened to the KS critical value for small samples."""
    return max(fixed, ks_one_sample_critical(size, alpha))


def within_se(observed: Dict[str, Any], expected: float, k: float) -> bool:
    se = observed["se"] or 0.0
    return abs(observed["value"] - expected) <= k * se


def monotone(entries: Sequence[Dict[str, Any]], k: float, increasing: bool) -> bool:
    """Pairwise trend check with ``k`` combined-SE slack."""
    for prev, nxt in zip(entries, entries[1:]):
        slack = k * math.hypot(prev["se"] or 0.0, nxt["se"] or 0.0)
        step = nxt["value"] - prev["value"]
        if (step < -slack) if increasing else (step > slack):
            return False
    return True


@dataclass(frozen=True)
class Study:
    columns: Callable[[ExperimentConfig], List[str]]
    plan: Callable[[ExperimentConfig, LabSettings], List[ReplicateTask]]
    summarize: Callable[[ExperimentConfig, LabSettings, pd.DataFrame], Tuple[Estimates, Verdicts]]


def _fixed(columns: List[str]) -> Callable[[ExperimentConfig], List[str]]:
    return lambda config: list(columns)


# simulate-cost


def cost_replicate(
    index: int,
    stream: RngStream,
    n: int,
    kind: str,
    engine: str,
    scale: str,
    allow_odd: bool,
    max_full_graph_n: int,
) -> List[Row]:
    graph_kind = GraphKind(GraphFamily(kind), n, allow_odd)
    if engine == Engine.EXACT.value:
        total = sample_total_cost(graph_kind, stream)
    elif engine == Engine.DIRECT.value:
        total = direct_matching_sample(graph_kind, stream).total
    else:
        graph = sample_costs(graph_kind.make_graph(max_full_graph_n), stream)
        total = greedy_stable_matching(graph).profile.total
    if CostScale(scale) is CostScale.MEAN_N:
        total *= n
    return [{"replicate": index, "n": n, "kind": kind, "engine": engine, "total_cost": total}]


def _plan_costs(config: ExperimentConfig, settings: LabSettings) -> List[ReplicateTask]:
    kind, engine = config.kind.value, config.engine.value
    return [
        ReplicateTask(
            key=f"simulate-cost:{kind}:{engine}:n={n}",
            fn=cost_replicate,
            params=dict(
                n=n,
                kind=kind,
                engine=engine,
                scale=config.scale.value,
                allow_odd=config.allow_odd,
                max_full_graph_n=settings.budget.max_full_graph_n,
            ),
            indices=range(config.reps),
        )
        for n in config.n
    ]


def _summarize_costs(
    config: ExperimentConfig, settings: LabSettings, frame: pd.DataFrame
) -> Tuple[Estimates, Verdicts]:
    estimates: Estimates = {}
    verdicts: Verdicts = {}
    k = settings.thresholds.se_multiplier
    for n, group in frame.groupby("n", sort=True):
        n = int(n)
        graph_kind = GraphKind(config.kind, n, config.allow_odd)
        factor = float(n) if config.scale is CostScale.MEAN_N else 1.0
        exact = exact_total_moments(graph_kind)
        totals = group["total_cost"].to_numpy(dtype=float)
        mean = mean_estimate(totals)
        estimates[f"n={n}:mean"] = mean
        estimates[f"n={n}:exact_mean"] = estimate(exact.mean * factor)
        estimates[f"n={n}:exact_variance"] = estimate(exact.variance * factor ** 2)
        if totals.size < 2:
            continue
        estimates[f"n={n}:variance"] = variance_estimate(totals)
        verdicts[f"n={n}:mean_within_se"] = within_se(mean, exact.mean * factor, k)
        if config.scale is CostScale.MEAN_N:
            continue
        centred = totals - exact.mean
        if graph_kind.is_bipartite:
            estimates[f"n={n}:gumbel_ks"] = estimate(
                ks_one_sample(centred, lambda x: gumbel_cdf(x, GUMBEL_LOCATION, 1.0)),
                reps=int(totals.size),
            )
        else:
            for t in MGF_POINTS:
                entry = mean_estimate(np.exp(t * centred))
                entry["limit"] = limit_mgf_complete(t)
                entry["finite"] = finite_mgf(graph_kind, t)
                estimates[f"n={n}:mgf(t={t:g})"] = entry
    return estimates, verdicts


# typical-cost


def typical_replicate(
    index: int, stream: RngStream, n: int, engine: str, max_full_graph_n: int
) -> List[Row]:
    if engine == Engine.FULL_GRAPH.value:
        value = typical_cost_from_graph(n, stream, max_full_graph_n)
    else:
        value = typical_cost_sample(n, stream)
    return [{"replicate": index, "n": n, "scaled_cost": value}]


def _plan_typical(config: ExperimentConfig, settings: LabSettings) -> List[ReplicateTask]:
    engine = config.engine.value
    return [
        ReplicateTask(
            key=f"typical-cost:{engine}:n={n}",
            fn=typical_replicate,
            params=dict(n=n, engine=engine, max_full_graph_n=settings.budget.max_full_graph_n),
            indices=range(config.reps),
        )
        for n in config.n
    ]


def _summarize_typical(
    config: ExperimentConfig, settings: LabSettings, frame: pd.DataFrame
) -> Tuple[Estimates, Verdicts]:
    estimates: Estimates = {}
    verdicts: Verdicts = {}
    thresholds = settings.thresholds
    for n, group in frame.groupby("n", sort=True):
        values = group["scaled_cost"].to_numpy(dtype=float)
        distance = EcdfSummary.from_sample(values).sup_distance(typical_cdf)
        threshold = gof_threshold(thresholds.typical_sup, values.size, thresholds.ks_alpha)
        entry = estimate(distance, reps=int(values.size))
        entry["threshold"] = threshold
        estimates[f"n={int(n)}:sup_distance"] = entry
        estimates[f"n={int(n)}:median"] = estimate(float(np.median(values)), reps=int(values.size))
        verdicts[f"n={int(n)}:typical_law"] = distance < threshold
    return estimates, verdicts


# rank


def rank_replicate(
    index: int, stream: RngStream, n: int, kind: str, max_full_graph_n: int
) -> List[Row]:
    graph = sample_costs(make_graph(kind, n, max_full_graph_n=max_full_graph_n), stream)
    profile = rank_profile(graph, greedy_stable_matching(graph).matching)
    return [
        {"replicate": index, "n": n, "vertex": graph.vertex_label(v), "rank": r}
        for v, r in zip(profile.vertices.tolist(), profile.ranks.tolist())
    ]


def _plan_rank(config: ExperimentConfig, settings: LabSettings) -> List[ReplicateTask]:
    kind = config.kind.value
    return [
        ReplicateTask(
            key=f"rank:{kind}:n={n}",
            fn=rank_replicate,
            params=dict(n=n, kind=kind, max_full_graph_n=settings.budget.max_full_graph_n),
            indices=range(config.reps),
        )
        for n in config.n
    ]


def _rank_tail_estimates(
    prefix: str, ranks: np.ndarray, r_values: Iterable[int], estimates: Estimates
) -> Dict[int, Dict[str, Any]]:
    scaled = {}
    for r in r_values:
        tail = proportion_estimate(ranks >= r)
        entry = estimate(r * tail["value"], r * tail["se"], reps=tail["reps"])
        estimates[f"{prefix}r*P(rank>={r})"] = entry
        scaled[r] = entry
    return scaled


def _summarize_rank(
    config: ExperimentConfig, settings: LabSettings, frame: pd.DataFrame
) -> Tuple[Estimates, Verdicts]:
    estimates: Estimates = {}
    verdicts: Verdicts = {}
    target = rank_one_probability()
    for n, group in frame.groupby("n", sort=True):
        ranks = group["rank"].to_numpy(dtype=float)
        p_one = proportion_estimate(ranks == 1)
        p_one["target"] = target
        estimates[f"n={int(n)}:P(rank=1)"] = p_one
        _rank_tail_estimates(f"n={int(n)}:", ranks, settings.thresholds.rank_tail_r, estimates)
        # small graphs are reported but carry no limit verdict
        if n >= settings.thresholds.rank_one_min_n:
            verdicts[f"n={int(n)}:rank_one"] = (
                abs(p_one["value"] - target) <= settings.thresholds.rank_one_finite
            )
    return estimates, verdicts


# pwit-tree


def tree_replicate(
    index: int, stream: RngStream, s: float, node_cap: int, method: str
) -> List[Row]:
    tree = sample_descending_tree(s, node_cap, stream)
    row: Row = {"replicate": index, "s": s, "size": tree.size, "capped": tree.truncated}
    counts = tree.depth_counts()
    for depth in range(1, TREE_DEPTHS + 1):
        row[f"depth_{depth}"] = int(counts[depth]) if depth < counts.size else 0
    if tree.truncated:
        row.update(root_matched=False, root_cost=math.nan, root_rank=math.nan)
    else:
        outcome = root_match_on_truncation(tree, method)
        row.update(root_matched=outcome.matched, root_cost=outcome.cost, root_rank=outcome.rank)
    return [row]


def _plan_tree(config: ExperimentConfig, settings: LabSettings) -> List[ReplicateTask]:
    return [
        ReplicateTask(
            key=f"pwit-tree:s={s!r}",
            fn=tree_replicate,
            params=dict(s=s, node_cap=config.node_cap, method=config.method),
            indices=range(config.reps),
        )
        for s in config.s
    ]


def _summarize_tree(
    config: ExperimentConfig, settings: LabSettings, frame: pd.DataFrame
) -> Tuple[Estimates, Verdicts]:
    estimates: Estimates = {}
    verdicts: Verdicts = {}
    thresholds = settings.thresholds
    k = thresholds.se_multiplier
    for s, group in frame.groupby("s", sort=True):
        s = float(s)
        prefix = f"s={s:g}:"
        estimates[prefix + "capped_fraction"] = proportion_estimate(group["capped"])
        valid = group[~group["capped"].astype(bool)]
        if len(valid) < 2:
            logger.warning(f"Fewer than two uncapped trees at s={s}; skipping summaries")
            continue

        size = mean_estimate(valid["size"])
        size["target"] = math.exp(s)
        estimates[prefix + "mean_size"] = size
        verdicts[prefix + "mean_size"] = within_se(size, math.exp(s), k)
        for depth in range(1, TREE_DEPTHS + 1):
            expected = s ** depth / math.factorial(depth)
            entry = mean_estimate(valid[f"depth_{depth}"])
            entry["target"] = expected
            estimates[prefix + f"depth_{depth}_count"] = entry
            verdicts[prefix + f"depth_{depth}_count"] = within_se(entry, expected, k)

        unmatched = proportion_estimate(~valid["root_matched"].astype(bool))
        unmatched["target"] = 1.0 / (1.0 + s)
        estimates[prefix + "root_unmatched"] = unmatched
        tolerance = max(thresholds.root_unmatched, k * unmatched["se"])
        verdicts[prefix + "root_unmatched"] = abs(unmatched["value"] - 1.0 / (1.0 + s)) <= tolerance

        lower, upper = thresholds.root_cost_interval
        costs = valid["root_cost"].to_numpy(dtype=float)
        distance = EcdfSummary.from_sample(costs).sup_distance(
            typical_cdf, lower=lower, upper=min(upper, s)
        )
        entry = estimate(distance, reps=int(costs.size))
        entry["threshold"] = gof_threshold(thresholds.root_cost_sup, costs.size, thresholds.ks_alpha)
        estimates[prefix + "root_cost_sup_distance"] = entry
        verdicts[prefix + "root_cost_law"] = distance < entry["threshold"]
        estimates[prefix + "P(root_rank=1)"] = proportion_estimate(valid["root_rank"] == 1)
    return estimates, verdicts


# pwit-rank


def limit_rank_block(
    index: int, stream: RngStream, block: int, reps: int, j_max: int
) -> List[Row]:
    start = index * block
    ranks = sample_limit_ranks(stream, min(block, reps - start), j_max)
    return [{"replicate": start + i, "rank": r} for i, r in enumerate(ranks.tolist())]


def _plan_limit_rank(config: ExperimentConfig, settings: LabSettings) -> List[ReplicateTask]:
    block = settings.budget.scalar_block
    return [
        ReplicateTask(
            key="pwit-rank",
            fn=limit_rank_block,
            params=dict(block=block, reps=config.reps, j_max=config.j_max),
            indices=range(math.ceil(config.reps / block)),
        )
    ]


def _summarize_limit_rank(
    config: ExperimentConfig, settings: LabSettings, frame: pd.DataFrame
) -> Tuple[Estimates, Verdicts]:
    thresholds = settings.thresholds
    ranks = frame["rank"].to_numpy(dtype=float)
    estimates: Estimates = {}
    verdicts: Verdicts = {}

    target = rank_one_probability()
    p_one = proportion_estimate(ranks == 1)
    p_one["target"] = target
    estimates["P(R=1)"] = p_one
    verdicts["rank_one"] = abs(p_one["value"] - target) <= thresholds.rank_one_limit
    estimates["overflow"] = estimate(int(np.isinf(ranks).sum()), reps=int(ranks.size))
    lo, hi = thresholds.rank_tail_band
    for r, entry in _rank_tail_estimates("", ranks, thresholds.rank_tail_r, estimates).items():
        verdicts[f"r*P(R>={r})_in_band"] = lo <= entry["value"] <= hi

    stream = derive_stream(config.seed, stream_id_for("pwit-rank:reference", 0))
    reference = rank_reference(config.r_max, stream, reps=config.reference_reps)
    for row in reference.rows:
        estimates[f"reference:r={row.r}:P(R>=r)"] = estimate(
            row.at_least, row.at_least_se, reps=reference.reps
        )
        estimates[f"reference:r={row.r}:tail_display"] = estimate(row.tail_display)
        estimates[f"reference:r={row.r}:discrepancy"] = estimate(row.discrepancy)
    return estimates, verdicts


# overlap


def overlap_replicate(
    index: int, stream: RngStream, n: int, eps_grid: List[float], max_full_graph_n: int
) -> List[Row]:
    instance = make_instance(n, stream, max_full_graph_n=max_full_graph_n)
    base = None
    rows = []
    for eps in eps_grid:
        result = overlap_fraction(instance, eps, base=base)
        base = result.base
        rows.append(
            {
                "replicate": index,
                "n": n,
                "eps": eps,
                "overlap": result.overlap,
                "c0": result.c0,
                "ceps": result.ceps,
                "partner_survival": result.partner_survival,
            }
        )
    return rows


def _plan_overlap(config: ExperimentConfig, settings: LabSettings) -> List[ReplicateTask]:
    eps_grid = sorted(config.eps)
    return [
        ReplicateTask(
            key=f"overlap:n={n}",
            fn=overlap_replicate,
            params=dict(n=n, eps_grid=eps_grid, max_full_graph_n=settings.budget.max_full_graph_n),
            indices=range(config.reps),
        )
        for n in config.n
    ]


def _summarize_overlap(
    config: ExperimentConfig, settings: LabSettings, frame: pd.DataFrame
) -> Tuple[Estimates, Verdicts]:
    estimates: Estimates = {}
    verdicts: Verdicts = {}
    constant = settings.thresholds.overlap_bound_constant
    for n, by_n in frame.groupby("n", sort=True):
        means = []
        for eps, group in by_n.groupby("eps", sort=True):
            prefix = f"n={int(n)},eps={eps:g}:"
            entry = mean_estimate(group["overlap"])
            entry["bound"] = overlap_lower_bound(float(eps), constant)
            estimates[prefix + "overlap"] = entry
            estimates[prefix + "partner_survival"] = mean_estimate(group["partner_survival"])
            means.append(entry)
            if eps == 0.0:
                verdicts[prefix + "identical"] = bool(
                    (group["overlap"] == 1.0).all() and (group["c0"] == group["ceps"]).all()
                )
        if len(means) > 1:
            verdicts[f"n={int(n)}:overlap_decreasing"] = monotone(
                means, settings.thresholds.se_multiplier, increasing=False
            )
    return estimates, verdicts


# tail


def tail_rows(index: int, stream: RngStream, n: int, m: int, eps: float) -> List[Row]:
    outcome = tail_replicate(n, m, eps, stream)
    return [
        {
            "replicate": index,
            "n": n,
            "m": m,
            "eps": eps,
            "edges_survived": outcome.edges_survived,
            "vertex_disjoint": outcome.vertex_disjoint,
            "edge_disjoint": outcome.edge_disjoint,
        }
    ]


def _plan_tail(config: ExperimentConfig, settings: LabSettings) -> List[ReplicateTask]:
    return [
        ReplicateTask(
            key=f"tail:n={n}:m={config.m}:eps={eps!r}",
            fn=tail_rows,
            params=dict(n=n, m=config.m, eps=eps),
            indices=range(config.reps),
        )
        for n in config.n
        for eps in config.eps
    ]


def _summarize_tail(
    config: ExperimentConfig, settings: LabSettings, frame: pd.DataFrame
) -> Tuple[Estimates, Verdicts]:
    estimates: Estimates = {}
    verdicts: Verdicts = {}
    k = settings.thresholds.se_multiplier
    verdicts["edge_disjoint_when_vertex_disjoint"] = bool(
        (frame["edge_disjoint"] | ~frame["vertex_disjoint"]).all()
    )
    for eps, by_eps in frame.groupby("eps", sort=True):
        disjoint, survival = [], []
        for n, group in by_eps.groupby("n", sort=True):
            summary = summarize_tail(
                [
                    TailReplicate(int(a), bool(b), bool(c))
                    for a, b, c in zip(
                        group["edges_survived"], group["vertex_disjoint"], group["edge_disjoint"]
                    )
                ]
            )
            prefix = f"n={int(n)},eps={eps:g}:"
            for name, est in (
                ("no_survivor", summary.no_survivor),
                ("vertex_disjoint", summary.vertex_disjoint),
                ("edge_disjoint", summary.edge_disjoint),
            ):
                estimates[prefix + name] = estimate(est.value, est.se, est.ci, est.trials)
            survived = estimate(1.0 - summary.no_survivor.value, summary.no_survivor.se)
            estimates[prefix + "edge_survival"] = dict(survived, reps=summary.reps)
            disjoint.append(estimates[prefix + "vertex_disjoint"])
            survival.append(survived)
        if len(disjoint) > 1:
            verdicts[f"eps={eps:g}:vertex_disjoint_nondecreasing"] = monotone(
                disjoint, k, increasing=True
            )
            verdicts[f"eps={eps:g}:edge_survival_nonincreasing"] = monotone(
                survival, k, increasing=False
            )
    return estimates, verdicts


# noise-corr


def corr_rows(
    index: int, stream: RngStream, n: int, eps: float, split_m: Optional[int]
) -> List[Row]:
    outcome = corr_replicate(n, eps, stream, split_m=split_m)
    row: Row = {"replicate": index, "n": n, "eps": eps, "c0": outcome.c0, "ceps": outcome.ceps}
    if split_m is not None:
        row.update(
            bulk0=outcome.bulk0,
            tail0=outcome.tail0,
            bulk_eps=outcome.bulk_eps,
            tail_eps=outcome.tail_eps,
        )
    return [row]


def _corr_columns(config: ExperimentConfig) -> List[str]:
    columns = ["replicate", "n", "eps", "c0", "ceps"]
    if config.split_m is not None:
        columns += ["bulk0", "tail0", "bulk_eps", "tail_eps"]
    return columns


def _plan_corr(config: ExperimentConfig, settings: LabSettings) -> List[ReplicateTask]:
    return [
        ReplicateTask(
            key=f"noise-corr:n={n}:eps={eps!r}",
            fn=corr_rows,
            params=dict(n=n, eps=eps, split_m=config.split_m),
            indices=range(config.reps),
        )
        for n in config.n
        for eps in config.eps
    ]


def _summarize_corr(
    config: ExperimentConfig, settings: LabSettings, frame: pd.DataFrame
) -> Tuple[Estimates, Verdicts]:
    estimates: Estimates = {}
    verdicts: Verdicts = {}
    for eps, by_eps in frame.groupby("eps", sort=True):
        trend = []
        for n, group in by_eps.groupby("n", sort=True):
            prefix = f"n={int(n)},eps={eps:g}:"
            replicates = [
                CorrReplicate(*values)
                for values in group[_corr_columns(config)[3:]].itertuples(index=False)
            ]
            if len(replicates) < MIN_CORRELATION_PAIRS:
                logger.warning(f"{prefix} only {len(replicates)} replicates; correlation skipped")
                continue
            try:
                corr = summarize_corr(replicates)
            except EstimationError as e:
                logger.warning(f"{prefix} correlation undefined: {e}")
                continue
            entry = estimate(corr.correlation, ci=corr.ci, reps=corr.size)
            estimates[prefix + "corr"] = entry
            trend.append(entry)
            if eps == 0.0:
                verdicts[prefix + "corr_is_one"] = corr.correlation == 1.0
            elif eps == 1.0:
                verdicts[prefix + "ci_covers_zero"] = corr.ci[0] <= 0.0 <= corr.ci[1]
            if config.split_m is not None:
                split = covariance_split(replicates)
                for name in ("total", "bulk_bulk", "bulk_tail", "tail_bulk", "tail_tail"):
                    estimates[prefix + f"cov_{name}"] = estimate(getattr(split, name))
        if 0.0 < eps < 1.0 and len(trend) > 1:
            verdicts[f"eps={eps:g}:corr_decreasing"] = all(
                nxt["value"] <= prev["value"] or nxt["ci"][0] <= prev["ci"][1]
                for prev, nxt in zip(trend, trend[1:])
            )
    return estimates, verdicts


# interlacing


def interlacing_rows(
    index: int, stream: RngStream, n: int, kind: str, max_full_graph_n: int
) -> List[Row]:
    graph = sample_costs(make_graph(kind, n, max_full_graph_n=max_full_graph_n), stream)
    y = greedy_stable_matching(graph).profile.values
    rows = []
    for u in range(graph.num_vertices):
        y_removed = matching_with_vertex_removed(graph, u)[1].values
        lower = min(y_removed.size, y.size)
        upper = min(y_removed.size, y.size - 1)
        holds = bool(
            np.all(y[:lower] <= y_removed[:lower]) and np.all(y_removed[:upper] <= y[1:upper + 1])
        )
        rows.append({"replicate": index, "n": n, "vertex": graph.vertex_label(u), "holds": holds})
    return rows


def _plan_interlacing(config: ExperimentConfig, settings: LabSettings) -> List[ReplicateTask]:
    kind = config.kind.value
    return [
        ReplicateTask(
            key=f"interlacing:{kind}:n={n}",
            fn=interlacing_rows,
            params=dict(n=n, kind=kind, max_full_graph_n=settings.budget.max_full_graph_n),
            indices=range(config.reps),
        )
        for n in config.n
    ]


def _summarize_interlacing(
    config: ExperimentConfig, settings: LabSettings, frame: pd.DataFrame
) -> Tuple[Estimates, Verdicts]:
    estimates: Estimates = {}
    verdicts: Verdicts = {}
    for n, group in frame.groupby("n", sort=True):
        estimates[f"n={int(n)}:holds"] = proportion_estimate(group["holds"])
        verdicts[f"n={int(n)}:interlacing"] = bool(group["holds"].all())
    return estimates, verdicts


# oracle


def oracle_rows(index: int, stream: RngStream, n: int, kind: str) -> List[Row]:
    graph = sample_costs(make_graph(kind, n), stream)
    stable = enumerate_stable_oracle(graph)
    greedy = greedy_stable_matching(graph).matching
    return [
        {
            "replicate": index,
            "kind": kind,
            "n": n,
            "stable_count": len(stable),
            "matches_greedy": len(stable) == 1 and stable[0] == greedy,
        }
    ]


def _plan_oracle(config: ExperimentConfig, settings: LabSettings) -> List[ReplicateTask]:
    kind = config.kind.value
    return [
        ReplicateTask(
            key=f"oracle:{kind}:n={n}",
            fn=oracle_rows,
            params=dict(n=n, kind=kind),
            indices=range(config.reps),
        )
        for n in config.n
    ]


def _summarize_oracle(
    config: ExperimentConfig, settings: LabSettings, frame: pd.DataFrame
) -> Tuple[Estimates, Verdicts]:
    estimates: Estimates = {}
    verdicts: Verdicts = {}
    for n, group in frame.groupby("n", sort=True):
        estimates[f"n={int(n)}:unique_and_greedy"] = proportion_estimate(group["matches_greedy"])
        verdicts[f"n={int(n)}:uniqueness"] = bool(group["matches_greedy"].all())
    return estimates, verdicts


STUDIES: Dict[Subcommand, Study] = {
    Subcommand.SIMULATE_COST: Study(
        _fixed(["replicate", "n", "kind", "engine", "total_cost"]), _plan_costs, _summarize_costs
    ),
    Subcommand.TYPICAL_COST: Study(
        _fixed(["replicate", "n", "scaled_cost"]), _plan_typical, _summarize_typical
    ),
    Subcommand.RANK: Study(_fixed(["replicate", "n", "vertex", "rank"]), _plan_rank, _summarize_rank),
    Subcommand.PWIT_TREE: Study(
        _fixed(["replicate", "s", "size", "capped"]), _plan_tree, _summarize_tree
    ),
    Subcommand.PWIT_RANK: Study(
        _fixed(["replicate", "rank"]), _plan_limit_rank, _summarize_limit_rank
    ),
    Subcommand.OVERLAP: Study(
        _fixed(["replicate", "n", "eps", "overlap", "c0", "ceps"]), _plan_overlap, _summarize_overlap
    ),
    Subcommand.TAIL: Study(
        _fixed(["replicate", "n", "m", "eps", "edges_survived", "vertex_disjoint", "edge_disjoint"]),
        _plan_tail,
        _summarize_tail,
    ),
    Subcommand.NOISE_CORR: Study(_corr_columns, _plan_corr, _summarize_corr),
    Subcommand.INTERLACING: Study(
        _fixed(["replicate", "n", "vertex", "holds"]), _plan_interlacing, _summarize_interlacing
    ),
    Subcommand.ORACLE: Study(
        _fixed(["replicate", "kind", "n", "stable_count", "matches_greedy"]),
        _plan_oracle,
        _summarize_oracle,
    ),
}
