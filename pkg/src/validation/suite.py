"""
The acceptance suite behind ``verify``.

Every criterion draws from streams derived from the suite seed, so a repeated
run with the same seed and level produces the same report.
"""

import logging
import math
from typing import List, Optional

import numpy as np

from src.config import LabSettings, load_settings
from src.cost_process.kinds import GraphKind
from src.cost_process.limits import GUMBEL_LOCATION, gumbel_cdf, limit_mgf_complete, typical_cdf
from src.cost_process.moments import exact_total_moments
from src.experiments.config import build_config
from src.experiments.output import format_csv, format_json
from src.experiments.runner import run
from src.experiments.studies import (
    ReplicateTask,
    corr_rows,
    cost_replicate,
    interlacing_rows,
    limit_rank_block,
    oracle_rows,
    overlap_replicate,
    rank_replicate,
    tail_rows,
    tree_replicate,
    typical_replicate,
)
from src.perturbation.experiments import overlap_lower_bound
from src.stats.estimators import confidence_for, moments_ci, pearson_corr_ci, proportion_ci
from src.stats.goodness_of_fit import (
    EcdfSummary,
    ks_one_sample,
    ks_one_sample_critical,
    ks_two_sample,
    ks_two_sample_critical,
)
from src.stats.quadrature import rank_one_probability
from src.validation.criterion import (
    Check,
    Criterion,
    FunctionCriterion,
    SuiteReport,
    VerifyContext,
    VerifyLevel,
    check_below,
    check_between,
    check_count,
    check_within,
)

logger = logging.getLogger(__name__)

ORACLE_SIZES = [("bipartite", 2), ("bipartite", 3), ("bipartite", 4), ("bipartite", 5),
                ("complete", 4), ("complete", 6)]
TAIL_EPS = 0.5
CORR_EPS = 0.5


def _task(key: str, fn, count: int, **params) -> ReplicateTask:
    return ReplicateTask(key=f"verify:{key}", fn=fn, params=params, indices=range(count))


def _totals(context: VerifyContext, key: str, kind: str, n: int, engine: str, reps: int) -> np.ndarray:
    task = _task(
        key, cost_replicate, reps,
        n=n, kind=kind, engine=engine, scale="unit", allow_odd=False,
        max_full_graph_n=context.settings.budget.max_full_graph_n,
    )
    return context.run_tasks([task])["total_cost"].to_numpy(dtype=float)


def _gof_threshold(fixed: float, size: int, context: VerifyContext) -> float:
    return max(fixed, ks_one_sample_critical(size, context.settings.thresholds.ks_alpha))


def _variance_tolerance(context: VerifyContext, target: float, variance_se: float) -> float:
    thresholds = context.settings.thresholds
    return max(thresholds.variance_relative * target, thresholds.se_multiplier * variance_se)


def _trend_check(name: str, values: List[float], ses: List[float], k: float, increasing: bool) -> Check:
    ok = True
    for i in range(len(values) - 1):
        slack = k * math.hypot(ses[i], ses[i + 1])
        step = values[i + 1] - values[i]
        ok &= step >= -slack if increasing else step <= slack
    return Check(
        name=name,
        expected=("nondecreasing" if increasing else "nonincreasing") + f" ({k:g} SE slack)",
        observed=", ".join(f"{v:.4f}" for v in values),
        passed=bool(ok),
    )


def uniqueness_oracle(context: VerifyContext) -> List[Check]:
    instances = context.scale.oracle_instances
    tasks = [_task(f"oracle:{kind}:n={n}", oracle_rows, instances, n=n, kind=kind) for kind, n in ORACLE_SIZES]
    frame = context.run_tasks(tasks)
    checks = []
    for (kind, n), group in frame.groupby(["kind", "n"], sort=True):
        checks.append(check_count(f"{kind} n={n}", int(group["matches_greedy"].sum()), len(group)))
    return checks


def engine_equivalence(context: VerifyContext) -> List[Check]:
    scale = context.scale
    exact = _totals(context, "engines:exact", "bipartite", scale.engine_n, "exact", scale.engine_reps)
    full = _totals(context, "engines:full", "bipartite", scale.engine_n, "full-graph", scale.engine_reps)
    critical = ks_two_sample_critical(exact.size, full.size, context.settings.thresholds.ks_alpha)
    return [check_below("two-sample KS, full-graph vs exact", ks_two_sample(exact, full), critical)]


def total_cost_moments(context: VerifyContext) -> List[Check]:
    scale = context.scale
    kind = GraphKind.bipartite(scale.moments_n)
    exact = exact_total_moments(kind)
    est = moments_ci(_totals(context, "moments", "bipartite", kind.n, "exact", scale.moments_reps))
    k = context.settings.thresholds.se_multiplier
    return [
        check_within("mean vs H_n", est.mean, exact.mean, k * est.mean_se),
        check_within(
            "variance vs sum 1/k^2", est.variance, exact.variance,
            _variance_tolerance(context, exact.variance, est.variance_se),
        ),
        check_within("sum 1/k^2 vs pi^2/6", exact.variance, math.pi ** 2 / 6.0, 1e-4),
    ]


def gumbel_limit(context: VerifyContext) -> List[Check]:
    scale = context.scale
    kind = GraphKind.bipartite(scale.moments_n)
    totals = _totals(context, "gumbel", "bipartite", kind.n, "exact", scale.moments_reps)
    centred = totals - exact_total_moments(kind).mean
    distance = ks_one_sample(centred, lambda x: gumbel_cdf(x, GUMBEL_LOCATION, 1.0))
    threshold = _gof_threshold(context.settings.thresholds.gumbel_ks, totals.size, context)
    return [check_below("KS of C - H_n vs Gumbel(-gamma, 1)", distance, threshold)]


def typical_cost_law(context: VerifyContext) -> List[Check]:
    scale = context.scale
    task = _task(
        "typical", typical_replicate, scale.typical_reps,
        n=scale.typical_n, engine="exact", max_full_graph_n=context.settings.budget.max_full_graph_n,
    )
    values = context.run_tasks([task])["scaled_cost"].to_numpy(dtype=float)
    distance = EcdfSummary.from_sample(values).sup_distance(typical_cdf)
    threshold = _gof_threshold(context.settings.thresholds.typical_sup, values.size, context)
    return [check_below("ECDF sup-distance vs x/(1+x)", distance, threshold)]


def finite_rank(context: VerifyContext) -> List[Check]:
    scale = context.scale
    task = _task(
        "rank", rank_replicate, scale.rank_matchings,
        n=scale.rank_n, kind="bipartite", max_full_graph_n=context.settings.budget.max_full_graph_n,
    )
    ranks = context.run_tasks([task])["rank"].to_numpy()
    p_one = float(np.mean(ranks == 1))
    return [
        check_within(
            f"P(rank=1) at n={scale.rank_n}", p_one, rank_one_probability(),
            context.settings.thresholds.rank_one_finite,
        )
    ]


def limit_rank(context: VerifyContext) -> List[Check]:
    scale, thresholds = context.scale, context.settings.thresholds
    block = context.settings.budget.scalar_block
    reps = scale.limit_rank_reps
    task = _task(
        "limit-rank", limit_rank_block, math.ceil(reps / block),
        block=block, reps=reps, j_max=context.settings.budget.limit_rank_j_max,
    )
    ranks = context.run_tasks([task])["rank"].to_numpy(dtype=float)
    checks = [
        check_within("P(R=1)", float(np.mean(ranks == 1)), rank_one_probability(), thresholds.rank_one_limit)
    ]
    lower, upper = thresholds.rank_tail_band
    for r in thresholds.rank_tail_r:
        checks.append(check_between(f"{r}*P(R>={r})", r * float(np.mean(ranks >= r)), lower, upper))
    return checks


def _trees(context: VerifyContext, key: str, s: float, reps: int):
    task = _task(
        key, tree_replicate, reps,
        s=s, node_cap=context.settings.budget.pwit_node_cap, method=context.settings.pwit.method,
    )
    frame = context.run_tasks([task])
    return frame[~frame["capped"].astype(bool)]


def pwit_size_law(context: VerifyContext) -> List[Check]:
    k = context.settings.thresholds.se_multiplier
    checks = []
    for s in (1.0, 2.0):
        trees = _trees(context, f"pwit-size:s={s!r}", s, context.scale.pwit_trees)
        est = moments_ci(trees["size"].to_numpy(dtype=float))
        checks.append(check_within(f"mean size at s={s:g} vs e^s", est.mean, math.exp(s), k * est.mean_se))
        if s == 2.0:
            for depth in range(1, 5):
                counts = moments_ci(trees[f"depth_{depth}"].to_numpy(dtype=float))
                checks.append(
                    check_within(
                        f"depth-{depth} count at s=2 vs 2^k/k!", counts.mean,
                        s ** depth / math.factorial(depth), k * counts.mean_se,
                    )
                )
    return checks


def root_cost_law(context: VerifyContext) -> List[Check]:
    thresholds = context.settings.thresholds
    s = context.scale.root_s
    trees = _trees(context, f"pwit-root:s={s!r}", s, context.scale.root_trees)
    costs = trees["root_cost"].to_numpy(dtype=float)
    lower, upper = thresholds.root_cost_interval
    distance = EcdfSummary.from_sample(costs).sup_distance(typical_cdf, lower=lower, upper=min(upper, s))
    unmatched = proportion_ci(int(np.isinf(costs).sum()), costs.size)
    rank_one = proportion_ci(int((trees["root_rank"] == 1).sum()), len(trees))
    k = thresholds.se_multiplier
    return [
        check_below(
            f"root-cost ECDF sup-distance on [{lower:g}, {min(upper, s):g}]",
            distance, _gof_threshold(thresholds.root_cost_sup, costs.size, context),
        ),
        check_within(
            "root unmatched frequency vs 1/(1+s)", unmatched.value, 1.0 / (1.0 + s),
            max(thresholds.root_unmatched, k * unmatched.se),
        ),
        check_within("root rank-1 frequency vs P(R=1)", rank_one.value, rank_one_probability(), k * rank_one.se),
    ]


def interlacing(context: VerifyContext) -> List[Check]:
    scale = context.scale
    task = _task(
        "interlacing", interlacing_rows, scale.interlacing_instances,
        n=scale.interlacing_n, kind="bipartite", max_full_graph_n=context.settings.budget.max_full_graph_n,
    )
    holds = context.run_tasks([task])["holds"]
    return [check_count("Y_k <= Y_k^u <= Y_{k+1} over all instances and vertices", int(holds.sum()), len(holds))]


def overlap_trend(context: VerifyContext) -> List[Check]:
    scale, thresholds = context.scale, context.settings.thresholds
    eps_grid = sorted({0.0, *context.settings.grids.eps})
    task = _task(
        f"overlap:n={scale.overlap_n}", overlap_replicate, scale.overlap_reps,
        n=scale.overlap_n, eps_grid=eps_grid, max_full_graph_n=context.settings.budget.max_full_graph_n,
    )
    frame = context.run_tasks([task])
    at_zero = frame[frame["eps"] == 0.0]
    means, ses = [], []
    for eps in eps_grid:
        if eps == 0.0:
            continue
        est = moments_ci(frame.loc[frame["eps"] == eps, "overlap"].to_numpy(dtype=float))
        means.append(est.mean)
        ses.append(est.mean_se)
    bounds = ", ".join(
        f"{overlap_lower_bound(eps, thresholds.overlap_bound_constant):.3f}" for eps in eps_grid if eps > 0
    )
    trend = _trend_check(
        f"mean overlap over eps={[e for e in eps_grid if e > 0]}", means, ses,
        thresholds.se_multiplier, increasing=False,
    )
    trend.observed += f" (bound 1-C/log(1/eps): {bounds})"
    return [
        check_count("overlap exactly 1 at eps=0", int((at_zero["overlap"] == 1.0).sum()), len(at_zero)),
        trend,
    ]


def tail_trend(context: VerifyContext) -> List[Check]:
    scale = context.scale
    tasks = [
        _task(f"tail:n={n}", tail_rows, scale.tail_reps, n=n, m=1, eps=TAIL_EPS) for n in scale.tail_n
    ]
    frame = context.run_tasks(tasks)
    disjoint, disjoint_se, survival, survival_se = [], [], [], []
    for n in scale.tail_n:
        group = frame[frame["n"] == n]
        vertex = proportion_ci(int(group["vertex_disjoint"].sum()), len(group))
        survived = proportion_ci(int((group["edges_survived"] > 0).sum()), len(group))
        disjoint.append(vertex.value)
        disjoint_se.append(vertex.se)
        survival.append(survived.value)
        survival_se.append(survived.se)
    k = context.settings.thresholds.se_multiplier
    return [
        _trend_check(f"vertex-disjoint frequency over n={scale.tail_n}", disjoint, disjoint_se, k, True),
        _trend_check(f"top-edge survival over n={scale.tail_n}", survival, survival_se, k, False),
    ]


def _correlation(context: VerifyContext, n: int, eps: float):
    task = _task(f"corr:n={n}:eps={eps!r}", corr_rows, context.scale.corr_reps, n=n, eps=eps, split_m=None)
    frame = context.run_tasks([task])
    # the interval spans the same ±k SE band as every other check
    confidence = confidence_for(context.settings.thresholds.se_multiplier)
    return pearson_corr_ci(frame[["c0", "ceps"]].to_numpy(dtype=float), confidence=confidence)


def correlation_trend(context: VerifyContext) -> List[Check]:
    grid = context.scale.corr_n
    at_zero = _correlation(context, grid[0], 0.0)
    at_one = _correlation(context, grid[0], 1.0)
    trend = [_correlation(context, n, CORR_EPS) for n in grid]
    decreasing = all(
        nxt.correlation <= prev.correlation or nxt.ci[0] <= prev.ci[1]
        for prev, nxt in zip(trend, trend[1:])
    )
    return [
        Check("corr at eps=0", "exactly 1", f"{at_zero.correlation:.6f}", at_zero.correlation == 1.0),
        Check(
            "CI at eps=1 covers 0", "lo <= 0 <= hi",
            f"[{at_one.ci[0]:.4f}, {at_one.ci[1]:.4f}]", at_one.ci[0] <= 0.0 <= at_one.ci[1],
        ),
        Check(
            f"corr at eps={CORR_EPS:g} over n={grid}", "decreasing (CI-overlap slack)",
            ", ".join(f"{c.correlation:.4f}" for c in trend), decreasing,
        ),
    ]


def complete_graph_variant(context: VerifyContext) -> List[Check]:
    scale = context.scale
    k = context.settings.thresholds.se_multiplier
    kind = GraphKind.complete(scale.complete_n)
    exact = exact_total_moments(kind)
    totals = _totals(context, "complete", "complete", kind.n, "exact", scale.complete_reps)
    est = moments_ci(totals)
    checks = [
        check_within("mean vs sum 1/(2k-1)", est.mean, exact.mean, k * est.mean_se),
        check_within(
            "variance vs sum 1/(2k-1)^2", est.variance, exact.variance,
            _variance_tolerance(context, exact.variance, est.variance_se),
        ),
    ]
    centred = totals - exact.mean
    for t in (-1.0, -0.5, 0.5):
        mgf = moments_ci(np.exp(t * centred))
        checks.append(check_within(f"MGF at t={t:g}", mgf.mean, limit_mgf_complete(t), k * mgf.mean_se))
    return checks


def reproducibility(context: VerifyContext) -> List[Check]:
    requests = [
        dict(command="simulate-cost", n=[100], reps=200, engine="full-graph"),
        dict(command="overlap", n=[50], eps=[0.0, 0.1], reps=5),
    ]
    checks = []
    for request in requests:
        outputs = []
        for threads in (1, context.threads):
            config = build_config(seed=context.seed, threads=threads, **request)
            result = run(config, context.settings)
            outputs.append((format_csv(result), format_json(result)))
        first, second = outputs
        checks.append(
            Check(
                f"{request['command']} CSV and JSON, threads 1 vs {context.threads}",
                "byte-identical",
                "identical" if first == second else "differ",
                first == second,
            )
        )
    return checks


CRITERIA: List[Criterion] = [
    FunctionCriterion(1, "Uniqueness oracle", uniqueness_oracle),
    FunctionCriterion(2, "Engine equivalence", engine_equivalence),
    FunctionCriterion(3, "Total cost mean and variance", total_cost_moments),
    FunctionCriterion(4, "Gumbel limit of the total cost", gumbel_limit),
    FunctionCriterion(5, "Typical cost law", typical_cost_law),
    FunctionCriterion(6, "Finite-n rank", finite_rank),
    FunctionCriterion(7, "Limit rank law", limit_rank),
    FunctionCriterion(8, "PWIT size law", pwit_size_law),
    FunctionCriterion(9, "PWIT root cost law", root_cost_law),
    FunctionCriterion(10, "Interlacing under vertex removal", interlacing),
    FunctionCriterion(11, "Overlap under perturbation", overlap_trend),
    FunctionCriterion(12, "Tail disjointness trend", tail_trend),
    FunctionCriterion(13, "Total cost decorrelation", correlation_trend),
    FunctionCriterion(14, "Complete graph variant", complete_graph_variant),
    FunctionCriterion(15, "Reproducibility", reproducibility),
]


def verify(
    level: VerifyLevel = VerifyLevel.QUICK,
    seed: int = 0,
    settings: Optional[LabSettings] = None,
    threads: int = 1,
    only: Optional[List[int]] = None,
) -> SuiteReport:
    """Run the acceptance suite (optionally a subset of criterion numbers)."""
    context = VerifyContext(VerifyLevel(level), seed, settings or load_settings(), threads)
    selected = [c for c in CRITERIA if only is None or c.number in only]
    logger.info(f"Verifying {len(selected)} criteria at level {context.level.value}, seed={seed}")
    return SuiteReport(context.level, seed, [criterion.run(context) for criterion in selected])
