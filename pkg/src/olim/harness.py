"""Batch evaluation: run policies over instance sets, compare against the
offline optimum, and check the additive competitive bound.

Every evaluated instance gets an ``opt`` row; each policy row carries its
cost, the empirical cost ratio against the optimum, the feasibility verdict,
and (for the two optimal online policies) the margin of

    cost  <=  alpha * cost(opt) + capacity * p_max.

Instances can be evaluated in parallel worker processes; results are reduced
in instance order, so the report is byte-identical for any worker count.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .baselines import no_str, on_fix, pre_day
from .batman import run_batman
from .batmanrate import run_batmanrate
from .core import InventorySpec, check_feasibility
from .offline import solve_opt
from .reservation import AlphaContext

# slack for the additive bound check (absolute, currency units)
BOUND_SLACK = 1e-6

FLOAT_FORMAT = "%.12g"

# policies whose schedules must satisfy the additive competitive bound
BOUNDED_POLICIES = ("batman", "batmanrate")

BUILTIN_POLICIES = ("opt", "batman", "batmanrate", "nostr", "onfix", "preday")


def check_competitive_bound(
    cost: float, opt_cost: float, alpha: float, capacity: float, p_max: float
) -> tuple[bool, float]:
    """Margin of the additive bound; passes when the margin is >= -slack."""
    margin = alpha * opt_cost + capacity * p_max - cost
    return margin >= -BOUND_SLACK, margin


def _cost_ratio(cost: float, opt_cost: float, cons: float) -> float:
    if opt_cost == 0.0:
        # a zero-demand day has zero optimal cost; the additive constant is
        # the only meaningful yardstick there
        return 1.0 if cost <= cons + BOUND_SLACK else math.inf
    return cost / opt_cost


@dataclass(frozen=True)
class ReportRow:
    instance_id: str
    algorithm: str
    cost: float | None
    cost_ratio: float | None
    feasible: bool | None
    violations: int | None
    bound_pass: bool | None
    bound_margin: float | None
    error: str = ""


@dataclass(frozen=True)
class AlgorithmSummary:
    instances: int
    mean_cost_ratio: float | None
    feasible: int
    bound_failures: int | None
    errors: int


@dataclass
class EvaluationReport:
    spec: InventorySpec
    rows: list[ReportRow]
    algorithms: dict[str, AlgorithmSummary] = field(default_factory=dict)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(_csv_text(self.rows))

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(_json_text(self))

    def format_table(self) -> str:
        lines = [
            f"{'algorithm':<12} {'mean ratio':>11} {'feasible':>9} "
            f"{'bound':>6} {'errors':>7}"
        ]
        for name, agg in self.algorithms.items():
            ratio = "-" if agg.mean_cost_ratio is None else f"{agg.mean_cost_ratio:.4f}"
            bound = "-" if agg.bound_failures is None else (
                "pass" if agg.bound_failures == 0 else f"{agg.bound_failures} fail"
            )
            lines.append(
                f"{name:<12} {ratio:>11} {agg.feasible:>9} {bound:>6} "
                f"{agg.errors:>7}"
            )
        return "\n".join(lines)


def _run_policy(name, instance, spec, ctx, yesterday, opt_schedule):
    if name == "opt":
        return opt_schedule if opt_schedule is not None else solve_opt(instance, spec)
    if name == "batman":
        return run_batman(instance, spec, ctx)
    if name == "batmanrate":
        return run_batmanrate(instance, spec, ctx)
    if name == "nostr":
        return no_str(instance)
    if name == "onfix":
        return on_fix(instance, spec)
    if name == "preday":
        return pre_day(instance, yesterday, spec)
    raise ValueError(f"unknown algorithm '{name}'")


def _evaluate_instance(payload):
    instance_id, instance, yesterday, names, spec, custom = payload
    ctx = AlphaContext.for_bounds(instance.bounds)
    cons = spec.capacity * instance.bounds.p_max

    opt_schedule = None
    opt_cost = None
    opt_error = ""
    try:
        opt_schedule = solve_opt(instance, spec)
        opt_cost = opt_schedule.total_cost
    except Exception as exc:  # per-instance failures must not sink the batch
        opt_error = f"{type(exc).__name__}: {exc}"

    rows = []
    for name in names:
        error = ""
        schedule = None
        try:
            if custom and name in custom:
                schedule = custom[name](instance, spec)
            else:
                schedule = _run_policy(
                    name, instance, spec, ctx, yesterday, opt_schedule
                )
        except Exception as exc:
            error = f"{type(exc).__name__}: {exc}"
        if name == "opt" and opt_error:
            error = opt_error

        if schedule is None:
            rows.append(
                ReportRow(instance_id, name, None, None, None, None, None, None, error)
            )
            continue

        violations = check_feasibility(schedule, instance, spec)
        cost = schedule.total_cost
        ratio = None if opt_cost is None else _cost_ratio(cost, opt_cost, cons)
        bound_pass = bound_margin = None
        if name in BOUNDED_POLICIES and opt_cost is not None:
            bound_pass, bound_margin = check_competitive_bound(
                cost, opt_cost, ctx.alpha, spec.capacity, instance.bounds.p_max
            )
        rows.append(
            ReportRow(
                instance_id,
                name,
                cost,
                ratio,
                not violations,
                len(violations),
                bound_pass,
                bound_margin,
                error,
            )
        )
    return rows


def resolve_workers(workers: int | None = None) -> int:
    if workers is None:
        workers = int(os.environ.get("OLIM_THREADS", "1"))
    if workers < 1:
        raise ValueError("worker count must be >= 1")
    return workers


def evaluate(
    instances,
    algorithms,
    spec: InventorySpec,
    *,
    instance_ids=None,
    workers: int | None = None,
) -> EvaluationReport:
    """Evaluate the named policies (plus ``opt``) over an ordered instance set.

    ``algorithms`` holds builtin names or ``(name, callable)`` pairs, where a
    callable maps ``(instance, spec)`` to a Schedule.  The ``preday`` policy
    replays the optimum of the previous instance in the set (its first day
    falls back to buying the demand).  Reports are deterministic given the
    inputs, independent of the worker count.
    """
    instances = list(instances)
    if not instances:
        raise ValueError("no instances to evaluate")
    if instance_ids is None:
        instance_ids = [f"i{k:04d}" for k in range(len(instances))]
    instance_ids = [str(s) for s in instance_ids]
    if len(instance_ids) != len(instances):
        raise ValueError("instance_ids length mismatch")

    names: list[str] = ["opt"]
    custom: dict = {}
    for algo in algorithms:
        if isinstance(algo, str):
            name = algo
        else:
            name, fn = algo
            custom[name] = fn
        if name not in names:
            names.append(name)
    for name in names:
        if name not in BUILTIN_POLICIES and name not in custom:
            raise ValueError(f"unknown algorithm '{name}'")

    payloads = [
        (
            instance_ids[k],
            instances[k],
            instances[k - 1] if k > 0 else None,
            tuple(names),
            spec,
            custom,
        )
        for k in range(len(instances))
    ]

    workers = resolve_workers(workers)
    if workers > 1 and not custom and len(instances) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_instance = list(pool.map(_evaluate_instance, payloads, chunksize=1))
    else:
        per_instance = [_evaluate_instance(p) for p in payloads]

    rows = [row for group in per_instance for row in group]
    report = EvaluationReport(spec=spec, rows=rows)
    report.algorithms = _aggregate(names, rows)
    return report


def _aggregate(names, rows) -> dict[str, AlgorithmSummary]:
    out = {}
    for name in names:
        mine = [r for r in rows if r.algorithm == name]
        ratios = [
            r.cost_ratio
            for r in mine
            if r.cost_ratio is not None and math.isfinite(r.cost_ratio)
        ]
        bound = None
        if name in BOUNDED_POLICIES:
            bound = sum(1 for r in mine if r.bound_pass is False)
        out[name] = AlgorithmSummary(
            instances=len(mine),
            mean_cost_ratio=math.fsum(ratios) / len(ratios) if ratios else None,
            feasible=sum(1 for r in mine if r.feasible),
            bound_failures=bound,
            errors=sum(1 for r in mine if r.error),
        )
    return out


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return FLOAT_FORMAT % value
    return str(value)


def _csv_text(rows) -> str:
    header = (
        "instance,algorithm,cost,cost_ratio,feasible,violations,"
        "bound_pass,bound_margin,error"
    )
    lines = [header]
    for r in rows:
        err = r.error.replace('"', "'")
        if "," in err:
            err = f'"{err}"'
        lines.append(
            ",".join(
                [
                    r.instance_id,
                    r.algorithm,
                    _fmt(r.cost),
                    _fmt(r.cost_ratio),
                    _fmt(r.feasible),
                    _fmt(r.violations),
                    _fmt(r.bound_pass),
                    _fmt(r.bound_margin),
                    err,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _json_value(value):
    if isinstance(value, float):
        if math.isinf(value) or math.isnan(value):
            return _fmt(value)
        return float(FLOAT_FORMAT % value)
    return value


def _json_text(report: EvaluationReport) -> str:
    spec = report.spec
    doc = {
        "spec": {
            "capacity": _json_value(spec.capacity),
            "rho_c": _json_value(spec.rho_c),
            "rho_d": _json_value(spec.rho_d),
        },
        "algorithms": {
            name: {
                "instances": agg.instances,
                "mean_cost_ratio": _json_value(agg.mean_cost_ratio)
                if agg.mean_cost_ratio is not None
                else None,
                "feasible": agg.feasible,
                "bound_failures": agg.bound_failures,
                "errors": agg.errors,
            }
            for name, agg in report.algorithms.items()
        },
        "rows": [
            {
                "instance": r.instance_id,
                "algorithm": r.algorithm,
                "cost": _json_value(r.cost),
                "cost_ratio": _json_value(r.cost_ratio),
                "feasible": r.feasible,
                "violations": r.violations,
                "bound_pass": r.bound_pass,
                "bound_margin": _json_value(r.bound_margin),
                "error": r.error,
            }
            for r in report.rows
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
