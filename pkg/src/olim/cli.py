"""Command line front end: generate instances, run a single policy, or
compare policies over a batch of instance files.

Exit codes: 0 success, 2 bad parameters, 3 I/O failure, 4 the produced
schedule failed the feasibility check (a bug signal for shipped policies).
Identical invocations produce byte-identical output files; floats are
written with at most 12 significant digits.
"""

from __future__ import annotations

import argparse
import glob
import json
import math
import os
import sys

import numpy as np

from .baselines import no_str, on_fix, pre_day
from .batman import run_batman
from .batmanrate import run_batmanrate
from .core import InventorySpec, PriceBounds, check_feasibility
from .harness import evaluate, resolve_workers
from .instances import (
    DEFAULT_HORIZON,
    gen_interleaved,
    gen_kmin,
    gen_random,
    gen_reservation_adversary,
    read_instance,
    write_instance,
)
from .offline import solve_opt
from .reservation import AlphaContext

FLOAT_FORMAT = "%.12g"

RUN_ALGOS = ("batman", "batmanrate", "opt", "nostr", "onfix", "preday")


def _rate(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "unbounded"):
        return math.inf
    return float(text)


def _add_spec_flags(p: argparse.ArgumentParser):
    p.add_argument("--capacity", type=float, required=True, help="storage capacity B")
    p.add_argument("--rho-c", type=_rate, default=math.inf, help="input rate per slot ('inf' = unconstrained)")
    p.add_argument("--rho-d", type=_rate, default=math.inf, help="output rate per slot ('inf' = unconstrained)")


def _add_bounds_flags(p: argparse.ArgumentParser, required: bool):
    p.add_argument("--p-min", type=float, required=required, help="declared minimum price")
    p.add_argument("--p-max", type=float, required=required, help="declared maximum price")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="olim",
        description="Online procurement with inventory: instance generation, "
        "policy runs, and batch comparison against the offline optimum.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance CSV")
    gen_sub = gen.add_subparsers(dest="kind", required=True)

    g_random = gen_sub.add_parser("random", help="uniform prices and demands")
    g_random.add_argument("--seed", type=int, required=True)
    g_random.add_argument("--slots", type=int, default=DEFAULT_HORIZON)
    g_random.add_argument("--demand-scale", type=float, default=1.0)
    _add_bounds_flags(g_random, required=True)
    g_random.add_argument("--out", required=True)

    g_kmin = gen_sub.add_parser(
        "kmin", help="all demand on the final slot (buy-k-units search)"
    )
    g_kmin.add_argument("--slots", type=int, required=True)
    g_kmin.add_argument("--capacity", type=float, required=True)
    _add_bounds_flags(g_kmin, required=True)
    g_kmin.add_argument(
        "--seed",
        type=int,
        default=None,
        help="random prices; default is a descending ramp p_max -> p_min",
    )
    g_kmin.add_argument("--out", required=True)

    g_adv = gen_sub.add_parser(
        "adversary", help="descending ramp to q, then full demand at p_max"
    )
    g_adv.add_argument("--capacity", type=float, required=True)
    g_adv.add_argument("--q", type=float, required=True)
    g_adv.add_argument("--slots", type=int, required=True, help="ramp length")
    _add_bounds_flags(g_adv, required=True)
    g_adv.add_argument("--out", required=True)

    g_int = gen_sub.add_parser(
        "interleave", help="insert threshold-price slots into a base instance"
    )
    g_int.add_argument("--base", required=True, help="base instance CSV")
    _add_bounds_flags(g_int, required=False)
    g_int.add_argument("--out", required=True)

    run = sub.add_parser("run", help="run one policy over an instance file")
    run.add_argument("algo", choices=RUN_ALGOS)
    run.add_argument("--instance", required=True)
    run.add_argument(
        "--yesterday", default=None, help="previous-day instance CSV (preday only)"
    )
    _add_spec_flags(run)
    _add_bounds_flags(run, required=False)
    run.add_argument("--out", required=True, help="schedule CSV; summary goes to <out>.json")

    cmp_ = sub.add_parser("compare", help="evaluate policies over instance files")
    cmp_.add_argument("--instances", required=True, help="glob of instance CSVs")
    cmp_.add_argument(
        "--algos",
        default="batman,batmanrate,nostr,onfix,preday",
        help="comma-separated policy names (opt is always included)",
    )
    _add_spec_flags(cmp_)
    _add_bounds_flags(cmp_, required=False)
    cmp_.add_argument("--out", required=True, help="report CSV; JSON goes to <out>.json")

    return parser


def _bounds_from_args(args, prices=None) -> PriceBounds | None:
    if args.p_min is None and args.p_max is None:
        if prices is None:
            return None
        return PriceBounds(float(min(prices)), float(max(prices)))
    if args.p_min is None or args.p_max is None:
        raise ValueError("--p-min and --p-max must be given together")
    return PriceBounds(args.p_min, args.p_max)


def _cmd_gen(args) -> int:
    bounds = PriceBounds(args.p_min, args.p_max) if args.p_min is not None else None
    if args.kind == "random":
        inst = gen_random(args.seed, args.slots, bounds, args.demand_scale)
    elif args.kind == "kmin":
        if args.seed is None:
            prices = np.linspace(bounds.p_max, bounds.p_min, args.slots)
        else:
            rng = np.random.default_rng(args.seed)
            prices = rng.uniform(bounds.p_min, bounds.p_max, args.slots)
        inst = gen_kmin(args.slots, args.capacity, prices, bounds)
    elif args.kind == "adversary":
        ctx = AlphaContext.for_bounds(bounds)
        inst = gen_reservation_adversary(ctx, args.capacity, args.q, args.slots)
    elif args.kind == "interleave":
        base = read_instance(args.base, bounds=bounds)
        ctx = AlphaContext.for_bounds(base.bounds)
        inst = gen_interleaved(base, ctx)
    else:  # pragma: no cover - argparse restricts kinds
        raise ValueError(f"unknown kind {args.kind}")
    write_instance(inst, args.out)
    return 0


def _summary_path(out_path: str) -> str:
    root, ext = os.path.splitext(out_path)
    return (root if ext.lower() == ".csv" else out_path) + ".json"


def _write_schedule(path, instance, schedule):
    lines = ["t,price,demand,x,b"]
    for t, (p, d) in enumerate(instance.slots()):
        lines.append(
            ",".join(
                [
                    str(t),
                    FLOAT_FORMAT % p,
                    FLOAT_FORMAT % d,
                    FLOAT_FORMAT % schedule.x[t],
                    FLOAT_FORMAT % schedule.b[t],
                ]
            )
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_run(args) -> int:
    instance = read_instance(args.instance, bounds=_bounds_from_args(args))
    spec = InventorySpec(args.capacity, rho_c=args.rho_c, rho_d=args.rho_d)
    ctx = AlphaContext.for_bounds(instance.bounds)
    if args.algo == "batman":
        schedule = run_batman(instance, spec, ctx)
    elif args.algo == "batmanrate":
        schedule = run_batmanrate(instance, spec, ctx)
    elif args.algo == "opt":
        schedule = solve_opt(instance, spec)
    elif args.algo == "nostr":
        schedule = no_str(instance)
    elif args.algo == "onfix":
        schedule = on_fix(instance, spec)
    else:  # preday
        yesterday = None
        if args.yesterday is not None:
            yesterday = read_instance(args.yesterday, bounds=instance.bounds)
        schedule = pre_day(instance, yesterday, spec)

    violations = check_feasibility(schedule, instance, spec)
    summary = {
        "cost": float(FLOAT_FORMAT % schedule.total_cost),
        "alpha": float(FLOAT_FORMAT % ctx.alpha),
        "theta": float(FLOAT_FORMAT % ctx.theta),
        "feasible": not violations,
    }
    _write_schedule(args.out, instance, schedule)
    with open(_summary_path(args.out), "w", encoding="utf-8") as fh:
        fh.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    if violations:
        print(
            f"infeasible schedule: {len(violations)} violation(s), first: "
            f"{violations[0]}",
            file=sys.stderr,
        )
        return 4
    return 0


def _cmd_compare(args) -> int:
    paths = sorted(glob.glob(args.instances))
    if not paths:
        raise FileNotFoundError(f"no instance files match {args.instances}")
    shared_bounds = _bounds_from_args(args)
    instances = [read_instance(p, bounds=shared_bounds) for p in paths]
    ids = [os.path.splitext(os.path.basename(p))[0] for p in paths]
    spec = InventorySpec(args.capacity, rho_c=args.rho_c, rho_d=args.rho_d)
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    report = evaluate(
        instances, algos, spec, instance_ids=ids, workers=resolve_workers()
    )
    report.to_csv(args.out)
    report.to_json(_summary_path(args.out))
    print(report.format_table())
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_compare(args)
    except (ValueError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
