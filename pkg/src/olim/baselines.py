"""Comparison policies: no storage, a fixed price threshold, and replaying
yesterday's optimum."""

from __future__ import annotations

import math

import numpy as np

from .core import Instance, InventorySpec, Schedule, project_purchases, schedule_cost_arrays
from .offline import solve_opt


def no_str(instance: Instance) -> Schedule:
    """Buy exactly the demand every slot; the storage is never touched."""
    x = instance.demands.copy()
    b = np.zeros(len(instance))
    return Schedule(x, b, schedule_cost_arrays(instance.prices, x))


def on_fix(instance: Instance, spec: InventorySpec) -> Schedule:
    """Fixed threshold sqrt(p_max * p_min): charge as much as allowed below
    it, discharge as much as possible at or above it."""
    threshold = math.sqrt(instance.bounds.p_max * instance.bounds.p_min)
    n = len(instance)
    x = np.empty(n)
    b = np.empty(n)
    level = 0.0
    cap = spec.capacity
    for t, (p, d) in enumerate(instance.slots()):
        if p < threshold:
            charge = min(spec.rho_c, max(cap - level, 0.0))
            x[t] = d + charge
            level = min(level + charge, cap)
        else:
            discharge = min(spec.rho_d, level, d)
            x[t] = d - discharge
            level -= discharge
        b[t] = level
    return Schedule(x, b, schedule_cost_arrays(instance.prices, x))


def pre_day(
    today: Instance, yesterday: Instance | None, spec: InventorySpec
) -> Schedule:
    """Replay yesterday's optimal purchases against today's demands.

    The plan is pushed through the sequential feasibility projection, so the
    result always covers today's demand.  Without a previous day there is
    nothing to replay and the policy degrades to buying the demand.
    """
    if yesterday is None:
        return no_str(today)
    if len(yesterday) != len(today):
        raise ValueError(
            f"day lengths differ: {len(yesterday)} vs {len(today)}"
        )
    plan = solve_opt(yesterday, spec).x
    x, b = project_purchases(plan, today.demands, spec)
    return Schedule(x, b, schedule_cost_arrays(today.prices, x))
