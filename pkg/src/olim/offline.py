"""Exact offline optimum of the procurement problem, plus a grid-DP oracle.

With full knowledge of prices and demands the problem is a linear program:
minimise total spend subject to the inventory balance, the capacity band and
the per-slot rate limits.  The two rate constraints linearise cleanly --
``x(t) >= d(t) - min(rho_d, b(t-1))`` is exactly ``x(t) >= d(t) - rho_d``
together with ``b(t) >= 0``, and symmetrically for the input rate -- so the
LP has 2T variables, T balance equalities and simple bounds, which the HiGHS
simplex solves exactly (up to solver tolerance) and deterministically.

``brute_force_dp`` is an independent cross-check for tiny instances: dynamic
programming over a uniform grid of storage levels.  Restricting levels to the
grid can only lose p_max * B * T / (M - 1) relative to the continuum, and
every grid path is feasible for the LP, giving the two-sided sandwich the
tests pin down.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .core import (
    Instance,
    InventorySpec,
    Schedule,
    project_purchases,
    schedule_cost_arrays,
)


def solve_opt(instance: Instance, spec: InventorySpec) -> Schedule:
    """Cost-minimal feasible schedule under full knowledge of the instance.

    The returned schedule is feasible (the LP vertex is run through the same
    sequential projection the baselines use, which cleans up solver-tolerance
    dust) and its cost is within 1e-7 relative of the true optimum.
    """
    n = len(instance)
    if n == 0:
        raise ValueError("empty instance")
    d = instance.demands
    p = instance.prices
    cap = spec.capacity
    if cap == 0.0:
        # nothing can be stored; buying the demand is the only plan
        return Schedule.from_purchases(d.copy(), instance)

    # variables: x(0..n-1), b(0..n-1); balance rows b(t) - b(t-1) - x(t) = -d(t)
    c = np.concatenate([p, np.zeros(n)])
    rows = np.concatenate([np.arange(n), np.arange(n), np.arange(1, n)])
    cols = np.concatenate([np.arange(n), n + np.arange(n), n + np.arange(n - 1)])
    vals = np.concatenate([-np.ones(n), np.ones(n), -np.ones(n - 1)])
    a_eq = sparse.csr_matrix((vals, (rows, cols)), shape=(n, 2 * n))

    lb_x = np.maximum(0.0, d - spec.rho_d)
    ub_x = d + spec.rho_c
    bounds = [
        (lb_x[t], None if math.isinf(ub_x[t]) else ub_x[t]) for t in range(n)
    ]
    bounds += [(0.0, cap)] * n

    res = linprog(c, A_eq=a_eq, b_eq=-d, bounds=bounds, method="highs")
    if res.status != 0:
        raise RuntimeError(f"LP solver failed: {res.message}")

    x, b = project_purchases(res.x[:n], d, spec)
    return Schedule(x, b, schedule_cost_arrays(p, x))


def _sliding_min(values: np.ndarray, back: int, fwd: int) -> np.ndarray:
    """out[j] = min(values[j - back : j + fwd + 1]), edges padded with inf.

    Two-pass block decomposition; O(len) regardless of the window width.
    """
    m = len(values)
    width = back + fwd + 1
    if width == 1:
        return values.copy()
    padded = np.concatenate(
        [np.full(back, np.inf), values, np.full(fwd, np.inf)]
    )
    total = len(padded)
    nblocks = -(-total // width)
    tail = np.full(nblocks * width - total, np.inf)
    blocks = np.concatenate([padded, tail]).reshape(nblocks, width)
    prefix = np.minimum.accumulate(blocks, axis=1).ravel()
    suffix = np.minimum.accumulate(blocks[:, ::-1], axis=1)[:, ::-1].ravel()
    return np.minimum(suffix[: total - width + 1], prefix[width - 1 : total])


def brute_force_dp(
    instance: Instance, spec: InventorySpec, grid_points: int = 2001
) -> float:
    """Approximate optimal cost by DP over a uniform grid of storage levels.

    Intended for tiny instances only (T <= 20).  The result is an upper bound
    on the true optimum, and exceeds it by at most
    p_max * capacity * T / (grid_points - 1).
    """
    n = len(instance)
    if n == 0:
        raise ValueError("empty instance")
    if n > 20:
        raise ValueError(f"grid oracle is limited to T <= 20 slots, got {n}")
    m = int(grid_points)
    if m < 2:
        raise ValueError("grid_points must be >= 2")
    cap = spec.capacity
    if cap == 0.0:
        return schedule_cost_arrays(instance.prices, instance.demands)

    delta = cap / (m - 1)
    # grid steps admitted by each rate; the 1e-9 nudge keeps exact multiples
    # of delta inside the window
    if math.isinf(spec.rho_c):
        k_up = m - 1
    else:
        k_up = min(m - 1, int(math.floor(spec.rho_c / delta + 1e-9)))

    idx = np.arange(m, dtype=float)
    cost = np.full(m, np.inf)
    cost[0] = 0.0  # storage starts empty
    for p, d in instance.slots():
        k_down = min(d, spec.rho_d)
        k_down = min(m - 1, int(math.floor(k_down / delta + 1e-9)))
        reach = cost - (p * delta) * idx
        best = _sliding_min(reach, k_up, k_down)
        cost = best + (p * d + p * delta * idx)
    return float(cost.min())
