import math

import numpy as np
import pytest

from olim import (
    Instance,
    InventorySpec,
    PriceBounds,
    brute_force_dp,
    check_feasibility,
    no_str,
    on_fix,
    run_batman,
    run_batmanrate,
    solve_opt,
)
from olim.offline import _sliding_min

from conftest import random_instance, random_spec


def test_sliding_min_matches_bruteforce(rng):
    for _ in range(50):
        m = int(rng.integers(1, 40))
        vals = rng.uniform(-5, 5, m)
        back = int(rng.integers(0, m + 3))
        fwd = int(rng.integers(0, m + 3))
        got = _sliding_min(vals, back, fwd)
        expect = np.array(
            [
                vals[max(0, j - back) : min(m, j + fwd + 1)].min()
                if vals[max(0, j - back) : min(m, j + fwd + 1)].size
                else np.inf
                for j in range(m)
            ]
        )
        np.testing.assert_array_equal(got, expect)


def test_constant_price_costs_price_times_demand(rng):
    p = 2.5
    bounds = PriceBounds(1.0, 4.0)
    demands = rng.uniform(0, 3, 12)
    inst = Instance(np.full(12, p), demands, bounds)
    for spec in (InventorySpec(5.0), InventorySpec(5.0, rho_c=1.0, rho_d=1.0)):
        cost = solve_opt(inst, spec).total_cost
        assert cost == pytest.approx(p * demands.sum(), rel=1e-9)


def test_zero_capacity_is_exact_passthrough():
    inst = random_instance(3, T=20, demand_scale=2.0)
    spec = InventorySpec(0.0)
    sched = solve_opt(inst, spec)
    expect = math.fsum(p * d for p, d in inst.slots())
    assert sched.total_cost == expect
    assert sched.total_cost == no_str(inst).total_cost
    assert np.array_equal(sched.x, inst.demands)


def test_two_slot_shift():
    bounds = PriceBounds(1.0, 3.0)
    inst = Instance([1.0, 3.0], [0.0, 2.0], bounds)
    spec = InventorySpec(2.0)
    sched = solve_opt(inst, spec)
    assert sched.total_cost == pytest.approx(2.0, rel=1e-9)
    assert brute_force_dp(inst, spec, 2001) == pytest.approx(2.0, abs=3 * 2.0 * 2 / 2000)


def test_empty_instance_rejected():
    bounds = PriceBounds(1.0, 2.0)
    inst = Instance(np.array([]), np.array([]), bounds)
    with pytest.raises(ValueError):
        solve_opt(inst, InventorySpec(1.0))
    with pytest.raises(ValueError):
        brute_force_dp(inst, InventorySpec(1.0))


def test_dp_refuses_long_instances():
    inst = random_instance(1, T=21)
    with pytest.raises(ValueError):
        brute_force_dp(inst, InventorySpec(1.0))
    with pytest.raises(ValueError):
        brute_force_dp(random_instance(1, T=5), InventorySpec(1.0), grid_points=1)


def test_dp_trivial_cases(rng):
    inst = random_instance(5, T=6, demand_scale=2.0)
    assert brute_force_dp(inst, InventorySpec(0.0)) == pytest.approx(
        math.fsum(p * d for p, d in inst.slots()), rel=1e-12
    )
    single = Instance([2.0], [1.7], PriceBounds(1.0, 4.0))
    assert brute_force_dp(single, InventorySpec(3.0)) == pytest.approx(
        2.0 * 1.7, rel=1e-12
    )


def test_dp_sandwiches_lp_on_random_instances(rng):
    m = 2001
    for seed in range(80):
        theta = float(rng.uniform(1.2, 40.0))
        T = int(rng.integers(1, 11))
        inst = random_instance(seed, T=T, theta=theta, demand_scale=2.0)
        ratio = rng.choice([math.inf, 0.5, 0.35, 0.2, 0.05])
        cap = float(rng.uniform(0.0, 4.0))
        spec = (
            InventorySpec(cap)
            if math.isinf(ratio)
            else InventorySpec(cap, rho_c=max(ratio * cap, 1e-6), rho_d=max(ratio * cap, 1e-6))
        )
        lp = solve_opt(inst, spec).total_cost
        dp = brute_force_dp(inst, spec, m)
        bound = inst.bounds.p_max * cap * T / (m - 1)
        assert dp >= lp - 1e-7 * max(1.0, abs(lp)), f"seed {seed}"
        assert dp - lp <= bound + 1e-9, f"seed {seed}: gap {dp - lp} bound {bound}"


def test_opt_monotone_in_capacity_and_rates(rng):
    for seed in range(25):
        inst = random_instance(100 + seed, T=16, theta=10.0, demand_scale=2.0)
        cap = float(rng.uniform(0.5, 3.0))
        tight = InventorySpec(cap, rho_c=0.3 * cap, rho_d=0.3 * cap)
        looser_rate = InventorySpec(cap, rho_c=0.8 * cap, rho_d=0.8 * cap)
        bigger_cap = InventorySpec(2.0 * cap, rho_c=0.3 * cap, rho_d=0.3 * cap)
        base = solve_opt(inst, tight).total_cost
        slack = 1e-9 * max(1.0, base)
        assert solve_opt(inst, looser_rate).total_cost <= base + slack
        assert solve_opt(inst, bigger_cap).total_cost <= base + slack


def test_opt_lower_bounded_by_cheapest_full_coverage(rng):
    for seed in range(25):
        inst = random_instance(200 + seed, T=20, theta=30.0, demand_scale=1.5)
        spec = random_spec(rng)
        cost = solve_opt(inst, spec).total_cost
        floor = float(inst.prices.min()) * inst.total_demand
        assert cost >= floor - 1e-9 * max(1.0, floor)


def test_opt_never_worse_than_any_policy(rng):
    for seed in range(20):
        inst = random_instance(400 + seed, T=24, theta=12.0, demand_scale=1.5)
        cap = 2.0
        spec = InventorySpec(cap, rho_c=0.5 * cap, rho_d=0.5 * cap)
        opt = solve_opt(inst, spec).total_cost
        slack = 1e-7 * max(1.0, opt)
        for sched in (
            run_batmanrate(inst, spec),
            no_str(inst),
            on_fix(inst, spec),
        ):
            assert opt <= sched.total_cost + slack


def test_opt_schedule_feasible_and_deterministic():
    inst = random_instance(9, T=30, theta=20.0, demand_scale=2.0)
    spec = InventorySpec(3.0, rho_c=1.0, rho_d=1.0)
    a = solve_opt(inst, spec)
    b = solve_opt(inst, spec)
    assert np.array_equal(a.x, b.x)
    assert a.total_cost == b.total_cost
    assert check_feasibility(a, inst, spec) == []
