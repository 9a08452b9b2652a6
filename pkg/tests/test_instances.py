import math

import numpy as np
import pytest

from olim import (
    AlphaContext,
    Instance,
    InventorySpec,
    PriceBounds,
    default_capacity,
    gen_interleaved,
    gen_kmin,
    gen_random,
    gen_reservation_adversary,
    load_traces,
    read_instance,
    run_batman,
    solve_opt,
    write_instance,
)

from conftest import random_instance


def test_gen_kmin_shape():
    bounds = PriceBounds(1.0, 3.0)
    inst = gen_kmin(3, 2.0, [3.0, 2.0, 1.0], bounds)
    assert inst.demands.tolist() == [0.0, 0.0, 2.0]
    assert inst.prices.tolist() == [3.0, 2.0, 1.0]
    single = gen_kmin(1, 5.0, [2.0], bounds)
    assert single.demands.tolist() == [5.0]


def test_gen_kmin_validation():
    bounds = PriceBounds(1.0, 3.0)
    with pytest.raises(ValueError):
        gen_kmin(3, 2.0, [3.0, 2.0], bounds)
    with pytest.raises(ValueError):
        gen_kmin(2, 2.0, [3.0, 0.5], bounds)  # below p_min in strict mode


def test_gen_interleaved_shape():
    base = random_instance(1, T=2)
    ctx = AlphaContext.for_bounds(base.bounds)
    out = gen_interleaved(base, ctx)
    assert len(out) == 5
    assert out.prices[0] == out.prices[2] == out.prices[4] == ctx.threshold_price
    assert out.demands[0::2].tolist() == [0.0, 0.0, 0.0]
    assert np.array_equal(out.prices[1::2], base.prices)
    assert np.array_equal(out.demands[1::2], base.demands)


def test_interleaving_preserves_online_cost_and_helps_opt(rng):
    spec = InventorySpec(2.0)
    for seed in range(20):
        base = random_instance(seed, T=16, theta=float(rng.uniform(1.5, 40.0)),
                               demand_scale=1.5)
        ctx = AlphaContext.for_bounds(base.bounds)
        inter = gen_interleaved(base, ctx)
        cost_base = run_batman(base, spec, ctx).total_cost
        cost_inter = run_batman(inter, spec, ctx).total_cost
        assert cost_inter == pytest.approx(cost_base, rel=1e-12)
        opt_base = solve_opt(base, spec).total_cost
        opt_inter = solve_opt(inter, spec).total_cost
        assert opt_inter <= opt_base * (1 + 1e-9) + 1e-12


def test_adversary_generator_validation():
    ctx = AlphaContext.for_theta(4.0)
    with pytest.raises(ValueError):
        gen_reservation_adversary(ctx, 1.0, ctx.bounds.p_min, 100)  # q not interior
    with pytest.raises(ValueError):
        gen_reservation_adversary(ctx, 1.0, ctx.threshold_price, 100)
    with pytest.raises(ValueError):
        gen_reservation_adversary(ctx, 1.0, 1.5, 1)
    with pytest.raises(ValueError):
        gen_reservation_adversary(AlphaContext.for_theta(1.0), 1.0, 1.0, 10)


def test_adversary_shape_and_final_charge():
    ctx = AlphaContext.for_theta(16.0)
    B = 2.0
    q = ctx.bounds.p_min * 1.001
    inst = gen_reservation_adversary(ctx, B, q, 500)
    assert len(inst) == 501
    assert inst.prices[0] == ctx.threshold_price
    assert inst.prices[499] == q
    assert inst.prices[500] == ctx.bounds.p_max
    assert inst.demands[-1] == B
    diffs = np.diff(inst.prices[:500])
    assert np.all(diffs < 0.0)
    # with q near p_min the policy ends the ramp nearly full
    sched = run_batman(inst, InventorySpec(B), ctx)
    assert sched.b[499] == pytest.approx(B, rel=5e-3)


def test_gen_random_determinism():
    bounds = PriceBounds(1.0, 4.0)
    a = gen_random(7, 50, bounds, demand_scale=2.0)
    b = gen_random(7, 50, bounds, demand_scale=2.0)
    c = gen_random(8, 50, bounds, demand_scale=2.0)
    assert np.array_equal(a.prices, b.prices)
    assert np.array_equal(a.demands, b.demands)
    assert not np.array_equal(a.prices, c.prices)
    assert a.prices.min() >= 1.0 and a.prices.max() <= 4.0
    assert a.demands.min() >= 0.0


def test_default_capacity_scales_with_peak():
    inst = random_instance(3, T=30, demand_scale=2.0)
    cap = default_capacity(inst)
    assert cap == pytest.approx(18.0 * inst.demands.max())


def test_instance_roundtrip(tmp_path):
    inst = gen_random(11, 40, PriceBounds(1.0, 9.0), demand_scale=3.0)
    path = tmp_path / "inst.csv"
    write_instance(inst, path)
    back = read_instance(path, bounds=inst.bounds)
    np.testing.assert_allclose(back.prices, inst.prices, rtol=1e-11)
    np.testing.assert_allclose(back.demands, inst.demands, rtol=1e-11)
    # same args, same bytes
    path2 = tmp_path / "inst2.csv"
    write_instance(gen_random(11, 40, PriceBounds(1.0, 9.0), 3.0), path2)
    assert path.read_bytes() == path2.read_bytes()


def _write(path, header, rows):
    path.write_text("\n".join([header] + rows) + "\n", encoding="utf-8")


def test_load_traces_basic(tmp_path):
    p = tmp_path / "price.csv"
    d = tmp_path / "demand.csv"
    _write(p, "index,price", [f"{i},{v}" for i, v in enumerate([1.0, 2.0, 3.0, 4.0])])
    _write(d, "index,demand", [f"{i},{v}" for i, v in enumerate([5.0, 0.0, 2.0, 1.0])])
    loaded = load_traces(p, d)
    assert loaded.instance.demands.tolist() == [5.0, 0.0, 2.0, 1.0]
    assert loaded.instance.bounds.p_min == 1.0
    assert loaded.instance.bounds.p_max == 4.0
    assert loaded.filled_values == 0


def test_load_traces_energy_model(tmp_path):
    p = tmp_path / "price.csv"
    d = tmp_path / "load.csv"
    _write(p, "index,price", ["0,2.0", "1,2.0"])
    _write(d, "index,load", ["0,0.0", "1,1.0"])
    loaded = load_traces(p, d, energy_model=(100.0, 250.0))
    assert loaded.instance.demands.tolist() == [100.0, 250.0]


def test_load_traces_renewable_scaling(tmp_path):
    p = tmp_path / "price.csv"
    d = tmp_path / "demand.csv"
    r = tmp_path / "renewable.csv"
    T = 12
    _write(p, "index,price", [f"{i},3.0" for i in range(T)])
    _write(d, "index,demand", [f"{i},10.0" for i in range(T)])
    _write(r, "index,renewable", [f"{i},{1.0 + (i % 3)}" for i in range(T)])
    loaded = load_traces(p, d, r, penetration=0.5)
    supplied = 10.0 * T - loaded.instance.demands.sum()
    assert supplied == pytest.approx(0.5 * 10.0 * T, rel=1e-9)
    assert loaded.instance.demands.min() >= 0.0


def test_load_traces_surplus_renewable_clips_to_zero(tmp_path):
    p = tmp_path / "price.csv"
    d = tmp_path / "demand.csv"
    r = tmp_path / "renewable.csv"
    _write(p, "index,price", ["0,3.0", "1,3.0"])
    _write(d, "index,demand", ["0,1.0", "1,10.0"])
    _write(r, "index,renewable", ["0,10.0", "1,0.0"])
    loaded = load_traces(p, d, r, penetration=0.9)
    assert loaded.instance.demands[0] == 0.0  # clipped, no export
    assert loaded.instance.demands.min() >= 0.0


def test_load_traces_hourly_repetition(tmp_path):
    p = tmp_path / "price.csv"
    d = tmp_path / "demand.csv"
    _write(p, "index,price", [f"{i},{1.0 + i}" for i in range(24)])
    _write(d, "index,demand", ["0,6.0", "1,12.0"])  # 2 coarse readings
    loaded = load_traces(p, d)
    assert len(loaded.instance) == 24
    assert loaded.instance.demands[:12].tolist() == [6.0] * 12
    assert loaded.instance.demands[12:].tolist() == [12.0] * 12


def test_load_traces_length_mismatch(tmp_path):
    p = tmp_path / "price.csv"
    d = tmp_path / "demand.csv"
    _write(p, "index,price", [f"{i},2.0" for i in range(10)])
    _write(d, "index,demand", [f"{i},1.0" for i in range(3)])  # 3 does not divide 10
    with pytest.raises(ValueError, match="aligned"):
        load_traces(p, d)


def test_load_traces_missing_values(tmp_path):
    p = tmp_path / "price.csv"
    d = tmp_path / "demand.csv"
    _write(p, "index,price", ["0,2.0", "1,", "2,3.0"])
    _write(d, "index,demand", ["0,1.0", "1,1.0", "2,1.0"])
    with pytest.raises(ValueError, match="price.csv:3"):
        load_traces(p, d)
    loaded = load_traces(p, d, strict=False)
    assert loaded.filled_values == 1
    assert loaded.instance.prices[1] == 2.0  # forward-filled


def test_load_traces_parse_and_negative_errors(tmp_path):
    p = tmp_path / "price.csv"
    d = tmp_path / "demand.csv"
    _write(d, "index,demand", ["0,1.0"])
    _write(p, "index,price", ["0,abc"])
    with pytest.raises(ValueError, match="price.csv:2"):
        load_traces(p, d)
    _write(p, "index,price", ["0,-3.0"])
    with pytest.raises(ValueError, match="negative"):
        load_traces(p, d)
    _write(p, "index,wrong", ["0,1.0"])
    with pytest.raises(ValueError, match="no 'price' column"):
        load_traces(p, d)


def test_load_traces_penetration_needs_renewable(tmp_path):
    p = tmp_path / "price.csv"
    d = tmp_path / "demand.csv"
    _write(p, "index,price", ["0,2.0"])
    _write(d, "index,demand", ["0,1.0"])
    with pytest.raises(ValueError, match="renewable"):
        load_traces(p, d, penetration=0.5)


def test_load_traces_lenient_price_clamping(tmp_path):
    p = tmp_path / "price.csv"
    d = tmp_path / "demand.csv"
    _write(p, "index,price", ["0,0.5", "1,2.0", "2,9.0"])
    _write(d, "index,demand", ["0,1.0", "1,1.0", "2,1.0"])
    bounds = PriceBounds(1.0, 4.0)
    with pytest.raises(ValueError):
        load_traces(p, d, bounds=bounds)
    loaded = load_traces(p, d, bounds=bounds, strict=False)
    assert loaded.clamped_prices == 2
    assert loaded.instance.prices.tolist() == [1.0, 2.0, 4.0]
