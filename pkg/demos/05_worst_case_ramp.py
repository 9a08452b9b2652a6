"""Driving the policy to its guarantee: the descending-ramp adversary.

Prices slide from the threshold down to q while demand stays zero -- the
policy keeps buying small increments along its curve -- then the adversary
reveals the whole demand at p_max.  The optimum simply buys everything at q.
As the ramp gets finer the measured ratio climbs to alpha exactly; no input
can push it further, which is what optimal-competitive means.
"""

from olim import (
    AlphaContext,
    InventorySpec,
    gen_reservation_adversary,
    run_batman,
    solve_opt,
)

for theta in (4.0, 16.0, 64.0):
    ctx = AlphaContext.for_theta(theta)
    cap = 2.0
    spec = InventorySpec(cap)
    q = ctx.bounds.p_min + (ctx.threshold_price - ctx.bounds.p_min) / 3.0
    print(f"theta = {theta:.0f} (alpha = {ctx.alpha:.4f}), ramp ends at q = {q:.3f}")
    for n in (10, 100, 1000, 10_000):
        inst = gen_reservation_adversary(ctx, cap, q, n)
        cost = run_batman(inst, spec, ctx).total_cost
        opt = solve_opt(inst, spec).total_cost
        ratio = cost / opt
        print(f"  ramp slots {n:>6}: ratio {ratio:.5f} "
              f"({100 * ratio / ctx.alpha:6.2f}% of alpha)")
    print()
