"""The reservation curve: what gets stored at which price, and why the
curve's shape pins the worst-case ratio.

A storage of capacity B run at reservation price p targets G(p) units:
everything at p_min, nothing at and above p_max/alpha.  The identity
demonstrated at the end is the heart of the guarantee: whatever fill level
an adversary strands the policy at, "pay along the curve + p_max for the
rest" costs exactly alpha times "buy everything at the stranding price".
"""

import numpy as np

from olim import (
    AlphaContext,
    inverse_reservation,
    inverse_reservation_integral,
    reservation_amount,
)

ctx = AlphaContext.for_theta(16.0)
B = 10.0
print(f"band [{ctx.bounds.p_min}, {ctx.bounds.p_max}], alpha = {ctx.alpha:.4f}, "
      f"threshold = {ctx.threshold_price:.4f}\n")

print(f"{'price':>8} {'G(p)':>10} {'fill %':>8}")
for p in np.linspace(ctx.bounds.p_min, ctx.threshold_price, 9):
    g = reservation_amount(ctx, B, float(p))
    print(f"{p:>8.3f} {g:>10.4f} {100 * g / B:>7.1f}%")

print("\nround trip through the inverse curve:")
for b in (0.0, 2.5, 5.0, 7.5, 10.0):
    p = inverse_reservation(ctx, B, b)
    back = reservation_amount(ctx, B, p)
    print(f"  fill {b:>5.2f} -> price {p:.5f} -> fill {back:.5f}")

print("\nthe ratio identity at arbitrary stranded fill levels:")
for b in (0.0, 1.7, 4.2, 8.9, 10.0):
    paid_curve = inverse_reservation_integral(ctx, B, b)
    pay_rest = (B - b) * ctx.bounds.p_max
    benchmark = inverse_reservation(ctx, B, b) * B
    print(f"  b={b:>5.2f}: (curve {paid_curve:8.3f} + rest {pay_rest:8.3f}) "
          f"/ benchmark {benchmark:8.3f} = "
          f"{(paid_curve + pay_rest) / benchmark:.10f}")
print(f"\nalpha = {ctx.alpha:.10f} -- the same number, at every fill level.")
