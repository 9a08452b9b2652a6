"""Reservation-curve kernels: Lambert W, the optimal competitive ratio, and
the threshold curve driving the online policies.

For a price band with fluctuation ratio ``theta = p_max / p_min``, the best
worst-case cost ratio any online policy can guarantee is

    alpha(theta) = 1 / (W0(-(theta - 1) / (theta * e)) + 1),

where ``W0`` is the principal branch of the Lambert W function.  A storage of
capacity ``cap`` with reservation price ``p`` targets the stored amount

    G(p) = alpha * cap * ln((1 - p / p_max) * alpha / (alpha - 1)),

a decreasing curve that equals ``cap`` at ``p_min`` and reaches zero at the
threshold price ``p_max / alpha``; above the threshold nothing is stored.
The inverse curve and its closed-form integral are what the competitive
bound checks and the worst-case probes are built from:

    G^-1(b)       = p_max * (1 - (1 - 1/alpha) * exp(b / (alpha * cap)))
    int_0^b G^-1  = p_max * b - p_max * (1 - 1/alpha) * alpha * cap
                    * expm1(b / (alpha * cap))

For every fill level b in [0, cap] these satisfy the exact identity

    (int_0^b G^-1 + (cap - b) * p_max) / (G^-1(b) * cap) = alpha,

which pins the worst-case ratio of "pay along the curve, then pay p_max for
the rest" against "buy everything at the reservation price".
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PriceBounds

_BRANCH_POINT = -math.exp(-1.0)  # -1/e, left edge of the W0 domain
_DOMAIN_SLACK = 1e-15

__all__ = [
    "lambert_w0",
    "alpha",
    "AlphaContext",
    "fill_fraction",
    "reservation_amount",
    "inverse_reservation",
    "inverse_reservation_integral",
]


def _w_residual(w: float, x: float) -> float:
    return w * math.exp(w) - x


def _w_bisect(x: float) -> float:
    # w * e^w is nondecreasing on [-1, 0]; plain bisection is bulletproof
    # near the branch point where Newton/Halley steps degenerate.
    lo, hi = -1.0, 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _w_residual(mid, x) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lambert_w0(x: float) -> float:
    """Principal-branch Lambert W on [-1/e, 0].

    Seeded with the branch-point series near -1/e (where Newton-type steps
    stall) and refined with Halley iterations; falls back to bisection if the
    residual bound |w*e^w - x| <= 1e-14 * max(1, |x|) is not met.
    """
    x = float(x)
    if not (_BRANCH_POINT - _DOMAIN_SLACK <= x <= 0.0):
        raise ValueError(f"lambert_w0 domain is [-1/e, 0], got {x}")
    x = max(x, _BRANCH_POINT)
    if x == 0.0:
        return 0.0

    q = 2.0 * (1.0 + math.e * x)
    if q <= 0.0:
        return -1.0  # branch point (up to rounding in 1 + e*x)
    p = math.sqrt(q)
    if q < 0.4:
        # series around the branch point, w = -1 + p - p^2/3 + ...
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * 43.0 / 540.0)))
    else:
        w = x  # W(x) ~ x near 0; Halley takes it from here

    for _ in range(64):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 <= 0.0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        dw = f / denom
        w -= dw
        if abs(dw) <= 1e-16 * (1.0 + abs(w)):
            break
    w = min(0.0, max(-1.0, w))

    if abs(_w_residual(w, x)) > 1e-14 * max(1.0, abs(x)):
        w = _w_bisect(x)
    return w


def alpha(theta: float) -> float:
    """Optimal competitive ratio for a price band with fluctuation ratio theta.

    Equals 1 at theta = 1, is strictly increasing, and grows like
    sqrt(theta/2) for large theta.
    """
    theta = float(theta)
    if not theta >= 1.0:
        raise ValueError(f"theta must be >= 1, got {theta}")
    if theta == 1.0:
        return 1.0
    arg = -(theta - 1.0) / (theta * math.e)
    return 1.0 / (lambert_w0(arg) + 1.0)


@dataclass(frozen=True)
class AlphaContext:
    """Price band plus its fluctuation ratio and competitive ratio.

    Carries everything needed to evaluate the reservation curve.  theta = 1
    gives alpha = 1, which degenerates the curve (division by alpha - 1);
    such contexts are flagged and policies fall back to buying exactly the
    demand each slot.
    """

    bounds: PriceBounds
    theta: float
    alpha: float

    @classmethod
    def for_bounds(cls, bounds: PriceBounds) -> "AlphaContext":
        theta = bounds.theta
        return cls(bounds=bounds, theta=theta, alpha=alpha(theta))

    @classmethod
    def for_theta(cls, theta: float, p_min: float = 1.0) -> "AlphaContext":
        return cls.for_bounds(PriceBounds(p_min, p_min * theta))

    @property
    def degenerate(self) -> bool:
        return self.alpha <= 1.0

    @property
    def threshold_price(self) -> float:
        """Price above which nothing is reserved: p_max / alpha."""
        return self.bounds.p_max / self.alpha

    def require_curve(self):
        if self.degenerate:
            raise ValueError(
                "degenerate context (theta = 1): the reservation curve is "
                "undefined; use pass-through procurement"
            )


def fill_fraction(ctx: AlphaContext, p):
    """Target stored fraction at price p: reservation_amount / cap.

    Vectorised over p; 1 at p_min, 0 at and above the threshold price.
    """
    ctx.require_curve()
    a = ctx.alpha
    p_max = ctx.bounds.p_max
    scale = a / (a - 1.0)
    if np.ndim(p) == 0:
        inner = (1.0 - float(p) / p_max) * scale
        if inner <= 1.0:
            return 0.0
        return min(a * math.log(inner), 1.0)
    inner = (1.0 - np.asarray(p, dtype=float) / p_max) * scale
    vals = a * np.log(np.maximum(inner, 1e-300))
    return np.clip(vals, 0.0, 1.0)


def reservation_amount(ctx: AlphaContext, cap: float, p: float) -> float:
    """Amount a storage of capacity cap targets at price p (the G curve)."""
    if cap < 0.0:
        raise ValueError("cap must be >= 0")
    if not (ctx.bounds.p_min <= p <= ctx.bounds.p_max):
        raise ValueError(
            f"price {p} outside [{ctx.bounds.p_min}, {ctx.bounds.p_max}]"
        )
    return cap * fill_fraction(ctx, p)


def _check_level(cap: float, b: float):
    if cap < 0.0:
        raise ValueError("cap must be >= 0")
    if not (0.0 <= b <= cap * (1.0 + 1e-12)):
        raise ValueError(f"fill level {b} outside [0, {cap}]")


def inverse_reservation(ctx: AlphaContext, cap: float, b: float) -> float:
    """Price at which the curve stores exactly b: G^-1 on [0, cap].

    Decreasing from the threshold price at b = 0 down to p_min at b = cap.
    """
    ctx.require_curve()
    _check_level(cap, b)
    if cap == 0.0:
        return ctx.threshold_price
    a = ctx.alpha
    b = min(b, cap)
    p = ctx.bounds.p_max * (1.0 - (1.0 - 1.0 / a) * math.exp(b / (a * cap)))
    # rounding can land a hair outside the curve's range; keep compositions
    # like reservation_amount(inverse_reservation(b)) well defined
    return min(max(p, ctx.bounds.p_min), ctx.threshold_price)


def inverse_reservation_integral(ctx: AlphaContext, cap: float, b: float) -> float:
    """Closed form of the running integral of G^-1 from 0 to b.

    This is what a policy pays when it fills the storage exactly along the
    curve; expm1 keeps it accurate for small fill levels.
    """
    ctx.require_curve()
    _check_level(cap, b)
    if cap == 0.0 or b == 0.0:
        return 0.0
    a = ctx.alpha
    b = min(b, cap)
    p_max = ctx.bounds.p_max
    return p_max * b - p_max * (1.0 - 1.0 / a) * a * cap * math.expm1(b / (a * cap))
