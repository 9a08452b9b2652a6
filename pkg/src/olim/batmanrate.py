"""BatManRate: the threshold policy extended to bounded input/output rates.

Two things change relative to the rate-free policy.  A new virtual storage's
capacity is no longer simply the slot's demand: the part of the demand that
could never be served by discharging (because the output rate caps what the
storage can deliver) is not worth reserving for, so the capacity solves a
small fixed point (``init_vs``).  And when the curve asks for more than the
input rate admits, the purchase is truncated at ``rho_c + d`` and the
reservation prices are lowered only to the price at which the curve would
have asked exactly for that truncated amount (``cal_rp``, a bisection).
"""

from __future__ import annotations

import numpy as np

from .batman import _StoragePolicy
from .core import Instance, InventorySpec, Schedule, schedule_cost_arrays
from .reservation import AlphaContext, fill_fraction


def _aggregate_preferred(ctx, caps, phis, phi_p):
    inc = caps * (phi_p - phis)
    return float(np.maximum(inc, 0.0).sum())


def init_vs(
    ctx: AlphaContext,
    caps,
    xis,
    price: float,
    demand: float,
    rho_d: float,
    eps1: float | None = None,
) -> float:
    """Capacity for the virtual storage of a demand slot under an output rate.

    The capacity B_v and the aggregate curve purchase x_hat depend on each
    other: x_hat includes the new storage (at the initial reservation price),
    while B_v excludes the part of the demand that neither the output rate
    nor x_hat could cover, B_v = d - max(0, d - rho_d - x_hat).  Iterating
    the update from zero is monotone nondecreasing and gains at least eps1
    per round, so it stops after at most demand/eps1 + 1 rounds; the result
    satisfies the pair of equations to within eps1.
    """
    if demand <= 0.0:
        raise ValueError(f"demand must be positive, got {demand}")
    if eps1 is None:
        eps1 = 1e-9 * max(1.0, demand)
    caps = np.asarray(caps, dtype=float)
    phi_p = fill_fraction(ctx, price)
    base = 0.0
    if caps.size:
        phis = fill_fraction(ctx, np.asarray(xis, dtype=float))
        base = _aggregate_preferred(ctx, caps, phis, phi_p)

    def update(cap_v):
        return demand - max(0.0, demand - rho_d - (base + phi_p * cap_v))

    prev = 0.0
    cur = update(prev)
    limit = int(demand / eps1) + 4
    for _ in range(limit):
        if abs(cur - prev) <= eps1:
            break
        prev = cur
        cur = update(prev)
    return cur


def cal_rp(
    ctx: AlphaContext,
    caps,
    xis,
    demand: float,
    rho_c: float,
    eps2: float | None = None,
) -> float:
    """Reservation price at which the curve asks for exactly rho_c + demand.

    The aggregate preferred amount is continuous and nonincreasing in the
    price, equal to the total unfilled capacity at p_min and zero at the
    threshold, so bisection on [p_min, threshold] converges in
    log2(range/eps2) rounds.  Returns the final bracket midpoint.
    """
    if eps2 is None:
        eps2 = 1e-9 * ctx.bounds.p_max
    caps = np.asarray(caps, dtype=float)
    phis = fill_fraction(ctx, np.asarray(xis, dtype=float))
    target = rho_c + demand

    def aggregate(p):
        return _aggregate_preferred(ctx, caps, phis, fill_fraction(ctx, p))

    lo = ctx.bounds.p_min
    hi = ctx.threshold_price
    if aggregate(lo) < target - 1e-12 * (1.0 + abs(target)):
        raise ValueError(
            "no reservation price matches the target amount "
            f"{target} (max available {aggregate(lo)})"
        )
    while hi - lo > eps2:
        mid = 0.5 * (lo + hi)
        if aggregate(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class BatManRate(_StoragePolicy):
    """Threshold policy honouring finite input/output rates.

    With both rates unconstrained it reproduces BatMan slot for slot.  The
    counters ``output_clamps`` / ``input_clamps`` record how often each rate
    constraint was active (diagnostics; on worst-case families the output
    clamp is expected to stay silent).
    """

    def __init__(
        self,
        spec: InventorySpec,
        ctx: AlphaContext,
        eps1: float | None = None,
        eps2: float | None = None,
    ):
        super().__init__(spec, ctx)
        self._eps1 = eps1
        self._eps2 = eps2
        self.output_clamps = 0
        self.input_clamps = 0

    def step(self, price: float, demand: float) -> float:
        """Advance one slot, returning the amount bought."""
        if demand < 0.0:
            raise ValueError(f"negative demand {demand}")
        if self.ctx.degenerate:
            return demand
        v = self._v
        if demand > 0.0:
            cap_v = init_vs(
                self.ctx,
                self._caps[:v],
                self._xis[:v],
                price,
                demand,
                self.spec.rho_d,
                self._eps1,
            )
            self._append(cap_v)

        phi_p = fill_fraction(self.ctx, price)
        x_hat = self._preferred(phi_p)
        x = x_hat
        update_price, update_phi = price, phi_p

        need = max(demand - min(self._level, self.spec.rho_d), 0.0)
        output_active = x_hat < need
        if output_active:
            x = need
            self.output_clamps += 1
        if x_hat > self.spec.rho_c + demand:
            # exclusive with the output clamp: need <= demand <= rho_c + demand
            if output_active:
                raise AssertionError("both rate clamps active in one slot")
            x = self.spec.rho_c + demand
            update_price = cal_rp(
                self.ctx,
                self._caps[: self._v],
                self._xis[: self._v],
                demand,
                self.spec.rho_c,
                self._eps2,
            )
            update_phi = fill_fraction(self.ctx, update_price)
            self.input_clamps += 1

        self._level += x - demand
        self._update_reservations(update_price, update_phi)
        self._maybe_renew()
        return x


def run_batmanrate(
    instance: Instance,
    spec: InventorySpec,
    ctx: AlphaContext | None = None,
    eps1: float | None = None,
    eps2: float | None = None,
) -> Schedule:
    """Run BatManRate over an instance; deterministic given the instance."""
    if ctx is None:
        ctx = AlphaContext.for_bounds(instance.bounds)
    policy = BatManRate(spec, ctx, eps1=eps1, eps2=eps2)
    n = len(instance)
    x = np.empty(n)
    b = np.empty(n)
    for t, (p, d) in enumerate(instance.slots()):
        x[t] = policy.step(p, d)
        b[t] = policy.level
    return Schedule(x, b, schedule_cost_arrays(instance.prices, x))
