"""BatMan: the online policy for rate-unconstrained inventories.

The policy keeps one reservation price per storage: the physical storage is
storage 0, and every positive demand spawns a virtual storage whose capacity
equals that demand.  At price p each storage is topped up to its curve target
(the amount the reservation curve assigns to the lowest price seen during the
storage's lifetime), the aggregate is raised to cover any shortfall against
the physical level, and whenever the physical level returns to zero the
virtual storages are wound up and the bookkeeping starts over.
"""

from __future__ import annotations

import numpy as np

from .core import Instance, InventorySpec, Schedule, schedule_cost_arrays
from .reservation import AlphaContext, fill_fraction

# |level| below this counts as an empty storage and triggers renewal; an
# exact-zero test would be unreachable after the cancellation in the
# shortfall branch.
RENEWAL_TOL = 1e-12


class _StoragePolicy:
    """State shared by the threshold policies: per-storage capacities,
    reservation prices, and cached fill fractions (so the curve's log is
    evaluated once per distinct price, not once per storage per slot)."""

    def __init__(self, spec: InventorySpec, ctx: AlphaContext):
        self.spec = spec
        self.ctx = ctx
        self._threshold = ctx.threshold_price
        n = 16
        self._caps = np.zeros(n)
        self._xis = np.zeros(n)
        self._phis = np.zeros(n)
        self._caps[0] = spec.capacity
        self._xis[0] = self._threshold
        self._v = 1
        self._level = 0.0
        self.renewals = 0

    # -- read-only views of the state ------------------------------------

    @property
    def level(self) -> float:
        return self._level

    @property
    def storage_count(self) -> int:
        return self._v

    @property
    def storage_caps(self) -> np.ndarray:
        return self._caps[: self._v].copy()

    @property
    def storage_xis(self) -> np.ndarray:
        return self._xis[: self._v].copy()

    # -- internals --------------------------------------------------------

    def _append(self, cap: float):
        if self._v == len(self._caps):
            grow = 2 * len(self._caps)
            self._caps = np.resize(self._caps, grow)
            self._xis = np.resize(self._xis, grow)
            self._phis = np.resize(self._phis, grow)
        self._caps[self._v] = cap
        self._xis[self._v] = self._threshold
        self._phis[self._v] = 0.0
        self._v += 1

    def _preferred(self, phi_p: float) -> float:
        """Aggregate curve-driven purchase at fill fraction phi_p."""
        v = self._v
        inc = self._caps[:v] * (phi_p - self._phis[:v])
        np.maximum(inc, 0.0, out=inc)
        return float(inc.sum())

    def _update_reservations(self, price: float, phi_p: float):
        v = self._v
        np.minimum(self._xis[:v], price, out=self._xis[:v])
        np.maximum(self._phis[:v], phi_p, out=self._phis[:v])

    def _maybe_renew(self):
        if abs(self._level) <= RENEWAL_TOL:
            if self._v > 1 or self._xis[0] != self._threshold:
                self.renewals += 1
            self._v = 1
            self._xis[0] = self._threshold
            self._phis[0] = 0.0
            self._level = 0.0


class BatMan(_StoragePolicy):
    """Adaptive-reservation policy; requires rates that never bind."""

    def __init__(self, spec: InventorySpec, ctx: AlphaContext):
        if not spec.rate_free:
            raise ValueError(
                "BatMan handles the rate-free case only "
                "(min(rho_c, rho_d) >= capacity); use BatManRate"
            )
        super().__init__(spec, ctx)

    def step(self, price: float, demand: float) -> float:
        """Advance one slot, returning the amount bought."""
        if demand < 0.0:
            raise ValueError(f"negative demand {demand}")
        if self.ctx.degenerate:
            return demand
        if demand > 0.0:
            self._append(demand)
        phi_p = fill_fraction(self.ctx, price)
        x_hat = self._preferred(phi_p)
        self._update_reservations(price, phi_p)
        x = max(x_hat, demand - self._level, 0.0)
        self._level += x - demand
        self._maybe_renew()
        return x


def run_batman(
    instance: Instance, spec: InventorySpec, ctx: AlphaContext | None = None
) -> Schedule:
    """Run BatMan over an instance; deterministic given the instance."""
    if ctx is None:
        ctx = AlphaContext.for_bounds(instance.bounds)
    policy = BatMan(spec, ctx)
    n = len(instance)
    x = np.empty(n)
    b = np.empty(n)
    for t, (p, d) in enumerate(instance.slots()):
        x[t] = policy.step(p, d)
        b[t] = policy.level
    return Schedule(x, b, schedule_cost_arrays(instance.prices, x))
