"""Domain types for online procurement with inventory.

At every slot a demand for an asset must be covered, either by buying at the
current market price or by drawing down a capacity-limited inventory that was
filled at earlier (cheaper) slots.  Everything downstream -- the online
policies, the offline optimum, the baselines and the evaluation harness --
works in terms of the value types defined here.

Per-slot feasibility of a purchase plan ``x`` with inventory trajectory ``b``:

    x(t) >= d(t) - min(rho_d, b(t-1))        demand coverage / output rate
    x(t) <= d(t) + min(rho_c, B - b(t-1))    input rate / free capacity
    b(t) == b(t-1) + x(t) - d(t)             inventory balance
    0 <= b(t) <= B                           capacity
    x(t) >= 0                                no selling back
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

# Absolute tolerance for all feasibility arithmetic, in asset/currency units.
# Double precision keeps accumulated per-slot error far below this even for
# horizons of 1e5 slots.
FEASIBILITY_TOL = 1e-9

# Purchases smaller than this are treated as numerical noise when a plan is
# projected onto the feasible set (the lower bound permitting).
_PURCHASE_SNAP = 1e-12


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError("expected a one-dimensional sequence")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PriceBounds:
    """Declared price band [p_min, p_max]; theta is the fluctuation ratio."""

    p_min: float
    p_max: float

    def __post_init__(self):
        if not (self.p_min > 0.0):
            raise ValueError(f"p_min must be positive, got {self.p_min}")
        if not (self.p_max >= self.p_min):
            raise ValueError(
                f"p_max ({self.p_max}) must be >= p_min ({self.p_min})"
            )

    @property
    def theta(self) -> float:
        return self.p_max / self.p_min


@dataclass(frozen=True)
class InventorySpec:
    """Inventory parameters: capacity, input/output rates, starting level.

    Rates are per slot; ``math.inf`` means unconstrained.  The starting level
    is fixed at zero, which the online policies rely on.
    """

    capacity: float
    rho_c: float = math.inf
    rho_d: float = math.inf
    initial_level: float = 0.0

    def __post_init__(self):
        if not (self.capacity >= 0.0):
            raise ValueError(f"capacity must be >= 0, got {self.capacity}")
        if not (self.rho_c > 0.0):
            raise ValueError(f"rho_c must be positive or inf, got {self.rho_c}")
        if not (self.rho_d > 0.0):
            raise ValueError(f"rho_d must be positive or inf, got {self.rho_d}")
        if self.initial_level != 0.0:
            raise ValueError("initial_level is fixed at 0")

    @property
    def rate_free(self) -> bool:
        """True when neither rate can bind (both cover the full capacity)."""
        return min(self.rho_c, self.rho_d) >= self.capacity


@dataclass(frozen=True)
class Instance:
    """A price/demand sequence together with its declared price band.

    Construct through :meth:`build`, which enforces the band: strict mode
    rejects out-of-band prices, lenient mode clamps them and records how many
    were clamped.  Arrays are read-only, so instances can be shared across
    worker processes or threads freely.
    """

    prices: np.ndarray
    demands: np.ndarray
    bounds: PriceBounds
    clamped_prices: int = 0

    def __post_init__(self):
        object.__setattr__(self, "prices", _readonly(self.prices))
        object.__setattr__(self, "demands", _readonly(self.demands))
        if len(self.prices) != len(self.demands):
            raise ValueError(
                f"{len(self.prices)} prices vs {len(self.demands)} demands"
            )
        if np.any(self.demands < 0.0):
            raise ValueError("demands must be nonnegative")
        lo, hi = self.bounds.p_min, self.bounds.p_max
        if len(self.prices) and (
            self.prices.min() < lo or self.prices.max() > hi
        ):
            raise ValueError(
                "prices outside declared bounds; use Instance.build(..., "
                "strict=False) to clamp"
            )

    @classmethod
    def build(cls, prices, demands, bounds: PriceBounds, strict: bool = True):
        prices = np.array(prices, dtype=float)
        clamped = 0
        if prices.size:
            outside = (prices < bounds.p_min) | (prices > bounds.p_max)
            clamped = int(outside.sum())
            if clamped and strict:
                bad = int(np.flatnonzero(outside)[0])
                raise ValueError(
                    f"price {prices[bad]} at slot {bad} outside "
                    f"[{bounds.p_min}, {bounds.p_max}]"
                )
            if clamped:
                prices = np.clip(prices, bounds.p_min, bounds.p_max)
        return cls(prices, demands, bounds, clamped_prices=clamped)

    def __len__(self) -> int:
        return len(self.prices)

    @property
    def total_demand(self) -> float:
        return float(self.demands.sum())

    def slots(self) -> Iterator[tuple[float, float]]:
        for p, d in zip(self.prices.tolist(), self.demands.tolist()):
            yield p, d


@dataclass(frozen=True)
class Schedule:
    """A purchase plan: per-slot amounts bought, end-of-slot inventory levels,
    and the total spend against the instance it was produced from."""

    x: np.ndarray
    b: np.ndarray
    total_cost: float

    def __post_init__(self):
        object.__setattr__(self, "x", _readonly(self.x))
        object.__setattr__(self, "b", _readonly(self.b))
        if len(self.x) != len(self.b):
            raise ValueError("x and b must have equal length")

    @classmethod
    def from_purchases(cls, x, instance: Instance) -> "Schedule":
        """Derive levels from the balance recursion and price out the plan."""
        x = np.array(x, dtype=float)
        if len(x) != len(instance):
            raise ValueError("purchase vector length does not match instance")
        b = np.cumsum(x - instance.demands)
        return cls(x, b, schedule_cost_arrays(instance.prices, x))

    def __len__(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class Violation:
    """One broken constraint at one slot (slots are 0-based)."""

    slot: int
    constraint: str
    amount: float

    def __str__(self):
        return f"slot {self.slot}: {self.constraint} violated by {self.amount:.3e}"


def schedule_cost_arrays(prices: np.ndarray, x: np.ndarray) -> float:
    """Exactly rounded sum of price*x (fsum over the per-slot products)."""
    return math.fsum(p * v for p, v in zip(prices.tolist(), x.tolist()))


def schedule_cost(schedule: Schedule, instance: Instance) -> float:
    """Total spend of a schedule against an instance's prices."""
    if len(schedule) != len(instance):
        raise ValueError("schedule and instance lengths differ")
    return schedule_cost_arrays(instance.prices, schedule.x)


def check_feasibility(
    schedule: Schedule,
    instance: Instance,
    spec: InventorySpec,
    tol: float = FEASIBILITY_TOL,
) -> list[Violation]:
    """Check every per-slot constraint; an empty list means feasible.

    One record is produced per (slot, constraint) pair that fails by more
    than ``tol`` (absolute).
    """
    if len(schedule) != len(instance):
        raise ValueError("schedule and instance lengths differ")
    x, b = schedule.x, schedule.b
    d = instance.demands
    prev = np.concatenate(([0.0], b[:-1]))
    cap = spec.capacity

    checks = [
        ("coverage", (d - np.minimum(spec.rho_d, prev)) - x),
        ("input_rate", x - (d + np.minimum(spec.rho_c, cap - prev))),
        ("balance", np.abs(b - (prev + x - d))),
        ("level_low", -b),
        ("level_high", b - cap),
        ("purchase_sign", -x),
    ]
    violations = []
    for t in range(len(schedule)):
        for name, excess in checks:
            e = float(excess[t])
            if e > tol:
                violations.append(Violation(t, name, e))
    return violations


def project_purchases(
    x: Sequence[float], demands: Sequence[float], spec: InventorySpec
) -> tuple[np.ndarray, np.ndarray]:
    """Project a purchase plan onto the feasible set, slot by slot.

    Each x(t) is clamped into the interval allowed by the evolving inventory
    level; coverage wins if rounding ever makes the interval empty.  A plan
    that is already feasible for these demands passes through unchanged, so
    the projection is idempotent.
    """
    demands = np.asarray(demands, dtype=float)
    x = np.asarray(x, dtype=float)
    if len(x) != len(demands):
        raise ValueError("plan and demand lengths differ")
    out_x = np.empty(len(x))
    out_b = np.empty(len(x))
    level = 0.0
    cap = spec.capacity
    for t in range(len(x)):
        d = demands[t]
        lo = max(0.0, d - min(spec.rho_d, level))
        hi = max(lo, d + min(spec.rho_c, max(cap - level, 0.0)))
        xt = min(max(x[t], lo), hi)
        if lo <= 0.0 and xt < _PURCHASE_SNAP:
            xt = 0.0
        level = min(max(level + xt - d, 0.0), cap)
        out_x[t] = xt
        out_b[t] = level
    return out_x, out_b
