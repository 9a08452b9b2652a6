"""Instance generators (worst-case families and randomized) plus CSV
ingestion of price / demand / renewable traces.

Instance files are UTF-8 CSV with a header row and '.' as the decimal
separator.  Generated instances use columns ``index,price,demand``; trace
files provide ``index`` plus whichever of ``price``, ``demand``, ``load``,
``renewable`` they carry.  Coarser series (for example hourly readings next
to 5-minute prices) are expanded by repetition, so lengths must divide the
longest series evenly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import Instance, PriceBounds
from .reservation import AlphaContext

# linear server-energy model defaults: idle and peak draw per slot
DEFAULT_ENERGY_MODEL = (100.0, 250.0)

# one day of 5-minute slots
DEFAULT_HORIZON = 288


def default_capacity(instance: Instance, hours: float = 1.5, slots_per_hour: float = 12.0) -> float:
    """Capacity sized to carry the peak net demand for the given duration."""
    if len(instance) == 0:
        return 0.0
    return float(hours * slots_per_hour * instance.demands.max())


def gen_kmin(T: int, capacity: float, prices, bounds: PriceBounds, strict: bool = True) -> Instance:
    """All demand mass on the final slot: the pure buy-k-units search setting."""
    prices = np.asarray(prices, dtype=float)
    if len(prices) != T:
        raise ValueError(f"expected {T} prices, got {len(prices)}")
    if T < 1:
        raise ValueError("T must be >= 1")
    demands = np.zeros(T)
    demands[-1] = capacity
    return Instance.build(prices, demands, bounds, strict=strict)


def gen_interleaved(base: Instance, ctx: AlphaContext) -> Instance:
    """Insert a zero-demand slot at the threshold price before every slot of
    the base instance, plus one trailing slot.

    The threshold price triggers no reservation purchases, so the online
    policy's spend is unchanged, while the extra purchase opportunities can
    only help the offline optimum.
    """
    t = ctx.threshold_price
    n = len(base)
    prices = np.empty(2 * n + 1)
    demands = np.zeros(2 * n + 1)
    prices[0::2] = t
    prices[1::2] = base.prices
    demands[1::2] = base.demands
    return Instance.build(prices, demands, base.bounds, strict=True)


def gen_reservation_adversary(
    ctx: AlphaContext, capacity: float, q: float, N: int
) -> Instance:
    """Descending price ramp from the threshold down to q with zero demand,
    then one final slot demanding the full capacity at p_max.

    The policy charges exactly along the reservation curve during the ramp
    and pays p_max for the remainder, so as N grows its cost ratio against
    the optimum (buy everything at q) approaches the competitive ratio.
    """
    ctx.require_curve()
    if N < 2:
        raise ValueError("N must be >= 2")
    threshold = ctx.threshold_price
    if not (ctx.bounds.p_min < q < threshold):
        raise ValueError(
            f"q must lie strictly between p_min ({ctx.bounds.p_min}) and "
            f"the threshold price ({threshold}), got {q}"
        )
    prices = np.empty(N + 1)
    prices[:N] = np.linspace(threshold, q, N)
    prices[N] = ctx.bounds.p_max
    demands = np.zeros(N + 1)
    demands[N] = capacity
    return Instance.build(prices, demands, ctx.bounds, strict=True)


def gen_random(
    seed: int,
    T: int,
    bounds: PriceBounds,
    demand_scale: float = 1.0,
    zero_demand_fraction: float = 0.25,
) -> Instance:
    """Reproducible uniform prices in the band and nonnegative demands;
    a fixed fraction of slots carries no demand."""
    if T < 1:
        raise ValueError("T must be >= 1")
    rng = np.random.default_rng(seed)
    prices = rng.uniform(bounds.p_min, bounds.p_max, T)
    demands = rng.uniform(0.0, demand_scale, T)
    demands[rng.random(T) < zero_demand_fraction] = 0.0
    return Instance.build(prices, demands, bounds, strict=True)


# ----------------------------------------------------------------------
# CSV reading/writing
# ----------------------------------------------------------------------

FLOAT_FORMAT = "%.12g"


def write_instance(instance: Instance, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "price", "demand"])
        for i, (p, d) in enumerate(instance.slots()):
            writer.writerow([i, FLOAT_FORMAT % p, FLOAT_FORMAT % d])


def read_instance(
    path, bounds: PriceBounds | None = None, strict: bool = True
) -> Instance:
    """Read an ``index,price,demand`` file; bounds default to the price range
    observed in the file."""
    prices, _ = _read_column(path, "price", strict=True)
    demands, _ = _read_column(path, "demand", strict=True)
    if len(prices) != len(demands):
        raise ValueError(f"{path}: price and demand column lengths differ")
    if bounds is None:
        bounds = PriceBounds(float(prices.min()), float(prices.max()))
    return Instance.build(prices, demands, bounds, strict=strict)


def _read_column(path, column: str, strict: bool) -> tuple[np.ndarray, int]:
    """One named column as floats.

    Missing cells are an error in strict mode and are forward-filled (and
    counted) otherwise; unparsable or negative cells are always an error,
    reported with their 1-based row number.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        names = [h.strip().lower() for h in header]
        if column not in names:
            raise ValueError(
                f"{path}: no '{column}' column (found {', '.join(names)})"
            )
        pos = names.index(column)
        values: list[float] = []
        filled = 0
        last: float | None = None
        for rownum, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue  # blank line
            cell = row[pos].strip() if pos < len(row) else ""
            if cell == "":
                if strict or last is None:
                    raise ValueError(f"{path}:{rownum}: missing '{column}' value")
                values.append(last)
                filled += 1
                continue
            try:
                v = float(cell)
            except ValueError:
                raise ValueError(
                    f"{path}:{rownum}: cannot parse '{cell}' as a number"
                ) from None
            if v < 0.0:
                raise ValueError(f"{path}:{rownum}: negative '{column}' value {v}")
            values.append(v)
            last = v
    return np.array(values, dtype=float), filled


def _resample(series: np.ndarray, target: int, what: str) -> np.ndarray:
    """Expand a coarser series by repetition (e.g. hourly -> 5-minute)."""
    n = len(series)
    if n == target:
        return series
    if n == 0 or target % n != 0:
        raise ValueError(
            f"{what} series of length {n} cannot be aligned to {target} slots"
        )
    return np.repeat(series, target // n)


@dataclass(frozen=True)
class LoadedTraces:
    """Result of trace ingestion: the instance plus data-quality counters."""

    instance: Instance
    clamped_prices: int
    filled_values: int
    clamped_loads: int


def load_traces(
    price_path,
    demand_path,
    renewable_path=None,
    *,
    penetration: float = 0.0,
    energy_model: tuple[float, float] | None = None,
    bounds: PriceBounds | None = None,
    strict: bool = True,
) -> LoadedTraces:
    """Build an instance from price, demand and (optionally) renewable files.

    With an ``energy_model`` (idle, peak) the demand file is read as a
    normalized load in [0, 1] and mapped through the linear model
    ``idle + (peak - idle) * load``.  The renewable series is rescaled so it
    covers ``penetration`` of the total demand, then netted off slot by slot;
    surplus renewable is clipped at zero net demand (no grid export).
    """
    if not (0.0 <= penetration):
        raise ValueError("penetration must be >= 0")
    prices, fill_p = _read_column(price_path, "price", strict)

    demand_col = "load" if energy_model is not None else "demand"
    try:
        raw_demand, fill_d = _read_column(demand_path, demand_col, strict)
    except ValueError:
        # accept either column name for the demand file
        alt = "demand" if demand_col == "load" else "load"
        raw_demand, fill_d = _read_column(demand_path, alt, strict)

    clamped_loads = 0
    if energy_model is not None:
        idle, peak = energy_model
        if not (0.0 <= idle <= peak):
            raise ValueError("energy model needs 0 <= idle <= peak")
        over = raw_demand > 1.0
        if np.any(over):
            if strict:
                bad = int(np.flatnonzero(over)[0])
                raise ValueError(
                    f"{demand_path}: load {raw_demand[bad]} at row {bad + 2} "
                    "exceeds 1"
                )
            clamped_loads = int(over.sum())
            raw_demand = np.minimum(raw_demand, 1.0)
        demand = idle + (peak - idle) * raw_demand
    else:
        demand = raw_demand

    fill_r = 0
    renewable = None
    if renewable_path is not None:
        renewable, fill_r = _read_column(renewable_path, "renewable", strict)
    elif penetration > 0.0:
        raise ValueError("penetration > 0 requires a renewable trace")

    lengths = [len(prices), len(demand)]
    if renewable is not None:
        lengths.append(len(renewable))
    target = max(lengths)
    prices = _resample(prices, target, "price")
    demand = _resample(demand, target, "demand")

    if renewable is not None and penetration > 0.0:
        renewable = _resample(renewable, target, "renewable")
        total_r = renewable.sum()
        if total_r <= 0.0:
            raise ValueError("renewable trace sums to zero; cannot rescale")
        scaled = renewable * (penetration * demand.sum() / total_r)
        net = np.maximum(demand - scaled, 0.0)
    else:
        net = demand

    if bounds is None:
        if prices.min() <= 0.0:
            raise ValueError(
                "prices include zero; supply explicit bounds with p_min > 0"
            )
        bounds = PriceBounds(float(prices.min()), float(prices.max()))
    instance = Instance.build(prices, net, bounds, strict=strict)
    return LoadedTraces(
        instance=instance,
        clamped_prices=instance.clamped_prices,
        filled_values=fill_p + fill_d + fill_r,
        clamped_loads=clamped_loads,
    )
