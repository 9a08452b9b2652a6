import math

import numpy as np
import pytest

from olim import Instance, InventorySpec, PriceBounds


def random_instance(seed, T=24, theta=4.0, p_min=1.0, demand_scale=1.0,
                    zero_fraction=0.25):
    """Seeded instance with uniform prices over the band."""
    rng = np.random.default_rng(seed)
    bounds = PriceBounds(p_min, p_min * theta)
    prices = rng.uniform(bounds.p_min, bounds.p_max, T)
    demands = rng.uniform(0.0, demand_scale, T)
    demands[rng.random(T) < zero_fraction] = 0.0
    return Instance(prices, demands, bounds)


def random_spec(rng, capacity=None, rate_ratio=None):
    cap = float(rng.uniform(0.5, 5.0)) if capacity is None else capacity
    if rate_ratio is None:
        return InventorySpec(cap)
    return InventorySpec(cap, rho_c=rate_ratio * cap, rho_d=rate_ratio * cap)


def kahan_sum(values):
    """Compensated summation; independent oracle for cost computations."""
    total = 0.0
    carry = 0.0
    for v in values:
        y = v - carry
        t = total + y
        carry = (t - total) - y
        total = t
    return total


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
