"""Online procurement with inventory management.

Cover a per-slot demand from a market with fluctuating prices or from a
capacity- and rate-limited inventory, minimising total spend.  The package
provides the optimal-competitive online policies (``BatMan`` for the
rate-free case, ``BatManRate`` with rate limits), the exact offline optimum,
simple baselines, instance generators including worst-case families, trace
ingestion, and a batch evaluation harness.
"""

from .baselines import no_str, on_fix, pre_day
from .batman import BatMan, run_batman
from .batmanrate import BatManRate, cal_rp, init_vs, run_batmanrate
from .core import (
    FEASIBILITY_TOL,
    Instance,
    InventorySpec,
    PriceBounds,
    Schedule,
    Violation,
    check_feasibility,
    project_purchases,
    schedule_cost,
)
from .harness import EvaluationReport, check_competitive_bound, evaluate
from .instances import (
    LoadedTraces,
    default_capacity,
    gen_interleaved,
    gen_kmin,
    gen_random,
    gen_reservation_adversary,
    load_traces,
    read_instance,
    write_instance,
)
from .offline import brute_force_dp, solve_opt
from .reservation import (
    AlphaContext,
    alpha,
    fill_fraction,
    inverse_reservation,
    inverse_reservation_integral,
    lambert_w0,
    reservation_amount,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaContext",
    "BatMan",
    "BatManRate",
    "EvaluationReport",
    "FEASIBILITY_TOL",
    "Instance",
    "InventorySpec",
    "LoadedTraces",
    "PriceBounds",
    "Schedule",
    "Violation",
    "alpha",
    "brute_force_dp",
    "cal_rp",
    "check_competitive_bound",
    "check_feasibility",
    "default_capacity",
    "evaluate",
    "fill_fraction",
    "gen_interleaved",
    "gen_kmin",
    "gen_random",
    "gen_reservation_adversary",
    "init_vs",
    "inverse_reservation",
    "inverse_reservation_integral",
    "lambert_w0",
    "load_traces",
    "no_str",
    "on_fix",
    "pre_day",
    "project_purchases",
    "read_instance",
    "run_batman",
    "run_batmanrate",
    "schedule_cost",
    "solve_opt",
    "write_instance",
]
