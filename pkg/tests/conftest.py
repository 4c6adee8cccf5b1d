from datetime import datetime, timedelta
from pathlib import Path

import numpy as np
import pytest

from ferry_planner.core.activity_logger import ActivityLogger
from ferry_planner.models.scenario import (
    CostCoefficients,
    DesignToggles,
    Leg,
    PortSite,
    Scenario,
    TimeGrid,
    Vessel,
)
from ferry_planner.models.solution import BnbConfig

ROOT = Path(__file__).resolve().parent.parent
DESK_BUNDLE = ROOT / "bundles" / "ba_co_desk"
WEEK_BUNDLE = ROOT / "bundles" / "ba_co_week"

START = datetime(2024, 3, 4, 0, 0)

PRICES_A = (0.10, 0.08, 0.06, 0.05, 0.07, 0.09, 0.12, 0.15, 0.14, 0.11, 0.10, 0.09)
PV_SHAPE = (0.0, 0.0, 0.2, 0.5, 0.8, 0.9, 0.7, 0.4, 0.1, 0.0, 0.0, 0.0)

# k * d^3 * w^(2/3) = 5 MWh h^2 for d = 10 nmi, w = 1000 t
FRICTION = 5e-5


def at(hours):
    return START + timedelta(hours=hours)


def make_leg(vessel_id, index, origin, destination, dep, arr, travel=(1.0, 1.5), distance=10.0):
    return Leg(
        vessel_id=vessel_id,
        index=index,
        origin=origin,
        destination=destination,
        distance=distance,
        displacement=1000.0,
        dep_window=(at(dep[0]), at(dep[1])),
        arr_window=(at(arr[0]), at(arr[1])),
        travel_time_bounds=travel,
    )


def make_scenario(prices_a=PRICES_A, prices_b=None, pv=PV_SHAPE, legs=None, pv_bound=1.0,
                  storage_bound=4.0, toggles=None, vessel=None, costs=None, grid_bound=10.0, step=0.5):
    """
    Two ports A and B, one vessel with two legs A->B->A, T=12 half-hour periods.
    Leg 1 departs in [1.0, 1.5] h, leg 2 in [3.5, 4.0] h; each leg may take 1.0 or 1.5 h.
    A finer step divides the same 6 h; every half-hour value is repeated over its sub-periods.
    """
    prices_b = prices_b if prices_b is not None else tuple(1.2 * p for p in prices_a)
    repeat = int(round(0.5 / step))

    def refine(series):
        return tuple(float(v) for v in series for _ in range(repeat))

    ports = tuple(
        PortSite(
            id=port_id,
            max_grid_power_bound=grid_bound,
            max_pv_bound=pv_bound,
            max_storage_bound=storage_bound,
            storage_power_bound=2.0,
            prices=refine(prices),
            pv_profile=refine(pv),
            grid_power_fixed=5.0,
        )
        for port_id, prices in (("A", prices_a), ("B", prices_b))
    )
    vessel = vessel or Vessel(
        id="V1",
        battery_bound_max=20.0,
        battery_fixed=12.0,
        soc_min=2.0,
        displacement=1000.0,
        friction_const=FRICTION,
        speed_min=5.0,
        speed_max=20.0,
    )
    legs = legs or (
        make_leg(vessel.id, 1, "A", "B", (1.0, 1.5), (2.0, 3.0)),
        make_leg(vessel.id, 2, "B", "A", (3.5, 4.0), (4.5, 5.5)),
    )
    return Scenario(
        grid=TimeGrid(start=START, periods=12 * repeat, step=0.5 / repeat),
        ports=ports,
        vessels=(vessel,),
        legs={vessel.id: tuple(legs)},
        costs=costs or CostCoefficients(storage_capex=250, pv_capex=850, grid_capex=172, vessel_batt_capex=400),
        toggles=toggles or DesignToggles(),
        name="tiny",
    )


def random_scenario(seed: int) -> Scenario:
    """Tiny instance with random prices, PV shape, costs and battery limits."""
    rng = np.random.default_rng(seed)
    prices_a = tuple(float(v) for v in np.round(rng.uniform(0.04, 0.2, 12), 4))
    prices_b = tuple(float(v) for v in np.round(rng.uniform(0.04, 0.2, 12), 4))
    pv = tuple(float(v) for v in np.round(np.array(PV_SHAPE) * rng.uniform(0.5, 1.0), 4))
    vessel = Vessel(
        id="V1",
        battery_bound_max=float(rng.choice([14.0, 16.0, 20.0])),
        battery_fixed=12.0,
        soc_min=float(rng.choice([1.0, 2.0])),
        displacement=1000.0,
        friction_const=FRICTION * float(rng.uniform(0.8, 1.2)),
        speed_min=5.0,
        speed_max=20.0,
    )
    costs = CostCoefficients(
        storage_capex=float(rng.uniform(150, 350)),
        pv_capex=float(rng.uniform(600, 1000)),
        grid_capex=float(rng.uniform(100, 250)),
        vessel_batt_capex=float(rng.uniform(300, 500)),
    )
    return make_scenario(prices_a=prices_a, prices_b=prices_b, pv=pv, vessel=vessel, costs=costs,
                         pv_bound=float(rng.choice([0.0, 0.5, 1.0])))


@pytest.fixture
def tiny():
    return make_scenario()


@pytest.fixture
def exact_cfg():
    return BnbConfig(gap_tolerance=1e-10, log_nodes=False)


@pytest.fixture(autouse=True)
def clear_audit_trail():
    ActivityLogger.clear()
    yield
    ActivityLogger.clear()
