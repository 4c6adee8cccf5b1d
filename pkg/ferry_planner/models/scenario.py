# ferry_planner/models/scenario.py

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta
from typing import Dict, List, Optional, Tuple

from ferry_planner.utils.helpers import format_timestamp, hours_between


@dataclass(frozen=True)
class TimeGrid:
    """Uniform planning grid: T periods of length `step` hours."""

    start: datetime
    periods: int
    step: float

    @property
    def horizon_hours(self) -> float:
        return self.periods * self.step

    @property
    def end(self) -> datetime:
        return self.start + timedelta(hours=self.horizon_hours)

    def offset_hours(self, ts: datetime) -> float:
        return hours_between(self.start, ts)

    def to_dict(self):
        return {
            "start": format_timestamp(self.start),
            "periods": self.periods,
            "step": self.step,
        }


@dataclass(frozen=True)
class PortSite:
    """A charging site with its design bounds and per-period series."""

    id: str
    max_grid_power_bound: float
    max_pv_bound: float
    max_storage_bound: float
    storage_power_bound: float
    charge_eff: float = 0.9
    discharge_eff: float = 0.95
    storage_soc_min_frac: float = 0.0
    storage_soc_init_frac: float = 0.8
    feed_in_ratio: float = 0.2
    prices: Tuple[float, ...] = ()
    pv_profile: Tuple[float, ...] = ()
    grid_power_fixed: Optional[float] = None
    name: str = ""

    def to_dict(self):
        return {
            "id": self.id,
            "name": self.name,
            "max_grid_power_bound": self.max_grid_power_bound,
            "grid_power_fixed": self.grid_power_fixed,
            "max_pv_bound": self.max_pv_bound,
            "max_storage_bound": self.max_storage_bound,
            "storage_power_bound": self.storage_power_bound,
            "charge_eff": self.charge_eff,
            "discharge_eff": self.discharge_eff,
            "storage_soc_min_frac": self.storage_soc_min_frac,
            "storage_soc_init_frac": self.storage_soc_init_frac,
            "feed_in_ratio": self.feed_in_ratio,
        }


@dataclass(frozen=True)
class Vessel:
    id: str
    battery_bound_max: float
    soc_min: float
    displacement: float
    friction_const: float
    battery_fixed: Optional[float] = None
    periodic_frac: float = 0.5
    soc_init_frac: float = 0.8
    speed_min: float = 10.0
    speed_max: float = 25.0
    name: str = ""

    def to_dict(self):
        return {
            "id": self.id,
            "name": self.name,
            "battery_bound_max": self.battery_bound_max,
            "battery_fixed": self.battery_fixed,
            "soc_min": self.soc_min,
            "displacement": self.displacement,
            "friction_const": self.friction_const,
            "periodic_frac": self.periodic_frac,
            "soc_init_frac": self.soc_init_frac,
            "speed_min": self.speed_min,
            "speed_max": self.speed_max,
        }


@dataclass(frozen=True)
class Leg:
    """One directed trip; `index` is 1-based within the vessel's itinerary."""

    vessel_id: str
    index: int
    origin: str
    destination: str
    distance: float
    displacement: float
    dep_window: Tuple[datetime, datetime]
    arr_window: Tuple[datetime, datetime]
    travel_time_bounds: Tuple[float, float]

    @property
    def key(self) -> Tuple[str, int]:
        return (self.vessel_id, self.index)

    def to_dict(self):
        return {
            "vessel": self.vessel_id,
            "origin": self.origin,
            "destination": self.destination,
            "distance": self.distance,
            "displacement": self.displacement,
            "dep_window": [format_timestamp(t) for t in self.dep_window],
            "arr_window": [format_timestamp(t) for t in self.arr_window],
            "travel_time": list(self.travel_time_bounds),
        }


@dataclass(frozen=True)
class CostCoefficients:
    storage_capex: float
    pv_capex: float
    grid_capex: float
    vessel_batt_capex: float
    amort_infra_years: float = 15.0
    amort_vessel_years: float = 10.0

    def to_dict(self):
        return {
            "storage_capex": self.storage_capex,
            "pv_capex": self.pv_capex,
            "grid_capex": self.grid_capex,
            "vessel_batt_capex": self.vessel_batt_capex,
            "amort_infra_years": self.amort_infra_years,
            "amort_vessel_years": self.amort_vessel_years,
        }


@dataclass(frozen=True)
class DesignToggles:
    pv_enabled: bool = True
    storage_enabled: bool = True
    vessel_sizing_enabled: bool = True
    grid_power_optimized: bool = True

    def to_dict(self):
        return {
            "pv_enabled": self.pv_enabled,
            "storage_enabled": self.storage_enabled,
            "vessel_sizing_enabled": self.vessel_sizing_enabled,
            "grid_power_optimized": self.grid_power_optimized,
        }


@dataclass(frozen=True)
class Scenario:
    """
    A complete problem instance in canonical units.
    Values are never mutated after load; derived variants go through
    dataclasses.replace.
    """

    grid: TimeGrid
    ports: Tuple[PortSite, ...]
    vessels: Tuple[Vessel, ...]
    legs: Dict[str, Tuple[Leg, ...]]
    costs: CostCoefficients
    toggles: DesignToggles = field(default_factory=DesignToggles)
    name: str = "scenario"
    resale_ratio_unused: Optional[float] = None
    source_hash: str = ""

    def port(self, port_id: str) -> Optional[PortSite]:
        for p in self.ports:
            if p.id == port_id:
                return p
        return None

    def vessel(self, vessel_id: str) -> Optional[Vessel]:
        for v in self.vessels:
            if v.id == vessel_id:
                return v
        return None

    def legs_of(self, vessel_id: str) -> Tuple[Leg, ...]:
        return tuple(self.legs.get(vessel_id, ()))

    def all_legs(self) -> List[Leg]:
        return [leg for v in self.vessels for leg in self.legs_of(v.id)]

    def with_toggles(self, **toggles) -> "Scenario":
        return replace(self, toggles=replace(self.toggles, **toggles))


@dataclass(frozen=True)
class Violation:
    """
    A broken invariant, reported as data.
    Scenario checks fill `code`; dispatch checks also fill the equation tag,
    the period and the residual.
    """

    code: str
    message: str
    entity: Optional[str] = None
    equation: Optional[str] = None
    period: Optional[int] = None
    residual: Optional[float] = None

    def to_dict(self):
        return {
            "code": self.code,
            "message": self.message,
            "entity": self.entity,
            "equation": self.equation,
            "period": self.period,
            "residual": self.residual,
        }

    def __str__(self):
        where = f" [{self.entity}]" if self.entity else ""
        when = f" t={self.period}" if self.period is not None else ""
        return f"{self.code}{where}{when}: {self.message}"
