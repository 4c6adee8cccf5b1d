# ferry_planner/models/trace.py

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, List, Optional

import numpy as np

PORT_FLOWS = ("P_g2v", "P_pv2v", "P_b2v", "P_g2b", "P_pv2b", "P_b2g", "P_pv2g")
VESSEL_FLOWS = ("P_g2v", "P_pv2v", "P_b2v")


@dataclass
class LegRecord:
    vessel_id: str
    index: int
    origin: str
    destination: str
    departure: float
    arrival: float
    reported_arrival: float
    travel_time: float
    speed: float
    consumption: float
    modeled_consumption: float
    energy_dep: float
    energy_char: float
    energy_arr: float
    # modeled minus law consumption on this leg, and the sum carried in from earlier legs
    model_slack: float = 0.0
    carried_slack: float = 0.0

    def to_dict(self):
        return {
            "vessel": self.vessel_id,
            "leg": self.index,
            "origin": self.origin,
            "destination": self.destination,
            "departure_h": self.departure,
            "arrival_h": self.arrival,
            "travel_time_h": self.travel_time,
            "speed_kn": self.speed,
            "consumption_mwh": self.consumption,
            "energy_dep_mwh": self.energy_dep,
            "energy_char_mwh": self.energy_char,
            "energy_arr_mwh": self.energy_arr,
            "model_slack_mwh": self.model_slack,
        }


@dataclass
class VesselTrace:
    """Charging, mooring and recursed state of charge of one vessel."""

    vessel_id: str
    battery: float
    flows: Dict[str, np.ndarray]
    charge_by_leg: Dict[int, np.ndarray]
    mooring_flag_by_leg: Dict[int, np.ndarray]
    mooring: List[Optional[str]]
    soc: np.ndarray
    legs: List[LegRecord] = field(default_factory=list)
    slack: Optional[np.ndarray] = None

    @property
    def charging(self) -> np.ndarray:
        return sum(self.flows[k] for k in VESSEL_FLOWS)

    @property
    def planned_soc(self) -> np.ndarray:
        """State of charge under the modeled consumption the schedule was planned with."""
        return self.soc if self.slack is None else self.soc - self.slack


@dataclass
class PortTrace:
    """Seven flows, grid exchange and recursed storage energy at one port."""

    port_id: str
    grid_power: float
    pv_power: float
    storage_energy: float
    flows: Dict[str, np.ndarray]
    pv_available: np.ndarray
    soc: np.ndarray

    @property
    def grid_import(self) -> np.ndarray:
        return self.flows["P_g2v"] + self.flows["P_g2b"]

    @property
    def grid_export(self) -> np.ndarray:
        return self.flows["P_pv2g"] + self.flows["P_b2g"]

    @property
    def grid_net(self) -> np.ndarray:
        return self.grid_import - self.grid_export

    @property
    def pv_generation(self) -> np.ndarray:
        return self.flows["P_pv2v"] + self.flows["P_pv2b"] + self.flows["P_pv2g"]

    @property
    def storage_in(self) -> np.ndarray:
        return self.flows["P_g2b"] + self.flows["P_pv2b"]

    @property
    def storage_out(self) -> np.ndarray:
        return self.flows["P_b2v"] + self.flows["P_b2g"]


@dataclass
class DispatchTrace:
    periods: int
    step: float
    timestamps: List[datetime]
    ports: Dict[str, PortTrace]
    vessels: Dict[str, VesselTrace]
    mode: str = "candidates"


@dataclass(frozen=True)
class CostBreakdown:
    """Capital and operating cost components in kUSD over the horizon."""

    vessel_capital: Dict[str, float]
    storage_capital: Dict[str, float]
    pv_capital: Dict[str, float]
    grid_capital: Dict[str, float]
    purchase: Dict[str, float]
    revenue: Dict[str, float]
    total: float

    @property
    def capital(self) -> float:
        return (sum(self.vessel_capital.values()) + sum(self.storage_capital.values())
                + sum(self.pv_capital.values()) + sum(self.grid_capital.values()))

    @property
    def purchase_total(self) -> float:
        return sum(self.purchase.values())

    @property
    def revenue_total(self) -> float:
        return sum(self.revenue.values())

    def to_dict(self):
        return {
            "vessel_capital": dict(self.vessel_capital),
            "storage_capital": dict(self.storage_capital),
            "pv_capital": dict(self.pv_capital),
            "grid_capital": dict(self.grid_capital),
            "purchase": dict(self.purchase),
            "revenue": dict(self.revenue),
            "capital": self.capital,
            "purchase_total": self.purchase_total,
            "revenue_total": self.revenue_total,
            "total": self.total,
        }
