# ferry_planner/models/experiment.py

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

from ferry_planner.models.solution import Solution
from ferry_planner.models.trace import CostBreakdown, DispatchTrace

EXPERIMENT_NAMES = {
    1: "current design",
    2: "PV and grid sizing",
    3: "PV, grid and storage sizing",
    4: "full design including vessel batteries",
}


@dataclass(frozen=True)
class ExperimentResult:
    """Design outcome, recomputed costs and solve statistics of one experiment."""

    experiment: int
    grid_power: Dict[str, float]
    vessel_battery: Dict[str, float]
    storage_energy: Dict[str, float]
    pv_power: Dict[str, float]
    costs: CostBreakdown
    status: str
    objective: float
    bound: float
    gap: float
    nodes: int
    wall_time: float
    pv_limit: float = 0.0
    storage_limit: float = 0.0
    vessel_optimized: bool = False
    price_factor: float = 1.0
    solution: Optional[Solution] = field(default=None, compare=False, repr=False)
    trace: Optional[DispatchTrace] = field(default=None, compare=False, repr=False)

    @property
    def name(self) -> str:
        return EXPERIMENT_NAMES.get(self.experiment, f"experiment {self.experiment}")

    def stats(self):
        return {
            "status": self.status,
            "objective": self.objective,
            "bound": self.bound,
            "gap": self.gap,
            "nodes": self.nodes,
            "wall_time": round(self.wall_time, 3),
        }

    def to_dict(self):
        return {
            "experiment": self.experiment,
            "name": self.name,
            "price_factor": self.price_factor,
            "design": {
                "grid_power_mw": dict(self.grid_power),
                "vessel_battery_mwh": dict(self.vessel_battery),
                "storage_energy_mwh": dict(self.storage_energy),
                "pv_power_mw": dict(self.pv_power),
            },
            "limits": {
                "pv_mw": self.pv_limit,
                "storage_mwh": self.storage_limit,
                "vessel_optimized": self.vessel_optimized,
            },
            "costs": self.costs.to_dict(),
            "stats": self.stats(),
        }
