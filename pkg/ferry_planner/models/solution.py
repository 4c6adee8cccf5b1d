# ferry_planner/models/solution.py

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ferry_planner.config import Config
from ferry_planner.models.milp import NameTuple

LP_STATUSES = ("optimal", "infeasible", "unbounded", "iteration_limit")
MILP_STATUSES = ("optimal", "infeasible", "unbounded", "limit_incumbent", "limit_no_incumbent")


@dataclass(frozen=True)
class LpSolution:
    x: np.ndarray
    duals: np.ndarray
    objective: float
    status: str
    iterations: int = 0
    engine: str = ""
    message: str = ""

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"

    def to_dict(self):
        return {
            "status": self.status,
            "objective": self.objective,
            "iterations": self.iterations,
            "engine": self.engine,
            "message": self.message,
        }


@dataclass(frozen=True)
class Solution:
    """Result of a MILP solve: values by column name plus search statistics."""

    names: Tuple[NameTuple, ...]
    x: np.ndarray
    objective: float
    bound: float
    gap: float
    nodes: int
    wall_time: float
    status: str
    meta: Dict[str, Any] = field(default_factory=dict)

    @cached_property
    def values(self) -> Dict[NameTuple, float]:
        return {name: float(v) for name, v in zip(self.names, self.x)}

    def value(self, name: Sequence, default: float = 0.0) -> float:
        return self.values.get(tuple(name), default)

    @property
    def has_incumbent(self) -> bool:
        return self.status in ("optimal", "limit_incumbent")

    def to_dict(self):
        return {
            "status": self.status,
            "objective": self.objective,
            "bound": self.bound,
            "gap": self.gap,
            "nodes": self.nodes,
            "wall_time": round(self.wall_time, 3),
        }


@dataclass(frozen=True)
class BnbConfig:
    """Branch-and-bound settings; defaults come from Config."""

    gap_tolerance: float = 1e-5
    node_limit: int = 100000
    time_limit: float = 600.0
    branching_rule: str = "most_fractional"
    node_selection: str = "best_bound_plunge"
    lp_engine: str = "auto"
    workers: int = 1
    integrality_tol: float = 1e-6
    feasibility_tol: float = 1e-7
    log_nodes: bool = True

    def __post_init__(self):
        if self.gap_tolerance <= 0 or self.integrality_tol <= 0 or self.feasibility_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.node_limit < 1 or self.time_limit <= 0:
            raise ValueError("node and time limits must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.lp_engine not in ("auto", "native", "highs"):
            raise ValueError(f"unknown LP engine '{self.lp_engine}'")
        if self.branching_rule != "most_fractional":
            raise ValueError(f"unknown branching rule '{self.branching_rule}'")
        if self.node_selection != "best_bound_plunge":
            raise ValueError(f"unknown node selection rule '{self.node_selection}'")

    @classmethod
    def from_config(cls, **overrides) -> "BnbConfig":
        values = dict(
            gap_tolerance=Config.GAP_TOLERANCE,
            node_limit=Config.NODE_LIMIT,
            time_limit=Config.TIME_LIMIT,
            lp_engine=Config.LP_ENGINE,
            workers=Config.WORKERS,
            integrality_tol=Config.INTEGRALITY_TOL,
            feasibility_tol=Config.FEASIBILITY_TOL,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self):
        return {
            "gap_tolerance": self.gap_tolerance,
            "node_limit": self.node_limit,
            "time_limit": self.time_limit,
            "branching_rule": self.branching_rule,
            "node_selection": self.node_selection,
            "lp_engine": self.lp_engine,
            "workers": self.workers,
            "integrality_tol": self.integrality_tol,
            "feasibility_tol": self.feasibility_tol,
        }
