# ferry_planner/core/oracle.py

from __future__ import annotations

import itertools
import logging
import math
import time
from collections import defaultdict
from typing import Dict, List, Optional, Tuple

import numpy as np

from ferry_planner.core.errors import FerryPlannerError
from ferry_planner.core.lp_solver import LpSolver
from ferry_planner.core.model_builder import ModelBuilder
from ferry_planner.models.milp import MilpModel
from ferry_planner.models.scenario import Scenario
from ferry_planner.models.solution import Solution

logger = logging.getLogger("ferry_planner.oracle")

MAX_FREE_BINARIES = 22


class OracleSizeError(FerryPlannerError):
    """Raised when an instance has too many free binaries to enumerate."""
    pass


def _groups(m: MilpModel) -> Tuple[List[List[int]], List[int]]:
    """Free travel-choice columns grouped per leg, and the free mooring flags."""
    free = m.free_binaries()
    by_leg: Dict[tuple, List[int]] = defaultdict(list)
    singles = []
    for j in free:
        kind, entity, leg, _ = m.col_names[j]
        if kind == "travel_choice":
            by_leg[(entity, leg)].append(j)
        else:
            singles.append(j)
    return [by_leg[key] for key in sorted(by_leg, key=lambda k: (k[0], k[1]))], singles


def brute_force(s: Scenario, model: Optional[MilpModel] = None, engine: Optional[str] = None) -> Solution:
    """
    Exact optimum by enumeration: every one-hot choice of travel option per
    leg combined with every on/off pattern of the free mooring flags, each
    solved as an LP with the binaries fixed by bounds.
    """
    m = model if model is not None else ModelBuilder.build_model(s, mode="candidates")
    travel_groups, flags = _groups(m)
    n_free = sum(len(g) for g in travel_groups) + len(flags)
    if n_free > MAX_FREE_BINARIES:
        raise OracleSizeError(f"{n_free} free binaries exceed the enumeration cap of {MAX_FREE_BINARIES}")

    started = time.perf_counter()
    A = m.matrix("csc")
    best_x: Optional[np.ndarray] = None
    best_obj = math.inf
    n_lps = 0
    unbounded = False

    for picked in itertools.product(*travel_groups):
        for pattern in itertools.product((0.0, 1.0), repeat=len(flags)):
            lower = m.lower.copy()
            upper = m.upper.copy()
            for group, j_on in zip(travel_groups, picked):
                for j in group:
                    lower[j] = upper[j] = 1.0 if j == j_on else 0.0
            for j, value in zip(flags, pattern):
                lower[j] = upper[j] = value
            lp = LpSolver.solve_arrays(A, m.senses, m.rhs, m.objective, lower, upper, engine=engine)
            n_lps += 1
            if lp.status == "unbounded":
                unbounded = True
            if lp.status == "optimal" and lp.objective < best_obj:
                best_obj = lp.objective
                best_x = lp.x.copy()

    wall = time.perf_counter() - started
    if best_x is not None:
        status = "optimal"
    else:
        status = "unbounded" if unbounded else "infeasible"
    logger.info("enumerated %d LPs over %d free binaries: %s %s", n_lps, n_free, status,
                f"{best_obj:.6f}" if best_x is not None else "")

    meta = dict(m.meta)
    meta["oracle"] = "brute_force"
    return Solution(
        names=m.col_names,
        x=best_x if best_x is not None else np.zeros(m.n_cols),
        objective=float(best_obj) if best_x is not None else (-math.inf if unbounded else math.inf),
        bound=float(best_obj) if best_x is not None else math.inf,
        gap=0.0 if best_x is not None else math.inf,
        nodes=n_lps,
        wall_time=wall,
        status=status,
        meta=meta,
    )
