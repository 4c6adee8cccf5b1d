# ferry_planner/core/model_builder.py

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import replace
from typing import Dict, List, Mapping, Optional

import numpy as np

from ferry_planner.config import Config
from ferry_planner.core.errors import FerryPlannerError
from ferry_planner.core.linearizer import Linearizer
from ferry_planner.core.scenario_manager import ScenarioManager
from ferry_planner.models.milp import MilpModel, NameTuple, name_key
from ferry_planner.models.scenario import Scenario
from ferry_planner.utils.helpers import amortization_factor

logger = logging.getLogger("ferry_planner.model")

INF = math.inf
EPS = 1e-9

MODES = ("candidates", "secant")

PORT_PERIOD_KINDS = (
    "P_g_plus", "P_g_minus", "P_pv", "P_pv2g", "P_pv2b", "P_g2b", "P_b2g",
    "P_b_plus", "P_b_minus", "E_b_i",
)
VESSEL_FLOW_KINDS = ("P_g2v", "P_pv2v", "P_b2v")
PV_KINDS = ("P_pv", "P_pv2v", "P_pv2b", "P_pv2g")
STORAGE_KINDS = ("E_b_i", "P_b_plus", "P_b_minus", "P_g2b", "P_pv2b", "P_b2g", "P_b2v")

# decision symbol -> column families that may house it
SYMBOLS = {
    "E_b,i(t)": ("E_b_i",),
    "P_b,i+(t)": ("P_b_plus",),
    "P_b,i-(t)": ("P_b_minus",),
    "P_g,i+(t)": ("P_g_plus",),
    "P_g,i-(t)": ("P_g_minus",),
    "P_pv,i(t)": ("P_pv",),
    "P_g2v": ("P_g2v",),
    "P_pv2v": ("P_pv2v",),
    "P_b2v": ("P_b2v",),
    "P_g2b": ("P_g2b",),
    "P_pv2b": ("P_pv2b",),
    "P_b2g": ("P_b2g",),
    "P_pv2g": ("P_pv2g",),
    "E_v,l^arr": ("E_v_leg_arr",),
    "E_v,l^dep": ("E_v_leg_dep",),
    "E_v,l^char": ("E_v_leg_char",),
    "E_v^max": ("E_v_max",),
    "E_b,i^max": ("E_b_i_max",),
    "P_pv,i^max": ("P_pv_i_max",),
    "P_g,i^max": ("P_g_i_max",),
    "Z_v,l(t)": ("Z",),
    "t_v,l^travel": ("travel_choice", "t_travel"),
    "t_v,l^dep,act": ("t_dep",),
    "t_v,l^arr,act": ("t_arr",),
}


class ModelError(FerryPlannerError):
    """Raised for data preconditions, unknown experiments and unknown names."""
    pass


class _Assembler:
    """Collects columns and rows in assembly order."""

    def __init__(self):
        self.col_names: List[NameTuple] = []
        self.lower: List[float] = []
        self.upper: List[float] = []
        self.cost: List[float] = []
        self.binary: List[bool] = []
        self.col_tags: List[str] = []
        self.index: Dict[NameTuple, int] = {}

        self.row_names: List[NameTuple] = []
        self.row_tags: List[str] = []
        self.senses: List[str] = []
        self.rhs: List[float] = []
        self.entries: List[Dict[int, float]] = []

    def col(self, name: NameTuple, lower=0.0, upper=INF, cost=0.0, binary=False, tag="") -> int:
        if name in self.index:
            raise ModelError(f"duplicate column {name}")
        j = len(self.col_names)
        self.index[name] = j
        self.col_names.append(name)
        self.lower.append(float(lower))
        self.upper.append(float(upper))
        self.cost.append(float(cost))
        self.binary.append(bool(binary))
        self.col_tags.append(tag)
        return j

    def row(self, tag: str, name: NameTuple, terms, sense: str, rhs: float) -> int:
        merged: Dict[int, float] = {}
        for j, coef in terms:
            merged[j] = merged.get(j, 0.0) + float(coef)
        self.entries.append({j: c for j, c in merged.items() if c != 0.0})
        self.row_names.append(name)
        self.row_tags.append(tag)
        self.senses.append(sense)
        self.rhs.append(float(rhs))
        return len(self.senses) - 1

    def finish(self, scenario_name: str, meta: dict) -> MilpModel:
        rows, cols, vals = [], [], []
        for i, entry in enumerate(self.entries):
            for j in sorted(entry):
                rows.append(i)
                cols.append(j)
                vals.append(entry[j])
        return MilpModel(
            rows=np.array(rows, dtype=np.int64),
            cols=np.array(cols, dtype=np.int64),
            vals=np.array(vals, dtype=float),
            senses=tuple(self.senses),
            rhs=np.array(self.rhs, dtype=float),
            objective=np.array(self.cost, dtype=float),
            lower=np.array(self.lower, dtype=float),
            upper=np.array(self.upper, dtype=float),
            binary=np.array(self.binary, dtype=bool),
            col_names=tuple(self.col_names),
            row_names=tuple(self.row_names),
            col_tags=tuple(self.col_tags),
            row_tags=tuple(self.row_tags),
            name=scenario_name,
            meta=meta,
        )


class ModelBuilder:
    """
    Assembles the joint scheduling and sizing MILP for a scenario.
    Columns and rows are emitted in a fixed order: design columns, port
    period columns, then vessel legs in itinerary order.
    """

    # --------------------------------------------------------------
    # Objective
    # --------------------------------------------------------------
    @staticmethod
    def build_objective(s: Scenario) -> Dict[NameTuple, float]:
        """
        Cost coefficients keyed by column name: amortized capital on the
        design columns and energy purchase/revenue on the grid columns.
        """
        horizon = s.grid.horizon_hours
        a_vessel = amortization_factor(horizon, s.costs.amort_vessel_years)
        a_infra = amortization_factor(horizon, s.costs.amort_infra_years)
        tau = s.grid.step

        coefficients: Dict[NameTuple, float] = {}
        for v in s.vessels:
            coefficients[name_key("E_v_max", v.id)] = a_vessel * s.costs.vessel_batt_capex
        for p in s.ports:
            coefficients[name_key("P_g_i_max", p.id)] = a_infra * s.costs.grid_capex
            coefficients[name_key("P_pv_i_max", p.id)] = a_infra * s.costs.pv_capex
            coefficients[name_key("E_b_i_max", p.id)] = a_infra * s.costs.storage_capex
            for t, price in enumerate(p.prices[:s.grid.periods], start=1):
                coefficients[name_key("P_g_plus", p.id, None, t)] = tau * price
                coefficients[name_key("P_g_minus", p.id, None, t)] = -tau * p.feed_in_ratio * price
        return coefficients

    # --------------------------------------------------------------
    # Assembly
    # --------------------------------------------------------------
    @staticmethod
    def build_model(s: Scenario, mode: str = "candidates", big_m_scale: Optional[float] = None,
                    n_breakpoints: Optional[int] = None) -> MilpModel:
        if mode not in MODES:
            raise ModelError(f"unknown linearization mode '{mode}'")
        violations = ScenarioManager.validate(s)
        if violations:
            codes = ", ".join(sorted({v.code for v in violations}))
            raise ModelError(f"scenario has {len(violations)} violation(s): {codes}")

        big_m_scale = Config.BIG_M_SCALE if big_m_scale is None else float(big_m_scale)
        n_breakpoints = Config.ENVELOPE_BREAKPOINTS if n_breakpoints is None else int(n_breakpoints)
        if big_m_scale < 1.0:
            raise ModelError(f"big-M scale must be at least 1, got {big_m_scale}")

        grid = s.grid
        T, tau = grid.periods, grid.step
        toggles = s.toggles
        asm = _Assembler()
        costs = ModelBuilder.build_objective(s)

        def cost_of(name):
            return costs.get(name, 0.0)

        # -------------------- design columns --------------------
        e_max = {}
        for v in s.vessels:
            if toggles.vessel_sizing_enabled:
                lo, hi = v.soc_min, v.battery_bound_max
            else:
                lo = hi = v.battery_fixed
            name = name_key("E_v_max", v.id)
            e_max[v.id] = asm.col(name, lo, hi, cost_of(name), tag="eq8")

        pg_max, ppv_max, eb_max = {}, {}, {}
        port_ub = {}
        for p in s.ports:
            grid_ub = p.max_grid_power_bound if toggles.grid_power_optimized else p.grid_power_fixed
            pv_ub = p.max_pv_bound if toggles.pv_enabled else 0.0
            st_ub = p.max_storage_bound if toggles.storage_enabled else 0.0
            st_power = p.storage_power_bound if st_ub > 0 else 0.0
            port_ub[p.id] = (grid_ub, pv_ub, st_ub, st_power)

            name = name_key("P_g_i_max", p.id)
            lo = 0.0 if toggles.grid_power_optimized else p.grid_power_fixed
            pg_max[p.id] = asm.col(name, lo, grid_ub, cost_of(name), tag="eq17")
            name = name_key("P_pv_i_max", p.id)
            ppv_max[p.id] = asm.col(name, 0.0, pv_ub, cost_of(name), tag="eq22")
            name = name_key("E_b_i_max", p.id)
            eb_max[p.id] = asm.col(name, 0.0, st_ub, cost_of(name), tag="eq27")

        # -------------------- port period columns --------------------
        pc: Dict[str, Dict[str, List[int]]] = {}
        for p in s.ports:
            grid_ub, pv_ub, st_ub, st_power = port_ub[p.id]
            bounds = {
                "P_g_plus": (grid_ub, "eq18"),
                "P_g_minus": (grid_ub, "eq19"),
                "P_pv": (None, "eq20"),
                "P_pv2g": (pv_ub, "eq21"),
                "P_pv2b": (pv_ub if st_ub > 0 else 0.0, "eq21"),
                "P_g2b": (st_power, "eq25"),
                "P_b2g": (st_power, "eq24"),
                "P_b_plus": (st_power, "eq27"),
                "P_b_minus": (st_power, "eq27"),
                "E_b_i": (st_ub, "eq26"),
            }
            pc[p.id] = {kind: [] for kind in PORT_PERIOD_KINDS}
            for t in range(1, T + 1):
                for kind in PORT_PERIOD_KINDS:
                    ub, tag = bounds[kind]
                    if kind == "P_pv":
                        ub = pv_ub * p.pv_profile[t - 1]
                    name = name_key(kind, p.id, None, t)
                    pc[p.id][kind].append(asm.col(name, 0.0, ub, cost_of(name), tag=tag))

        m_power = {
            p.id: max(p.storage_power_bound, p.max_grid_power_bound) * big_m_scale for p in s.ports
        }
        # cap of the time big-M; each row uses the smallest value its window allows
        m_time = grid.horizon_hours * big_m_scale

        def time_m(slack: float) -> float:
            return min(grid.horizon_hours, max(slack, tau)) * big_m_scale

        # vessel charging flows by (port, period), filled while assembling legs
        charge_at: Dict[str, Dict[int, Dict[str, List[int]]]] = {
            p.id: {t: {kind: [] for kind in VESSEL_FLOW_KINDS} for t in range(1, T + 1)} for p in s.ports
        }

        # -------------------- vessel legs --------------------
        leg_options = {}
        for v in s.vessels:
            legs = s.legs_of(v.id)
            cap_ub = v.battery_bound_max if toggles.vessel_sizing_enabled else v.battery_fixed
            prev = None
            first_dep = None
            for leg in legs:
                ell = leg.index
                dep_ear, dep_lat = (grid.offset_hours(ts) for ts in leg.dep_window)
                arr_ear, arr_lat = (grid.offset_hours(ts) for ts in leg.arr_window)

                t_dep = asm.col(name_key("t_dep", v.id, ell), dep_ear, dep_lat, tag="eq1")
                t_arr = asm.col(name_key("t_arr", v.id, ell), arr_ear, arr_lat, tag="eq1")

                if mode == "candidates":
                    options = Linearizer.travel_options(leg, v, grid)
                    leg_options[f"{v.id}/{ell}"] = [(o.steps, o.travel_time, o.consumption) for o in options]
                    lo_y = 1.0 if len(options) == 1 else 0.0
                    choice = [
                        (asm.col(name_key("travel_choice", v.id, ell, o.steps), lo_y, 1.0, binary=True, tag="eq3"), o)
                        for o in options
                    ]
                    travel_terms = [(j, -o.travel_time) for j, o in choice]
                    consumption_terms = [(j, -o.consumption) for j, o in choice]
                else:
                    segments = Linearizer.secant_envelope(leg, v, n_breakpoints)
                    t_lo, t_hi = Linearizer.travel_interval(leg, v)
                    t_travel = asm.col(name_key("t_travel", v.id, ell), t_lo, t_hi, tag="eq3")
                    e_cons = asm.col(name_key("E_v_cons", v.id, ell), 0.0, INF, tag="eq4")
                    travel_terms = [(t_travel, -1.0)]
                    consumption_terms = [(e_cons, -1.0)]

                e_dep = asm.col(name_key("E_v_leg_dep", v.id, ell), v.soc_min, cap_ub, tag="eq6")
                e_char = asm.col(name_key("E_v_leg_char", v.id, ell), 0.0, cap_ub, tag="eq7")
                e_arr = asm.col(name_key("E_v_leg_arr", v.id, ell), v.soc_min, cap_ub, tag="eq8")

                # charging window of this leg: after the previous arrival, before departure
                if prev is None:
                    open_start = open_sure = 0.0
                else:
                    open_start = grid.offset_hours(prev.arr_window[0])
                    open_sure = grid.offset_hours(prev.arr_window[1])
                moored = []
                for t in range(1, T + 1):
                    start, end = (t - 1) * tau, t * tau
                    if start < open_start - EPS or end > dep_lat + EPS:
                        continue
                    forced = start >= open_sure - EPS and end <= dep_ear + EPS
                    z = asm.col(name_key("Z", v.id, ell, t), 1.0 if forced else 0.0, 1.0, binary=True, tag="eq11")
                    grid_ub, pv_ub, _, st_power = port_ub[leg.origin]
                    flows = {
                        "P_g2v": asm.col(name_key("P_g2v", v.id, ell, t), 0.0, grid_ub, tag="eq13"),
                        "P_pv2v": asm.col(name_key("P_pv2v", v.id, ell, t), 0.0, pv_ub, tag="eq13"),
                        "P_b2v": asm.col(name_key("P_b2v", v.id, ell, t), 0.0, st_power, tag="eq13"),
                    }
                    for kind, j in flows.items():
                        charge_at[leg.origin][t][kind].append(j)
                    moored.append((t, z, flows))

                # ---- schedule and consumption ----
                asm.row("eq2", name_key("eq2", v.id, ell), [(t_arr, 1.0), (t_dep, -1.0), *travel_terms], "E", 0.0)
                if mode == "candidates":
                    asm.row("eq3", name_key("eq3", v.id, ell), [(j, 1.0) for j, _ in choice], "E", 1.0)
                else:
                    for k, seg in enumerate(segments):
                        asm.row("eq4", name_key("eq4", v.id, ell, k + 1),
                                [(e_cons, 1.0), (t_travel, -seg.slope)], "G", seg.intercept)

                # ---- vessel energy ----
                asm.row("eq5", name_key("eq5", v.id, ell),
                        [(e_dep, 1.0), (e_char, 1.0), *consumption_terms, (e_arr, -1.0)], "G", 0.0)
                if prev is not None:
                    asm.row("eq6", name_key("eq6", v.id, ell),
                            [(e_dep, 1.0), (asm.index[name_key("E_v_leg_arr", v.id, prev.index)], -1.0)], "E", 0.0)
                charge_terms = [(e_char, 1.0)]
                for _, _, flows in moored:
                    charge_terms.extend((j, -tau) for j in flows.values())
                asm.row("eq7", name_key("eq7", v.id, ell), charge_terms, "E", 0.0)
                asm.row("eq8", name_key("eq8", v.id, ell), [(e_dep, 1.0), (e_char, 1.0), (e_max[v.id], -1.0)], "L", 0.0)
                if prev is None:
                    first_dep = e_dep
                    asm.row("eq9", name_key("eq9", v.id, ell), [(e_dep, 1.0), (e_max[v.id], -v.soc_init_frac)], "L", 0.0)
                if ell == legs[-1].index:
                    asm.row("eq10", name_key("eq10", v.id, ell), [(e_arr, 1.0), (e_max[v.id], -v.periodic_frac)], "G", 0.0)
                    asm.row("eq10-closure", name_key("eq10-closure", v.id, ell), [(e_arr, 1.0), (first_dep, -1.0)], "G", 0.0)

                # ---- charging windows ----
                t_arr_prev = None if prev is None else asm.index[name_key("t_arr", v.id, prev.index)]
                arr_lat_prev = None if prev is None else grid.offset_hours(prev.arr_window[1])
                for t, z, flows in moored:
                    flow_terms = [(j, 1.0) for j in flows.values()]
                    asm.row("eq11", name_key("eq11", v.id, ell, t), [*flow_terms, (z, -m_power[leg.origin])], "L", 0.0)
                    asm.row("eq17", name_key("eq17", v.id, ell, t), [*flow_terms, (pg_max[leg.origin], -1.0)], "L", 0.0)
                    # with Z = 0 the window bound t_dep >= dep_ear must still hold
                    m15 = time_m(t * tau - dep_ear)
                    asm.row("eq15", name_key("eq15", v.id, ell, t), [(z, m15), (t_dep, -1.0)], "L", m15 - t * tau)
                    if t_arr_prev is not None:
                        m16 = time_m(arr_lat_prev - (t - 1) * tau)
                        asm.row("eq16", name_key("eq16", v.id, ell, t), [(t_arr_prev, 1.0), (z, m16)], "L",
                                (t - 1) * tau + m16)
                prev = leg

        # -------------------- port balances --------------------
        for p in s.ports:
            cols = pc[p.id]
            for t in range(1, T + 1):
                k = t - 1
                at = charge_at[p.id][t]
                asm.row("eq17-grid", name_key("eq17-grid", f"{p.id}:import", None, t), [(cols["P_g_plus"][k], 1.0), (pg_max[p.id], -1.0)], "L", 0.0)
                asm.row("eq17-grid", name_key("eq17-grid", f"{p.id}:export", None, t), [(cols["P_g_minus"][k], 1.0), (pg_max[p.id], -1.0)], "L", 0.0)
                asm.row("eq18", name_key("eq18", p.id, None, t),
                        [(cols["P_g_plus"][k], 1.0), *[(j, -1.0) for j in at["P_g2v"]], (cols["P_g2b"][k], -1.0)], "E", 0.0)
                asm.row("eq19", name_key("eq19", p.id, None, t),
                        [(cols["P_g_minus"][k], 1.0), (cols["P_pv2g"][k], -1.0), (cols["P_b2g"][k], -1.0)], "E", 0.0)
                asm.row("eq20", name_key("eq20", p.id, None, t),
                        [(cols["P_pv"][k], 1.0), (ppv_max[p.id], -p.pv_profile[k])], "L", 0.0)
                asm.row("eq21", name_key("eq21", p.id, None, t),
                        [(cols["P_pv"][k], 1.0), *[(j, -1.0) for j in at["P_pv2v"]],
                         (cols["P_pv2b"][k], -1.0), (cols["P_pv2g"][k], -1.0)], "E", 0.0)
                asm.row("eq24", name_key("eq24", p.id, None, t),
                        [(cols["P_b_minus"][k], 1.0), *[(j, -1.0) for j in at["P_b2v"]], (cols["P_b2g"][k], -1.0)], "E", 0.0)
                asm.row("eq25", name_key("eq25", p.id, None, t),
                        [(cols["P_b_plus"][k], 1.0), (cols["P_g2b"][k], -1.0), (cols["P_pv2b"][k], -1.0)], "E", 0.0)

                # E_b(t) = E_b(t-1) + tau (eta_c P_in - P_out / eta_d), E_b(0) = phi_b E_b_max
                dynamics = [
                    (cols["E_b_i"][k], 1.0),
                    (cols["P_b_plus"][k], -tau * p.charge_eff),
                    (cols["P_b_minus"][k], tau / p.discharge_eff),
                ]
                if t == 1:
                    dynamics.append((eb_max[p.id], -p.storage_soc_init_frac))
                else:
                    dynamics.append((cols["E_b_i"][k - 1], -1.0))
                asm.row("eq26", name_key("eq26", p.id, None, t), dynamics, "E", 0.0)
                asm.row("eq27", name_key("eq27", f"{p.id}:max", None, t), [(cols["E_b_i"][k], 1.0), (eb_max[p.id], -1.0)], "L", 0.0)
                asm.row("eq27", name_key("eq27", f"{p.id}:min", None, t),
                        [(cols["E_b_i"][k], 1.0), (eb_max[p.id], -p.storage_soc_min_frac)], "G", 0.0)
            asm.row("eq26-terminal", name_key("eq26-terminal", p.id, None, T),
                    [(cols["E_b_i"][T - 1], 1.0), (eb_max[p.id], -p.storage_soc_init_frac)], "G", 0.0)

        meta = {
            "mode": mode,
            "big_m_scale": big_m_scale,
            "n_breakpoints": n_breakpoints,
            "m_power": m_power,
            "m_time": m_time,
            "tau": tau,
            "periods": T,
            "scenario": s.name,
            "source_hash": s.source_hash,
            "toggles": s.toggles.to_dict(),
            "travel_options": leg_options,
            "leg_origins": {f"{leg.vessel_id}/{leg.index}": leg.origin for leg in s.all_legs()},
            "vessels": {
                v.id: {
                    "battery_fixed": v.battery_fixed,
                    "battery_bound_max": v.battery_bound_max,
                    "soc_min": v.soc_min,
                }
                for v in s.vessels
            },
            "ports": {
                p.id: {
                    "grid_power_fixed": p.grid_power_fixed,
                    "max_grid_power_bound": p.max_grid_power_bound,
                    "max_pv_bound": p.max_pv_bound,
                    "max_storage_bound": p.max_storage_bound,
                    "storage_power_bound": p.storage_power_bound,
                }
                for p in s.ports
            },
        }
        model = asm.finish(s.name, meta)
        logger.info("built %s model for '%s': %d rows, %d columns, %d nonzeros, %d free binaries",
                    mode, s.name, model.n_rows, model.n_cols, len(model.vals), len(model.free_binaries()))
        return model

    # --------------------------------------------------------------
    # Experiment configurations (bound changes only)
    # --------------------------------------------------------------
    @staticmethod
    def fix_experiment(m: MilpModel, exp: int) -> MilpModel:
        """
        Restrict an all-features model to one rung of the experiment ladder:
        1 current design, 2 + PV and grid sizing, 3 + storage, 4 + vessel battery.
        """
        if exp not in (1, 2, 3, 4):
            raise ModelError(f"unknown experiment id {exp!r}")
        toggles = m.meta.get("toggles", {})
        if not all(toggles.values()):
            raise ModelError("experiments need a model built with every design feature enabled")

        lower = m.lower.copy()
        upper = m.upper.copy()

        def fix(indices, lo, hi):
            for j in indices:
                lower[j] = lo
                upper[j] = hi

        def cap(indices, hi):
            for j in indices:
                upper[j] = min(upper[j], hi)
                lower[j] = min(lower[j], upper[j])

        for port_id, info in m.meta["ports"].items():
            if exp == 1:
                fixed = info["grid_power_fixed"]
                if fixed is None:
                    raise ModelError(f"port {port_id} has no fixed grid power for the base design")
                fix(m.columns_of("P_g_i_max", port_id), fixed, fixed)
                fix(m.columns_of("P_pv_i_max", port_id), 0.0, 0.0)
                for kind in PV_KINDS:
                    cap(ModelBuilder._flows_at(m, kind, port_id), 0.0)
            else:
                fix(m.columns_of("P_g_i_max", port_id), 0.0, info["max_grid_power_bound"])
                fix(m.columns_of("P_pv_i_max", port_id), 0.0, info["max_pv_bound"])
            if exp < 3:
                fix(m.columns_of("E_b_i_max", port_id), 0.0, 0.0)
                for kind in STORAGE_KINDS:
                    cap(ModelBuilder._flows_at(m, kind, port_id), 0.0)
            else:
                fix(m.columns_of("E_b_i_max", port_id), 0.0, info["max_storage_bound"])

        for vessel_id, info in m.meta["vessels"].items():
            if exp < 4:
                fixed = info["battery_fixed"] if info["battery_fixed"] is not None else info["battery_bound_max"]
                fix(m.columns_of("E_v_max", vessel_id), fixed, fixed)
            else:
                fix(m.columns_of("E_v_max", vessel_id), info["soc_min"], info["battery_bound_max"])

        meta = dict(m.meta)
        meta["experiment"] = exp
        return replace(m, lower=lower, upper=upper, meta=meta)

    @staticmethod
    def _flows_at(m: MilpModel, kind: str, port_id: str) -> List[int]:
        """Columns of a flow family located at a port (vessel flows by leg origin)."""
        if kind not in VESSEL_FLOW_KINDS:
            return m.columns_of(kind, port_id)
        origins = m.meta.get("leg_origins", {})
        return [j for j in m.columns_of(kind)
                if origins.get(f"{m.col_names[j][1]}/{m.col_names[j][2]}") == port_id]

    # --------------------------------------------------------------
    # Lookup and derived models
    # --------------------------------------------------------------
    @staticmethod
    def var_lookup(m: MilpModel, name: tuple):
        key = tuple(name)
        if len(key) == 3:
            key = (key[0], key[1], None, key[2])
        elif len(key) == 2:
            key = (key[0], key[1], None, None)
        j = m.col_index.get(key)
        if j is None:
            raise ModelError(f"unknown variable {tuple(name)}")
        return m.var_ref(j)

    @staticmethod
    def symbol_coverage(m: MilpModel) -> dict:
        kinds = set(m.kind_index)
        housed, unhoused = {}, []
        for symbol, families in SYMBOLS.items():
            present = [k for k in families if k in kinds]
            if present:
                housed[symbol] = present[0]
            else:
                unhoused.append(symbol)
        return {"housed": housed, "unhoused": unhoused}

    @staticmethod
    def family_counts(m: MilpModel) -> Dict[str, int]:
        return dict(Counter(m.row_tags))

    @staticmethod
    def scale_objective(m: MilpModel, factor: float) -> MilpModel:
        if factor <= 0:
            raise ModelError(f"objective scale must be positive, got {factor}")
        return m.with_objective(m.objective * factor)

    @staticmethod
    def fix_binaries(m: MilpModel, assignment: Mapping[int, float]) -> MilpModel:
        lower = m.lower.copy()
        upper = m.upper.copy()
        for j, value in assignment.items():
            if not m.binary[j]:
                raise ModelError(f"column {m.col_names[j]} is not binary")
            lower[j] = upper[j] = float(round(value))
        return m.with_bounds(lower, upper)


build_model = ModelBuilder.build_model
build_objective = ModelBuilder.build_objective
fix_experiment = ModelBuilder.fix_experiment
var_lookup = ModelBuilder.var_lookup
symbol_coverage = ModelBuilder.symbol_coverage
family_counts = ModelBuilder.family_counts
scale_objective = ModelBuilder.scale_objective
fix_binaries = ModelBuilder.fix_binaries
