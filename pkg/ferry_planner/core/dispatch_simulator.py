# ferry_planner/core/dispatch_simulator.py

from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd

from ferry_planner.config import Config
from ferry_planner.core.linearizer import Linearizer
from ferry_planner.core.scenario_manager import ScenarioManager
from ferry_planner.models.scenario import Scenario, Violation
from ferry_planner.models.solution import Solution
from ferry_planner.models.trace import (
    PORT_FLOWS,
    VESSEL_FLOWS,
    CostBreakdown,
    DispatchTrace,
    LegRecord,
    PortTrace,
    VesselTrace,
)
from ferry_planner.utils.helpers import amortization_factor, format_timestamp

logger = logging.getLogger("ferry_planner.simulate")

# provenance tag of the row family that bounds each flow
FLOW_TAGS = {
    "P_g2v": "eq13", "P_pv2v": "eq13", "P_b2v": "eq13",
    "P_g2b": "eq25", "P_pv2b": "eq25", "P_b2g": "eq24", "P_pv2g": "eq19",
}


class DispatchSimulator:
    """
    Replays a solution outside the MILP machinery.
    Only design values, the start-of-horizon vessel energy, the chosen
    travel options, departure times, mooring flags and flow columns are
    read; every state of charge is recursed from the flows.

    Crossings draw the consumption-law energy. Whatever the model charged
    above the law is kept per leg as model slack; capacity is checked on
    the planned state of charge (physical minus slack), the lower limits
    on the physical one.
    """

    # --------------------------------------------------------------
    # Replay
    # --------------------------------------------------------------
    @staticmethod
    def replay(s: Scenario, sol: Solution) -> DispatchTrace:
        if not sol.has_incumbent:
            logger.warning("replaying a solution with status '%s'", sol.status)
        grid = s.grid
        T, tau = grid.periods, grid.step
        mode = sol.meta.get("mode", "candidates")
        n_breakpoints = sol.meta.get("n_breakpoints") or Config.ENVELOPE_BREAKPOINTS

        def val(kind, entity=None, leg=None, index=None) -> float:
            return sol.value((kind, entity, leg, index))

        port_flows = {p.id: {kind: np.zeros(T) for kind in PORT_FLOWS} for p in s.ports}
        for p in s.ports:
            for t in range(1, T + 1):
                for kind in ("P_g2b", "P_pv2b", "P_b2g", "P_pv2g"):
                    port_flows[p.id][kind][t - 1] = val(kind, p.id, None, t)

        vessels: Dict[str, VesselTrace] = {}
        for v in s.vessels:
            legs = s.legs_of(v.id)
            flows = {kind: np.zeros(T) for kind in VESSEL_FLOWS}
            consumption = np.zeros(T)
            slack_use = np.zeros(T)
            charge_by_leg, flag_by_leg = {}, {}
            mooring: List[Optional[str]] = [None] * T
            records: List[LegRecord] = []

            energy = val("E_v_leg_dep", v.id, legs[0].index) if legs else 0.0
            start_energy = energy
            carried = 0.0
            window_open = 0.0
            for leg in legs:
                ell = leg.index
                charge = np.zeros(T)
                flags = np.zeros(T)
                for t in range(1, T + 1):
                    for kind in VESSEL_FLOWS:
                        x = val(kind, v.id, ell, t)
                        flows[kind][t - 1] += x
                        port_flows[leg.origin][kind][t - 1] += x
                        charge[t - 1] += x
                    flags[t - 1] = val("Z", v.id, ell, t)
                charge_by_leg[ell] = charge
                flag_by_leg[ell] = flags
                e_char = tau * float(charge.sum())

                departure = val("t_dep", v.id, ell)
                reported_arrival = val("t_arr", v.id, ell)
                if mode == "candidates":
                    options = Linearizer.travel_options(leg, v, grid)
                    chosen = max(options, key=lambda o: val("travel_choice", v.id, ell, o.steps))
                    travel = chosen.travel_time
                    modeled = chosen.consumption
                else:
                    travel = reported_arrival - departure
                    segments = Linearizer.secant_envelope(leg, v, int(n_breakpoints))
                    modeled = Linearizer.envelope_value(segments, travel)
                speed = leg.distance / travel
                exact = Linearizer.consumption(v.friction_const, leg.distance, speed, leg.displacement)
                arrival = departure + travel
                e_arr = energy + e_char - exact

                for t in range(1, T + 1):
                    start, end = (t - 1) * tau, t * tau
                    if start >= window_open - Config.VIOLATION_TOL and end <= departure + Config.VIOLATION_TOL:
                        mooring[t - 1] = leg.origin
                    overlap = min(end, arrival) - max(start, departure)
                    if overlap > 0:
                        consumption[t - 1] += exact * overlap / travel
                        slack_use[t - 1] += (modeled - exact) * overlap / travel

                records.append(LegRecord(
                    vessel_id=v.id,
                    index=ell,
                    origin=leg.origin,
                    destination=leg.destination,
                    departure=departure,
                    arrival=arrival,
                    reported_arrival=reported_arrival,
                    travel_time=travel,
                    speed=speed,
                    consumption=exact,
                    modeled_consumption=modeled,
                    energy_dep=energy,
                    energy_char=e_char,
                    energy_arr=e_arr,
                    model_slack=modeled - exact,
                    carried_slack=carried,
                ))
                energy = e_arr
                carried += modeled - exact
                window_open = arrival

            if legs:
                for t in range(1, T + 1):
                    if (t - 1) * tau >= window_open - Config.VIOLATION_TOL:
                        mooring[t - 1] = legs[-1].destination

            soc = np.empty(T + 1)
            soc[0] = start_energy
            charging = sum(flows[k] for k in VESSEL_FLOWS)
            for t in range(1, T + 1):
                soc[t] = soc[t - 1] + tau * charging[t - 1] - consumption[t - 1]
            slack = np.concatenate([[0.0], np.cumsum(slack_use)])
            if carried > Config.VIOLATION_TOL:
                logger.debug("%s: %.6f MWh of model slack over the horizon", v.id, carried)

            vessels[v.id] = VesselTrace(
                vessel_id=v.id,
                battery=val("E_v_max", v.id),
                flows=flows,
                charge_by_leg=charge_by_leg,
                mooring_flag_by_leg=flag_by_leg,
                mooring=mooring,
                soc=soc,
                legs=records,
                slack=slack,
            )

        ports: Dict[str, PortTrace] = {}
        for p in s.ports:
            e_b_max = val("E_b_i_max", p.id)
            pv_max = val("P_pv_i_max", p.id)
            f = port_flows[p.id]
            inflow = f["P_g2b"] + f["P_pv2b"]
            outflow = f["P_b2v"] + f["P_b2g"]
            soc = np.empty(T + 1)
            soc[0] = p.storage_soc_init_frac * e_b_max
            for t in range(1, T + 1):
                soc[t] = soc[t - 1] + tau * (p.charge_eff * inflow[t - 1] - outflow[t - 1] / p.discharge_eff)
            ports[p.id] = PortTrace(
                port_id=p.id,
                grid_power=val("P_g_i_max", p.id),
                pv_power=pv_max,
                storage_energy=e_b_max,
                flows=f,
                pv_available=np.asarray(p.pv_profile[:T], dtype=float) * pv_max,
                soc=soc,
            )

        return DispatchTrace(
            periods=T,
            step=tau,
            timestamps=[ScenarioManager.time_of(grid, t) for t in range(1, T + 1)],
            ports=ports,
            vessels=vessels,
            mode=mode,
        )

    # --------------------------------------------------------------
    # Constraint checks
    # --------------------------------------------------------------
    @staticmethod
    def check(trace: DispatchTrace, s: Scenario, tol: Optional[float] = None) -> List[Violation]:
        """Every constraint family re-checked on recomputed quantities."""
        tol = Config.VIOLATION_TOL if tol is None else tol
        grid = s.grid
        tau = trace.step
        found: List[Violation] = []

        def add(code, equation, entity, message, period=None, residual=None):
            found.append(Violation(code=code, message=message, entity=entity, equation=equation,
                                   period=period, residual=None if residual is None else float(residual)))

        for v in s.vessels:
            vt = trace.vessels.get(v.id)
            if vt is None:
                add("missing_vessel", "eq6", v.id, "vessel missing from trace")
                continue
            legs = s.legs_of(v.id)
            e_max = vt.battery

            if e_max > v.battery_bound_max + tol:
                add("design_above_bound", "eq8", v.id, f"battery {e_max:.4f} above bound", residual=e_max - v.battery_bound_max)

            for flow_kind, series in vt.flows.items():
                worst = int(np.argmin(series)) if len(series) else 0
                if len(series) and series[worst] < -tol:
                    add("negative_flow", FLOW_TAGS[flow_kind], v.id, f"{flow_kind} is negative", worst + 1, series[worst])

            prev_arrival = 0.0
            for leg, rec in zip(legs, vt.legs):
                entity = f"{v.id}/{leg.index}"
                dep_lo, dep_hi = (grid.offset_hours(ts) for ts in leg.dep_window)
                arr_lo, arr_hi = (grid.offset_hours(ts) for ts in leg.arr_window)
                if not dep_lo - tol <= rec.departure <= dep_hi + tol:
                    add("departure_window", "eq1", entity, "departure outside its window",
                        residual=max(dep_lo - rec.departure, rec.departure - dep_hi))
                if not arr_lo - tol <= rec.arrival <= arr_hi + tol:
                    add("arrival_window", "eq1", entity, "arrival outside its window",
                        residual=max(arr_lo - rec.arrival, rec.arrival - arr_hi))
                if abs(rec.reported_arrival - rec.arrival) > tol:
                    add("arrival_mismatch", "eq2", entity, "arrival differs from departure plus travel time",
                        residual=rec.reported_arrival - rec.arrival)
                t_min, t_max = leg.travel_time_bounds
                if not t_min - tol <= rec.travel_time <= t_max + tol:
                    add("travel_time_bounds", "eq3", entity, f"travel time {rec.travel_time:.4f} h out of bounds")
                if not v.speed_min - tol <= rec.speed <= v.speed_max + tol:
                    add("speed_bounds", "eq3", entity, f"speed {rec.speed:.4f} kn out of bounds")
                if rec.modeled_consumption < rec.consumption - tol:
                    add("consumption_underestimated", "eq4", entity, "modeled consumption below the consumption law",
                        residual=rec.consumption - rec.modeled_consumption)
                planned_dep = rec.energy_dep - rec.carried_slack
                if planned_dep + rec.energy_char > e_max + tol:
                    add("capacity", "eq8", entity, "energy before departure exceeds battery capacity",
                        residual=planned_dep + rec.energy_char - e_max)

                charge = vt.charge_by_leg.get(leg.index)
                flags = vt.mooring_flag_by_leg.get(leg.index)
                window_open = prev_arrival
                prev_arrival = rec.arrival
                if charge is None:
                    continue
                for t in np.flatnonzero(charge > tol) + 1:
                    start, end = (t - 1) * tau, t * tau
                    if start < window_open - tol or end > rec.departure + tol:
                        add("charge_outside_window", "eq11", entity,
                            "charging outside the mooring window", int(t), charge[t - 1])
                    elif vt.mooring[t - 1] != leg.origin:
                        add("charge_not_moored", "eq13", entity,
                            f"charging while not moored at {leg.origin}", int(t), charge[t - 1])
                    if flags is not None and flags[t - 1] < 0.5:
                        add("charge_without_mooring_flag", "eq11", entity,
                            "charging in a period flagged as not moored", int(t), charge[t - 1])
                    port = trace.ports.get(leg.origin)
                    if port is not None and charge[t - 1] > port.grid_power + tol:
                        add("charging_power", "eq17", entity, "charging power above the port connection",
                            int(t), charge[t - 1] - port.grid_power)

            soc = vt.soc
            planned = vt.planned_soc
            for t in range(len(soc)):
                if soc[t] < v.soc_min - tol:
                    add("depth_of_discharge", "eq8", v.id, f"state of charge {soc[t]:.4f} below {v.soc_min}",
                        t, soc[t] - v.soc_min)
                if planned[t] > e_max + tol:
                    add("capacity", "eq8", v.id, f"planned state of charge {planned[t]:.4f} above capacity",
                        t, planned[t] - e_max)
            if len(soc) and soc[0] > v.soc_init_frac * e_max + tol:
                add("initial_energy", "eq9", v.id, "start energy above the allowed fraction",
                    residual=soc[0] - v.soc_init_frac * e_max)
            if vt.legs:
                final = vt.legs[-1].energy_arr
                if final < v.periodic_frac * e_max - tol:
                    add("periodicity", "eq10", v.id, "final energy below the periodic fraction",
                        residual=final - v.periodic_frac * e_max)
                if final < soc[0] - tol:
                    add("periodic_closure", "eq10-closure", v.id, "final energy below start energy",
                        residual=final - soc[0])

        for p in s.ports:
            pt = trace.ports.get(p.id)
            if pt is None:
                add("missing_port", "eq18", p.id, "port missing from trace")
                continue
            if pt.grid_power > p.max_grid_power_bound + tol:
                add("design_above_bound", "eq17", p.id, "grid connection above its bound")
            if pt.pv_power > p.max_pv_bound + tol:
                add("design_above_bound", "eq22", p.id, "PV capacity above its bound")
            if pt.storage_energy > p.max_storage_bound + tol:
                add("design_above_bound", "eq27", p.id, "storage capacity above its bound")

            for kind, series in pt.flows.items():
                if len(series) and series.min() < -tol:
                    t = int(np.argmin(series))
                    add("negative_flow", FLOW_TAGS[kind], p.id, f"{kind} is negative", t + 1, series[t])

            checks = (
                ("grid_import", "eq17-grid", pt.grid_import - pt.grid_power, "grid import above connection"),
                ("grid_export", "eq17-grid", pt.grid_export - pt.grid_power, "grid export above connection"),
                ("pv_available", "eq20", pt.pv_generation - pt.pv_available, "PV use above availability"),
                ("storage_power_in", "eq27", pt.storage_in - p.storage_power_bound, "storage charging power above limit"),
                ("storage_power_out", "eq27", pt.storage_out - p.storage_power_bound, "storage discharging power above limit"),
            )
            for code, equation, excess, message in checks:
                for t in np.flatnonzero(excess > tol):
                    add(code, equation, p.id, message, int(t) + 1, excess[t])

            lo = p.storage_soc_min_frac * pt.storage_energy
            for t in range(1, len(pt.soc)):
                if pt.soc[t] < lo - tol:
                    add("storage_soc_min", "eq27", p.id, "storage energy below its minimum", t, pt.soc[t] - lo)
                if pt.soc[t] > pt.storage_energy + tol:
                    add("storage_soc_max", "eq27", p.id, "storage energy above capacity", t, pt.soc[t] - pt.storage_energy)
            if len(pt.soc) > 1 and pt.soc[-1] < pt.soc[0] - tol:
                add("storage_terminal", "eq26-terminal", p.id, "storage ends below its initial energy",
                    len(pt.soc) - 1, pt.soc[-1] - pt.soc[0])

        return found

    # --------------------------------------------------------------
    # Costs
    # --------------------------------------------------------------
    @staticmethod
    def recompute_cost(trace: DispatchTrace, s: Scenario) -> CostBreakdown:
        horizon = trace.periods * trace.step
        a_vessel = amortization_factor(horizon, s.costs.amort_vessel_years)
        a_infra = amortization_factor(horizon, s.costs.amort_infra_years)
        tau = trace.step

        vessel_capital = {v_id: a_vessel * s.costs.vessel_batt_capex * vt.battery for v_id, vt in trace.vessels.items()}
        storage_capital, pv_capital, grid_capital, purchase, revenue = {}, {}, {}, {}, {}
        for p in s.ports:
            pt = trace.ports[p.id]
            prices = np.asarray(p.prices[:trace.periods], dtype=float)
            storage_capital[p.id] = a_infra * s.costs.storage_capex * pt.storage_energy
            pv_capital[p.id] = a_infra * s.costs.pv_capex * pt.pv_power
            grid_capital[p.id] = a_infra * s.costs.grid_capex * pt.grid_power
            purchase[p.id] = tau * float(prices @ pt.grid_import)
            revenue[p.id] = tau * p.feed_in_ratio * float(prices @ pt.grid_export)

        total = (sum(vessel_capital.values()) + sum(storage_capital.values()) + sum(pv_capital.values())
                 + sum(grid_capital.values()) + sum(purchase.values()) - sum(revenue.values()))
        return CostBreakdown(
            vessel_capital=vessel_capital,
            storage_capital=storage_capital,
            pv_capital=pv_capital,
            grid_capital=grid_capital,
            purchase=purchase,
            revenue=revenue,
            total=total,
        )

    # --------------------------------------------------------------
    # CSV export
    # --------------------------------------------------------------
    @staticmethod
    def export_traces(trace: DispatchTrace, s: Scenario, directory: Union[str, Path]) -> List[Path]:
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        periods = list(range(1, trace.periods + 1))
        stamps = [format_timestamp(ts) for ts in trace.timestamps]
        written = []

        for port_id, pt in trace.ports.items():
            frame = pd.DataFrame({"period": periods, "timestamp": stamps})
            for kind in PORT_FLOWS:
                frame[kind] = pt.flows[kind]
            frame["grid_import"] = pt.grid_import
            frame["grid_export"] = pt.grid_export
            frame["grid_net"] = pt.grid_net
            frame["pv_available"] = pt.pv_available
            frame["soc"] = pt.soc[1:]
            path = out / f"port_{port_id}.csv"
            frame.to_csv(path, index=False)
            written.append(path)

        for vessel_id, vt in trace.vessels.items():
            frame = pd.DataFrame({"period": periods, "timestamp": stamps})
            for kind in VESSEL_FLOWS:
                frame[kind] = vt.flows[kind]
            frame["moored"] = [m or "" for m in vt.mooring]
            frame["soc"] = vt.soc[1:]
            path = out / f"vessel_{vessel_id}.csv"
            frame.to_csv(path, index=False)
            written.append(path)

        legs = [rec.to_dict() for vt in trace.vessels.values() for rec in vt.legs]
        if legs:
            path = out / "legs.csv"
            pd.DataFrame(legs).to_csv(path, index=False)
            written.append(path)
        logger.info("wrote %d trace files to %s", len(written), out)
        return written


replay = DispatchSimulator.replay
check = DispatchSimulator.check
recompute_cost = DispatchSimulator.recompute_cost
export_traces = DispatchSimulator.export_traces
