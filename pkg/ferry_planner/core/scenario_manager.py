# ferry_planner/core/scenario_manager.py

from __future__ import annotations

import copy
import logging
import math
from dataclasses import replace
from datetime import datetime, timedelta
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd
import yaml

from ferry_planner.core.errors import FerryPlannerError
from ferry_planner.models.scenario import (
    CostCoefficients,
    DesignToggles,
    Leg,
    PortSite,
    Scenario,
    TimeGrid,
    Vessel,
    Violation,
)
from ferry_planner.utils.helpers import (
    CANONICAL_UNITS,
    format_timestamp,
    hash_files,
    parse_timestamp,
    unit_factor,
)

logger = logging.getLogger("ferry_planner.scenario")

SCENARIO_FILE = "scenario.yaml"

# field -> unit category, per section of the config document
_PORT_UNITS = {
    "max_grid_power_bound": "power",
    "grid_power_fixed": "power",
    "max_pv_bound": "power",
    "max_storage_bound": "energy",
    "storage_power_bound": "power",
}
_VESSEL_UNITS = {
    "battery_bound_max": "energy",
    "battery_fixed": "energy",
    "soc_min": "energy",
    "displacement": "mass",
    "speed_min": "speed",
    "speed_max": "speed",
}
_CALIBRATION_UNITS = {"energy": "energy", "speed": "speed", "distance": "distance"}
_LEG_UNITS = {"distance": "distance", "displacement": "mass"}
_COST_UNITS = {
    "storage_capex": "energy_capex",
    "vessel_batt_capex": "energy_capex",
    "pv_capex": "power_capex",
    "grid_capex": "power_capex",
}


class ScenarioError(FerryPlannerError):
    """Raised when a scenario bundle cannot be loaded."""

    def __init__(self, file, key, message):
        self.file = str(file)
        self.key = key
        self.message = message
        super().__init__(f"{self.file}: {key}: {message}")


class ScenarioManager:
    """
    Loads, validates, normalizes and saves scenario bundles.
    A bundle is a directory with `scenario.yaml` and one
    `prices_<port>.csv` / `pv_<port>.csv` pair per port.
    """

    # --------------------------------------------------------------
    # Unit normalization
    # --------------------------------------------------------------
    @staticmethod
    def normalize_units(raw: dict, source: Union[str, Path] = SCENARIO_FILE) -> dict:
        """
        Return a copy of the raw config document in canonical units.
        The `units` header of the copy names the canonical units, so a
        second pass converts nothing.
        """
        doc = copy.deepcopy(raw)
        units = dict(CANONICAL_UNITS)
        units.update(doc.get("units") or {})

        factors = {}
        for category, unit in units.items():
            factor = unit_factor(category, unit)
            if factor is None:
                raise ScenarioError(source, f"units.{category}", f"unknown unit '{unit}'")
            factors[category] = factor

        def convert(section: dict, mapping: Dict[str, str], where: str):
            for key, category in mapping.items():
                value = section.get(key)
                if value is None:
                    continue
                if isinstance(value, (list, tuple)):
                    section[key] = [ScenarioManager._number(v, source, f"{where}.{key}") * factors[category] for v in value]
                else:
                    section[key] = ScenarioManager._number(value, source, f"{where}.{key}") * factors[category]

        grid = doc.get("time_grid") or {}
        if "step" in grid:
            grid["step"] = ScenarioManager._number(grid["step"], source, "time_grid.step") * factors["time"]

        for i, port in enumerate(doc.get("ports") or []):
            convert(port, _PORT_UNITS, f"ports[{i}]")
        for i, vessel in enumerate(doc.get("vessels") or []):
            convert(vessel, _VESSEL_UNITS, f"vessels[{i}]")
            if isinstance(vessel.get("friction_calibration"), dict):
                convert(vessel["friction_calibration"], _CALIBRATION_UNITS, f"vessels[{i}].friction_calibration")
        for i, leg in enumerate(doc.get("legs") or []):
            convert(leg, _LEG_UNITS, f"legs[{i}]")
            if leg.get("travel_time") is not None:
                leg["travel_time"] = [
                    ScenarioManager._number(v, source, f"legs[{i}].travel_time") * factors["time"]
                    for v in leg["travel_time"]
                ]
        convert(doc.get("costs") or {}, _COST_UNITS, "costs")

        doc["price_factor"] = ScenarioManager._number(doc.get("price_factor", 1.0), source, "price_factor") * factors["price"]
        doc["units"] = dict(CANONICAL_UNITS)
        return doc

    # --------------------------------------------------------------
    # Loading
    # --------------------------------------------------------------
    @staticmethod
    def load(path: Union[str, Path]) -> Scenario:
        """Load a bundle directory (or its scenario.yaml) into a Scenario."""
        bundle, config_file = ScenarioManager._locate(path)
        try:
            raw = yaml.safe_load(config_file.read_text(encoding="utf-8"))
        except yaml.YAMLError as e:
            raise ScenarioError(config_file, "-", f"malformed document: {e}")
        if not isinstance(raw, dict):
            raise ScenarioError(config_file, "-", "document must be a mapping")

        doc = ScenarioManager.normalize_units(raw, config_file)
        grid = ScenarioManager._build_grid(doc, config_file)

        ports = []
        for i, entry in enumerate(ScenarioManager._section(doc, "ports", config_file)):
            port_id = str(ScenarioManager._require(entry, "id", config_file, f"ports[{i}]"))
            prices = ScenarioManager._read_series(bundle / f"prices_{port_id}.csv", grid)
            pv = ScenarioManager._read_series(bundle / f"pv_{port_id}.csv", grid)
            for t, gamma in enumerate(pv, start=1):
                if gamma < 0.0 or gamma > 1.0:
                    raise ScenarioError(bundle / f"pv_{port_id}.csv", f"row {t}", f"capacity factor out of [0,1]: {gamma}")
            prices = tuple(p * doc["price_factor"] for p in prices)
            ports.append(ScenarioManager._build_port(entry, prices, pv, config_file, f"ports[{i}]"))

        vessels = [
            ScenarioManager._build_vessel(entry, config_file, f"vessels[{i}]")
            for i, entry in enumerate(ScenarioManager._section(doc, "vessels", config_file))
        ]
        legs = ScenarioManager._build_legs(doc, ports, vessels, config_file)
        costs = ScenarioManager._build_costs(doc, config_file)
        toggles = DesignToggles(**{k: bool(v) for k, v in (doc.get("toggles") or {}).items()
                                   if k in DesignToggles.__dataclass_fields__})

        scenario = Scenario(
            grid=grid,
            ports=tuple(ports),
            vessels=tuple(vessels),
            legs=legs,
            costs=costs,
            toggles=toggles,
            name=str(doc.get("name") or bundle.name),
            resale_ratio_unused=doc.get("resale_ratio"),
            source_hash=ScenarioManager.scenario_hash(bundle),
        )
        if scenario.resale_ratio_unused is not None:
            logger.info("resale ratio %.3f is carried but not part of the objective", scenario.resale_ratio_unused)
        logger.info("loaded scenario '%s': %d ports, %d vessels, %d legs, T=%d",
                    scenario.name, len(ports), len(vessels), len(scenario.all_legs()), grid.periods)
        return scenario

    @staticmethod
    def _locate(path):
        p = Path(path)
        if p.is_dir():
            config_file = p / SCENARIO_FILE
            bundle = p
        else:
            config_file = p
            bundle = p.parent
        if not config_file.exists():
            raise ScenarioError(config_file, "-", "missing file")
        return bundle, config_file

    @staticmethod
    def _number(value, file, key) -> float:
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise ScenarioError(file, key, f"expected a number, got {value!r}")
        if math.isnan(number):
            raise ScenarioError(file, key, "value is NaN")
        return number

    @staticmethod
    def _require(section: dict, key: str, file, where: str):
        if not isinstance(section, dict) or section.get(key) is None:
            raise ScenarioError(file, f"{where}.{key}", "missing field")
        return section[key]

    @staticmethod
    def _section(doc: dict, key: str, file) -> list:
        value = doc.get(key)
        if not isinstance(value, list):
            raise ScenarioError(file, key, "missing or not a list")
        return value

    @staticmethod
    def _timestamp(value, file, key) -> datetime:
        ts = parse_timestamp(value)
        if ts is None:
            raise ScenarioError(file, key, f"malformed timestamp {value!r}")
        return ts

    @staticmethod
    def _build_grid(doc, file) -> TimeGrid:
        section = doc.get("time_grid")
        if not isinstance(section, dict):
            raise ScenarioError(file, "time_grid", "missing section")
        start = ScenarioManager._timestamp(ScenarioManager._require(section, "start", file, "time_grid"), file, "time_grid.start")
        periods = ScenarioManager._require(section, "periods", file, "time_grid")
        try:
            periods = int(periods)
        except (TypeError, ValueError):
            raise ScenarioError(file, "time_grid.periods", f"expected an integer, got {periods!r}")
        step = ScenarioManager._number(ScenarioManager._require(section, "step", file, "time_grid"), file, "time_grid.step")
        return TimeGrid(start=start, periods=periods, step=step)

    @staticmethod
    def _read_series(path: Path, grid: TimeGrid) -> tuple:
        if not path.exists():
            raise ScenarioError(path, "-", "missing file")
        try:
            frame = pd.read_csv(path, float_precision="round_trip")
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            raise ScenarioError(path, "-", f"malformed CSV: {e}")
        for column in ("timestamp", "value"):
            if column not in frame.columns:
                raise ScenarioError(path, column, "missing column")
        if len(frame) != grid.periods:
            raise ScenarioError(path, "value", f"series length {len(frame)} != T={grid.periods}")
        stamps = pd.to_datetime(frame["timestamp"], errors="coerce")
        if stamps.isna().any():
            row = int(stamps.isna().to_numpy().argmax()) + 1
            raise ScenarioError(path, f"row {row}", "malformed timestamp")
        if not stamps.is_monotonic_increasing or stamps.duplicated().any():
            raise ScenarioError(path, "timestamp", "timestamps must be strictly increasing")
        # row t must sit at start + (t - 1) * tau
        expected = pd.Timestamp(grid.start) + pd.to_timedelta(
            [round(k * grid.step * 3600.0, 6) for k in range(grid.periods)], unit="s")
        off_grid = np.flatnonzero(stamps.to_numpy() != expected.to_numpy())
        if len(off_grid):
            row = int(off_grid[0]) + 1
            raise ScenarioError(path, f"row {row}",
                                f"timestamp {stamps.iloc[row - 1]} is off the grid, expected {expected[row - 1]}")
        values = pd.to_numeric(frame["value"], errors="coerce")
        if values.isna().any():
            row = int(values.isna().to_numpy().argmax()) + 1
            raise ScenarioError(path, f"row {row}", "malformed value")
        return tuple(float(v) for v in values)

    @staticmethod
    def _build_port(entry, prices, pv, file, where) -> PortSite:
        def num(key, default=None):
            if entry.get(key) is None:
                if default is None:
                    raise ScenarioError(file, f"{where}.{key}", "missing field")
                return default
            return ScenarioManager._number(entry[key], file, f"{where}.{key}")

        fixed = entry.get("grid_power_fixed")
        return PortSite(
            id=str(entry["id"]),
            name=str(entry.get("name") or entry["id"]),
            max_grid_power_bound=num("max_grid_power_bound"),
            grid_power_fixed=None if fixed is None else ScenarioManager._number(fixed, file, f"{where}.grid_power_fixed"),
            max_pv_bound=num("max_pv_bound", 0.0),
            max_storage_bound=num("max_storage_bound", 0.0),
            storage_power_bound=num("storage_power_bound", 0.0),
            charge_eff=num("charge_eff", 0.9),
            discharge_eff=num("discharge_eff", 0.95),
            storage_soc_min_frac=num("storage_soc_min_frac", 0.0),
            storage_soc_init_frac=num("storage_soc_init_frac", 0.8),
            feed_in_ratio=num("feed_in_ratio", 0.2),
            prices=prices,
            pv_profile=pv,
        )

    @staticmethod
    def _build_vessel(entry, file, where) -> Vessel:
        def num(key, default=None):
            if entry.get(key) is None:
                if default is None:
                    raise ScenarioError(file, f"{where}.{key}", "missing field")
                return default
            return ScenarioManager._number(entry[key], file, f"{where}.{key}")

        vessel_id = str(ScenarioManager._require(entry, "id", file, where))
        displacement = num("displacement")
        if entry.get("friction_const") is not None:
            friction = num("friction_const")
        elif isinstance(entry.get("friction_calibration"), dict):
            # k chosen so that one crossing of `distance` at `speed` uses `energy`
            cal = entry["friction_calibration"]
            energy = ScenarioManager._number(cal.get("energy"), file, f"{where}.friction_calibration.energy")
            speed = ScenarioManager._number(cal.get("speed"), file, f"{where}.friction_calibration.speed")
            distance = ScenarioManager._number(cal.get("distance"), file, f"{where}.friction_calibration.distance")
            if speed <= 0 or distance <= 0 or displacement <= 0:
                raise ScenarioError(file, f"{where}.friction_calibration", "speed, distance and displacement must be positive")
            friction = energy / (distance * speed ** 2 * displacement ** (2.0 / 3.0))
        else:
            raise ScenarioError(file, f"{where}.friction_const", "missing field")

        fixed = entry.get("battery_fixed")
        return Vessel(
            id=vessel_id,
            name=str(entry.get("name") or vessel_id),
            battery_bound_max=num("battery_bound_max"),
            battery_fixed=None if fixed is None else ScenarioManager._number(fixed, file, f"{where}.battery_fixed"),
            soc_min=num("soc_min"),
            displacement=displacement,
            friction_const=friction,
            periodic_frac=num("periodic_frac", 0.5),
            soc_init_frac=num("soc_init_frac", 0.8),
            speed_min=num("speed_min"),
            speed_max=num("speed_max"),
        )

    @staticmethod
    def _build_legs(doc, ports, vessels, file) -> Dict[str, tuple]:
        port_ids = {p.id for p in ports}
        by_vessel = {v.id: v for v in vessels}
        legs: Dict[str, List[Leg]] = {v.id: [] for v in vessels}

        for i, entry in enumerate(ScenarioManager._section(doc, "legs", file)):
            where = f"legs[{i}]"
            vessel_id = str(ScenarioManager._require(entry, "vessel", file, where))
            if vessel_id not in by_vessel:
                raise ScenarioError(file, f"{where}.vessel", f"unknown vessel '{vessel_id}'")
            for key in ("origin", "destination"):
                port_id = str(ScenarioManager._require(entry, key, file, where))
                if port_id not in port_ids:
                    raise ScenarioError(file, f"{where}.{key}", f"unknown port '{port_id}'")

            def window(key):
                value = ScenarioManager._require(entry, key, file, where)
                if not isinstance(value, (list, tuple)) or len(value) != 2:
                    raise ScenarioError(file, f"{where}.{key}", "expected [earliest, latest]")
                return tuple(ScenarioManager._timestamp(v, file, f"{where}.{key}") for v in value)

            bounds = ScenarioManager._require(entry, "travel_time", file, where)
            if not isinstance(bounds, (list, tuple)) or len(bounds) != 2:
                raise ScenarioError(file, f"{where}.travel_time", "expected [min, max]")

            displacement = entry.get("displacement")
            legs[vessel_id].append(Leg(
                vessel_id=vessel_id,
                index=len(legs[vessel_id]) + 1,
                origin=str(entry["origin"]),
                destination=str(entry["destination"]),
                distance=ScenarioManager._number(ScenarioManager._require(entry, "distance", file, where), file, f"{where}.distance"),
                displacement=by_vessel[vessel_id].displacement if displacement is None
                else ScenarioManager._number(displacement, file, f"{where}.displacement"),
                dep_window=window("dep_window"),
                arr_window=window("arr_window"),
                travel_time_bounds=(float(bounds[0]), float(bounds[1])),
            ))
        return {k: tuple(v) for k, v in legs.items()}

    @staticmethod
    def _build_costs(doc, file) -> CostCoefficients:
        section = doc.get("costs")
        if not isinstance(section, dict):
            raise ScenarioError(file, "costs", "missing section")
        values = {}
        for key in ("storage_capex", "pv_capex", "grid_capex", "vessel_batt_capex"):
            values[key] = ScenarioManager._number(ScenarioManager._require(section, key, file, "costs"), file, f"costs.{key}")
        for key, default in (("amort_infra_years", 15.0), ("amort_vessel_years", 10.0)):
            values[key] = ScenarioManager._number(section.get(key, default), file, f"costs.{key}")
        return CostCoefficients(**values)

    # --------------------------------------------------------------
    # Validation
    # --------------------------------------------------------------
    @staticmethod
    def validate(s: Scenario) -> List[Violation]:
        """Check every type invariant; violations are returned, never raised."""
        found: List[Violation] = []

        def add(code, message, entity=None):
            found.append(Violation(code=code, message=message, entity=entity))

        grid = s.grid
        if grid.periods < 1:
            add("nonpositive_periods", f"time grid needs at least one period, got {grid.periods}")
        if grid.step <= 0:
            add("nonpositive_step", f"time step must be positive, got {grid.step}")

        port_ids = set()
        for p in s.ports:
            port_ids.add(p.id)
            for key in ("max_grid_power_bound", "max_pv_bound", "max_storage_bound", "storage_power_bound"):
                if getattr(p, key) < 0:
                    add("negative_bound", f"{key} is negative", p.id)
            if p.grid_power_fixed is not None and p.grid_power_fixed < 0:
                add("negative_bound", "grid_power_fixed is negative", p.id)
            for key in ("charge_eff", "discharge_eff"):
                if not 0.0 < getattr(p, key) <= 1.0:
                    add("efficiency_out_of_range", f"{key} must lie in (0,1]", p.id)
            if not 0.0 < p.feed_in_ratio <= 1.0:
                add("feed_in_out_of_range", "feed-in ratio must lie in (0,1]", p.id)
            for key in ("storage_soc_min_frac", "storage_soc_init_frac"):
                if not 0.0 <= getattr(p, key) <= 1.0:
                    add("soc_fraction_out_of_range", f"{key} must lie in [0,1]", p.id)
            if p.storage_soc_min_frac > p.storage_soc_init_frac:
                add("soc_fraction_out_of_range", "storage start fraction below its minimum fraction", p.id)
            if len(p.prices) != grid.periods or len(p.pv_profile) != grid.periods:
                add("series_length", f"series lengths {len(p.prices)}/{len(p.pv_profile)} != T={grid.periods}", p.id)
            if any(v < 0 for v in p.prices):
                add("negative_price", "prices must be non-negative", p.id)
            if any(v < 0 or v > 1 for v in p.pv_profile):
                add("capacity_factor_out_of_range", "capacity factor out of [0,1]", p.id)

        for v in s.vessels:
            capacity = v.battery_bound_max if v.battery_fixed is None else min(v.battery_fixed, v.battery_bound_max)
            if v.soc_min < 0 or v.battery_bound_max < 0 or (v.battery_fixed is not None and v.battery_fixed < 0):
                add("negative_bound", "battery bounds must be non-negative", v.id)
            if v.soc_min >= capacity:
                add("dod_exceeds_capacity", f"DoD exceeds capacity: soc_min {v.soc_min} >= {capacity}", v.id)
            if not v.speed_min < v.speed_max or v.speed_min <= 0:
                add("speed_bounds", "speed bounds must satisfy 0 < min < max", v.id)
            if v.friction_const <= 0:
                add("friction_nonpositive", "friction constant must be positive", v.id)
            if v.displacement <= 0:
                add("negative_bound", "displacement must be positive", v.id)
            for key in ("periodic_frac", "soc_init_frac"):
                if not 0.0 <= getattr(v, key) <= 1.0:
                    add("soc_fraction_out_of_range", f"{key} must lie in [0,1]", v.id)

            legs = s.legs_of(v.id)
            if not legs:
                add("no_legs", "vessel has no legs", v.id)
            for leg in legs:
                entity = f"{v.id}/{leg.index}"
                for port_id in (leg.origin, leg.destination):
                    if port_id not in port_ids:
                        add("unknown_port", f"unknown port '{port_id}'", entity)
                if leg.distance <= 0:
                    add("nonpositive_distance", "distance must be positive", entity)
                if leg.dep_window[0] > leg.dep_window[1] or leg.arr_window[0] > leg.arr_window[1]:
                    add("window_order", "window earliest is after latest", entity)
                for ts in (*leg.dep_window, *leg.arr_window):
                    if ts < grid.start or ts > grid.end:
                        add("window_outside_horizon", f"window time {format_timestamp(ts)} outside the horizon", entity)
                        break
                t_min, t_max = leg.travel_time_bounds
                if not 0 < t_min <= t_max:
                    add("travel_bounds", "travel time bounds must satisfy 0 < min <= max", entity)
            for prev, leg in zip(legs, legs[1:]):
                if leg.origin != prev.destination:
                    add("leg_chain_discontinuity",
                        f"leg chain discontinuity: leg {leg.index} leaves {leg.origin} "
                        f"but leg {prev.index} ends at {prev.destination}", f"{v.id}/{leg.index}")

        for leg_vessel in s.legs:
            if s.vessel(leg_vessel) is None:
                add("unknown_vessel", f"legs reference unknown vessel '{leg_vessel}'", leg_vessel)

        c = s.costs
        for key in ("storage_capex", "pv_capex", "grid_capex", "vessel_batt_capex"):
            if getattr(c, key) < 0:
                add("negative_cost", f"{key} is negative")
        for key in ("amort_infra_years", "amort_vessel_years"):
            if getattr(c, key) <= 0:
                add("nonpositive_amortization", f"{key} must be positive")

        if not s.toggles.vessel_sizing_enabled:
            for v in s.vessels:
                if v.battery_fixed is None:
                    add("missing_fixed_design", "battery_fixed is required when vessel sizing is disabled", v.id)
        if not s.toggles.grid_power_optimized:
            for p in s.ports:
                if p.grid_power_fixed is None:
                    add("missing_fixed_design", "grid_power_fixed is required when grid power is not optimized", p.id)
        return found

    # --------------------------------------------------------------
    # Time grid mapping
    # --------------------------------------------------------------
    @staticmethod
    def time_index(grid: TimeGrid, ts: datetime) -> Optional[int]:
        """Period in 1..T containing ts, or None outside the horizon."""
        offset = grid.offset_hours(ts)
        if offset < 0 or offset >= grid.horizon_hours:
            return None
        index = int(math.floor(offset / grid.step + 1e-9)) + 1
        return min(index, grid.periods)

    @staticmethod
    def time_of(grid: TimeGrid, index: int) -> datetime:
        """Start of period `index`."""
        return grid.start + timedelta(hours=(index - 1) * grid.step)

    # --------------------------------------------------------------
    # Saving
    # --------------------------------------------------------------
    @staticmethod
    def save(s: Scenario, directory: Union[str, Path]) -> Path:
        """Write a canonical-unit bundle; loading it returns an equal scenario."""
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        doc = {
            "name": s.name,
            "units": dict(CANONICAL_UNITS),
            "time_grid": s.grid.to_dict(),
            "toggles": s.toggles.to_dict(),
            "costs": s.costs.to_dict(),
            "ports": [p.to_dict() for p in s.ports],
            "vessels": [v.to_dict() for v in s.vessels],
            "legs": [leg.to_dict() for leg in s.all_legs()],
        }
        if s.resale_ratio_unused is not None:
            doc["resale_ratio"] = s.resale_ratio_unused
        config_file = out / SCENARIO_FILE
        config_file.write_text(yaml.safe_dump(doc, sort_keys=False), encoding="utf-8")

        stamps = [format_timestamp(ScenarioManager.time_of(s.grid, t)) for t in range(1, s.grid.periods + 1)]
        for p in s.ports:
            pd.DataFrame({"timestamp": stamps, "value": list(p.prices)}).to_csv(out / f"prices_{p.id}.csv", index=False)
            pd.DataFrame({"timestamp": stamps, "value": list(p.pv_profile)}).to_csv(out / f"pv_{p.id}.csv", index=False)
        logger.info("saved scenario '%s' to %s", s.name, out)
        return config_file

    # --------------------------------------------------------------
    # Derived scenarios and fingerprints
    # --------------------------------------------------------------
    @staticmethod
    def scenario_hash(directory: Union[str, Path]) -> str:
        bundle = Path(directory)
        files = sorted(p for p in bundle.iterdir() if p.is_file() and not p.name.startswith("."))
        return hash_files(files)

    @staticmethod
    def scale_prices(s: Scenario, factor: float) -> Scenario:
        ports = tuple(replace(p, prices=tuple(v * factor for v in p.prices)) for p in s.ports)
        return replace(s, ports=ports)

    @staticmethod
    def with_toggles(s: Scenario, **toggles) -> Scenario:
        return s.with_toggles(**toggles)


load_scenario = ScenarioManager.load
validate_scenario = ScenarioManager.validate
normalize_units = ScenarioManager.normalize_units
save_scenario = ScenarioManager.save
time_index = ScenarioManager.time_index
time_of = ScenarioManager.time_of
scenario_hash = ScenarioManager.scenario_hash
scale_prices = ScenarioManager.scale_prices
with_toggles = ScenarioManager.with_toggles
