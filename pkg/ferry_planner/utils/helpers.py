# ferry_planner/utils/helpers.py

from __future__ import annotations

import hashlib
import math
from datetime import datetime
from pathlib import Path
from typing import Iterable, Optional, Union

import pandas as pd

HOURS_PER_YEAR = 8766.0

# Canonical units: MW, MWh, h, kn, nmi, t, kUSD.
CANONICAL_UNITS = {
    "power": "MW",
    "energy": "MWh",
    "time": "h",
    "speed": "kn",
    "distance": "nmi",
    "mass": "t",
    "price": "kUSD/MWh",
    "energy_capex": "kUSD/MWh",
    "power_capex": "kUSD/MW",
}

# factor that multiplies a value in the given unit to reach the canonical one
UNIT_FACTORS = {
    "power": {"MW": 1.0, "kW": 1e-3, "W": 1e-6},
    "energy": {"MWh": 1.0, "kWh": 1e-3, "Wh": 1e-6},
    "time": {"h": 1.0, "min": 1.0 / 60.0, "s": 1.0 / 3600.0},
    "speed": {"kn": 1.0, "km/h": 1.0 / 1.852, "m/s": 3.6 / 1.852},
    "distance": {"nmi": 1.0, "km": 1.0 / 1.852, "m": 1.0 / 1852.0},
    "mass": {"t": 1.0, "kg": 1e-3},
    "price": {"kUSD/MWh": 1.0, "USD/kWh": 1.0, "USD/MWh": 1e-3},
    "energy_capex": {"kUSD/MWh": 1.0, "USD/kWh": 1.0, "USD/MWh": 1e-3},
    "power_capex": {"kUSD/MW": 1.0, "USD/kW": 1.0, "USD/MW": 1e-3},
}


def unit_factor(category: str, unit: str) -> Optional[float]:
    """
    Conversion factor from `unit` to the canonical unit of `category`.

    Returns:
        float or None when the unit is unknown
    """
    return UNIT_FACTORS.get(category, {}).get(unit)


def parse_timestamp(value) -> Optional[datetime]:
    """Convert a string, date or pandas Timestamp into a naive datetime."""
    if value is None or value == "":
        return None
    if isinstance(value, datetime):
        return value.replace(tzinfo=None)
    try:
        return pd.Timestamp(value).to_pydatetime().replace(tzinfo=None)
    except (TypeError, ValueError):
        return None


def format_timestamp(value: datetime) -> str:
    return value.strftime("%Y-%m-%d %H:%M:%S")


def hours_between(start: datetime, end: datetime) -> float:
    return (end - start).total_seconds() / 3600.0


def amortization_factor(horizon_hours: float, years: float) -> float:
    """
    Share of a capital cost charged to a planning horizon.

    Args:
        horizon_hours: Length of the horizon in hours
        years: Amortization period in years

    Returns:
        float: horizon / (years * 8766 h)
    """
    return horizon_hours / (years * HOURS_PER_YEAR)


def hash_files(paths: Iterable[Union[str, Path]]) -> str:
    """SHA-256 over the bytes of the given files, in the given order."""
    digest = hashlib.sha256()
    for path in paths:
        p = Path(path)
        digest.update(p.name.encode("utf-8"))
        digest.update(p.read_bytes())
    return digest.hexdigest()


def format_kusd(amount) -> str:
    """
    Format an amount of thousands of USD.

    Args:
        amount: Numeric amount in kUSD

    Returns:
        str: e.g. "1,234.56 kUSD"
    """
    try:
        return f"{float(amount):,.2f} kUSD"
    except (TypeError, ValueError):
        return "0.00 kUSD"


def calculate_percentage(part, whole):
    """Percentage of part over whole, 0 when whole is zero."""
    try:
        if whole == 0:
            return 0.0
        return (float(part) / float(whole)) * 100
    except (TypeError, ValueError, ZeroDivisionError):
        return 0.0


def is_finite(value) -> bool:
    try:
        return math.isfinite(float(value))
    except (TypeError, ValueError):
        return False


def parse_id_list(value: Optional[str], default=None) -> list:
    """Parse "1,2,4" into [1, 2, 4]."""
    if not value:
        return list(default or [])
    return [int(part) for part in str(value).split(",") if part.strip()]


def parse_float_list(value: Optional[str], default=None) -> list:
    if not value:
        return list(default or [])
    return [float(part) for part in str(value).split(",") if part.strip()]


def resolve_bundle(value: Union[str, Path], bundle_dir: Union[str, Path]) -> Path:
    """A bundle given as a directory path, or by name under bundle_dir."""
    path = Path(value)
    if path.is_dir():
        return path
    return Path(bundle_dir) / str(value)
