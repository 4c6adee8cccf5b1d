# ferry_planner/core/solution_store.py

from __future__ import annotations

import csv
import logging
import math
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from ferry_planner.core.errors import FerryPlannerError
from ferry_planner.models.solution import Solution

logger = logging.getLogger("ferry_planner.store")

HEADER_KEYS = ("scenario", "status", "objective", "bound", "gap", "nodes", "mode", "n_breakpoints", "experiment")
FIELDS = ("kind", "entity", "leg", "index", "value")


class SolutionFileError(FerryPlannerError):
    """Raised when a solution file cannot be read."""
    pass


class SolutionStore:
    """
    Solution files: `# key=value` header lines followed by a CSV table
    `kind,entity,leg,index,value`, one row per column of the model.
    """

    @staticmethod
    def write_solution(sol: Solution, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        header = {
            "scenario": sol.meta.get("scenario", ""),
            "status": sol.status,
            "objective": repr(float(sol.objective)),
            "bound": repr(float(sol.bound)),
            "gap": repr(float(sol.gap)),
            "nodes": sol.nodes,
            "mode": sol.meta.get("mode", "candidates"),
            "n_breakpoints": sol.meta.get("n_breakpoints", ""),
            "experiment": sol.meta.get("experiment", ""),
        }
        with path.open("w", newline="", encoding="utf-8") as fh:
            for key in HEADER_KEYS:
                fh.write(f"# {key}={header[key]}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(FIELDS)
            for (kind, entity, leg, index), value in zip(sol.names, sol.x):
                writer.writerow([
                    kind,
                    "" if entity is None else entity,
                    "" if leg is None else leg,
                    "" if index is None else index,
                    repr(float(value)),
                ])
        logger.info("wrote %d values to %s", len(sol.names), path)
        return path

    @staticmethod
    def read_solution(path: Union[str, Path]) -> Solution:
        path = Path(path)
        if not path.is_file():
            raise SolutionFileError(f"{path}: solution file not found")

        header = {}
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                if not line.startswith("#"):
                    break
                key, _, value = line[1:].strip().partition("=")
                header[key.strip()] = value.strip()

        try:
            frame = pd.read_csv(path, comment="#", dtype=str, keep_default_na=False)
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise SolutionFileError(f"{path}: {e}") from e
        missing = [c for c in FIELDS if c not in frame.columns]
        if missing:
            raise SolutionFileError(f"{path}: missing column(s) {', '.join(missing)}")

        try:
            names = tuple(
                (kind, entity or None, int(leg) if leg else None, int(index) if index else None)
                for kind, entity, leg, index in zip(frame["kind"], frame["entity"], frame["leg"], frame["index"])
            )
            x = np.array([float(v) for v in frame["value"]], dtype=float)
        except ValueError as e:
            raise SolutionFileError(f"{path}: malformed value ({e})") from e

        def number(key, default=math.nan):
            raw = header.get(key, "")
            return float(raw) if raw else default

        meta = {"mode": header.get("mode") or "candidates", "scenario": header.get("scenario", "")}
        if header.get("n_breakpoints"):
            meta["n_breakpoints"] = int(header["n_breakpoints"])
        if header.get("experiment"):
            meta["experiment"] = int(header["experiment"])
        return Solution(
            names=names,
            x=x,
            objective=number("objective"),
            bound=number("bound"),
            gap=number("gap"),
            nodes=int(number("nodes", 0)),
            wall_time=0.0,
            status=header.get("status", "optimal"),
            meta=meta,
        )


write_solution = SolutionStore.write_solution
read_solution = SolutionStore.read_solution
