# ferry_planner/core/mps_io.py

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from ferry_planner.core.errors import FerryPlannerError
from ferry_planner.models.milp import MilpModel

logger = logging.getLogger("ferry_planner.mps")

OBJECTIVE_ROW = "COST"
_SECTIONS = ("NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA")


class MpsFormatError(FerryPlannerError):
    """Raised when an MPS file cannot be parsed."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class MpsExportError(FerryPlannerError):
    """Raised when a model holds a value that MPS cannot represent."""

    def __init__(self, row: str, message: str):
        self.row = row
        super().__init__(f"row {row}: {message}")


def _num(value: float) -> str:
    # shortest text that reads back to the same double
    return repr(float(value))


def _line(code: str, name1: str, name2: str = "", value: Optional[float] = None) -> str:
    """Fixed-format record; a number longer than its 12-character field pushes past it."""
    text = f" {code:<2} {name1:<8}  {name2:<8}"
    if value is not None:
        text += f"  {_num(value):>12}"
    return text.rstrip()


class MpsIO:
    """Fixed-format MPS export and import."""

    # --------------------------------------------------------------
    # Export
    # --------------------------------------------------------------
    @staticmethod
    def export_mps(m: MilpModel, path: Union[str, Path]) -> Path:
        """
        Write m in fixed MPS layout with rows and columns in assembly order.
        Original names and provenance tags travel in `*` comment lines.
        """
        out = Path(path)
        row_ids = [f"R{i + 1:07d}" for i in range(m.n_rows)]
        col_ids = [f"C{j + 1:07d}" for j in range(m.n_cols)]

        for i in range(m.n_rows):
            if not math.isfinite(m.rhs[i]):
                raise MpsExportError(row_ids[i], f"right-hand side {m.rhs[i]} is not finite")
        for i, v in zip(m.rows.tolist(), m.vals.tolist()):
            if not math.isfinite(v):
                raise MpsExportError(row_ids[i], f"coefficient {v} is not finite")
        for j, v in enumerate(m.objective.tolist()):
            if not math.isfinite(v):
                raise MpsExportError(OBJECTIVE_ROW, f"objective coefficient of {col_ids[j]} is not finite")

        by_col: List[List[tuple]] = [[] for _ in range(m.n_cols)]
        for i, j, v in zip(m.rows.tolist(), m.cols.tolist(), m.vals.tolist()):
            by_col[j].append((i, v))

        lines = [f"* model {m.name}"]
        for j, name in enumerate(m.col_names):
            lines.append(f"* COL {col_ids[j]} {m.col_tags[j] or '-'} {json.dumps(list(name), separators=(',', ':'))}")
        for i, name in enumerate(m.row_names):
            lines.append(f"* ROW {row_ids[i]} {m.row_tags[i] or '-'} {json.dumps(list(name), separators=(',', ':'))}")

        lines.append(f"NAME          {m.name.replace(' ', '_')[:8] or 'FERRY'}")
        lines.append("OBJSENSE")
        lines.append("    MIN")
        lines.append("ROWS")
        lines.append(f" N  {OBJECTIVE_ROW}")
        for i, sense in enumerate(m.senses):
            lines.append(f" {sense}  {row_ids[i]}")

        lines.append("COLUMNS")
        in_marker = False
        marker_no = 0
        for j in range(m.n_cols):
            if m.binary[j] and not in_marker:
                lines.append(f"    MARKER{marker_no:04d}  'MARKER'                 'INTORG'")
                in_marker = True
                marker_no += 1
            elif not m.binary[j] and in_marker:
                lines.append(f"    MARKER{marker_no:04d}  'MARKER'                 'INTEND'")
                in_marker = False
                marker_no += 1
            wrote = False
            if m.objective[j] != 0.0:
                lines.append(_line("", col_ids[j], OBJECTIVE_ROW, m.objective[j]))
                wrote = True
            for i, v in by_col[j]:
                lines.append(_line("", col_ids[j], row_ids[i], v))
                wrote = True
            if not wrote:
                lines.append(_line("", col_ids[j], OBJECTIVE_ROW, 0.0))
        if in_marker:
            lines.append(f"    MARKER{marker_no:04d}  'MARKER'                 'INTEND'")

        lines.append("RHS")
        for i in range(m.n_rows):
            if m.rhs[i] != 0.0:
                lines.append(_line("", "RHS", row_ids[i], m.rhs[i]))

        lines.append("BOUNDS")
        for j in range(m.n_cols):
            lo, hi = float(m.lower[j]), float(m.upper[j])
            cid = col_ids[j]
            if lo == hi:
                lines.append(_line("FX", "BND", cid, lo))
                continue
            if math.isinf(lo) and math.isinf(hi):
                lines.append(_line("FR", "BND", cid))
                continue
            if math.isinf(lo):
                lines.append(_line("MI", "BND", cid))
            elif lo != 0.0 or m.binary[j]:
                lines.append(_line("LO", "BND", cid, lo))
            if math.isfinite(hi):
                lines.append(_line("UP", "BND", cid, hi))
            elif m.binary[j]:
                lines.append(_line("PL", "BND", cid))
        lines.append("ENDATA")

        out.write_text("\n".join(lines) + "\n", encoding="ascii")
        logger.info("exported %d rows and %d columns to %s", m.n_rows, m.n_cols, out)
        return out

    # --------------------------------------------------------------
    # Import
    # --------------------------------------------------------------
    @staticmethod
    def read_mps(path: Union[str, Path]) -> MilpModel:
        """Read fixed (or whitespace separated) MPS into a minimization model."""
        text = Path(path).read_text(encoding="ascii", errors="replace")
        name = Path(path).stem
        col_meta: Dict[str, tuple] = {}
        row_meta: Dict[str, tuple] = {}

        section = None
        maximize = False
        objective_row: Optional[str] = None
        row_order: List[str] = []
        row_sense: Dict[str, str] = {}
        col_order: List[str] = []
        col_pos: Dict[str, int] = {}
        col_integer: Dict[str, bool] = {}
        coeffs: Dict[tuple, float] = {}
        objective: Dict[str, float] = {}
        rhs: Dict[str, float] = {}
        ranges: Dict[str, float] = {}
        bounds: Dict[str, List[Optional[float]]] = {}
        integer_block = False
        ended = False

        def number(token: str, line_no: int) -> float:
            try:
                return float(token)
            except ValueError:
                raise MpsFormatError(line_no, f"expected a number, got '{token}'")

        for line_no, raw in enumerate(text.splitlines(), start=1):
            if not raw.strip():
                continue
            if raw.startswith("*"):
                parts = raw[1:].split(None, 3)
                if len(parts) == 4 and parts[0] in ("COL", "ROW"):
                    try:
                        meta = (parts[2], tuple(json.loads(parts[3])))
                    except (ValueError, TypeError):
                        continue
                    (col_meta if parts[0] == "COL" else row_meta)[parts[1]] = meta
                continue

            tokens = raw.split()
            if not raw[0].isspace():
                head = tokens[0].upper()
                if head not in _SECTIONS:
                    raise MpsFormatError(line_no, f"unknown section '{tokens[0]}'")
                section = head
                if head == "NAME":
                    name = tokens[1] if len(tokens) > 1 else name
                elif head == "OBJSENSE" and len(tokens) > 1:
                    maximize = tokens[1].upper() in ("MAX", "MAXIMIZE")
                elif head == "ENDATA":
                    ended = True
                    break
                continue

            if section == "OBJSENSE":
                maximize = tokens[0].upper() in ("MAX", "MAXIMIZE")
            elif section == "ROWS":
                if len(tokens) != 2:
                    raise MpsFormatError(line_no, "ROWS entries need a type and a name")
                kind, row = tokens[0].upper(), tokens[1]
                if kind not in ("N", "L", "G", "E"):
                    raise MpsFormatError(line_no, f"unknown row type '{tokens[0]}'")
                if row in row_sense or row == objective_row:
                    raise MpsFormatError(line_no, f"duplicate row '{row}'")
                if kind == "N":
                    if objective_row is None:
                        objective_row = row
                    continue
                row_sense[row] = kind
                row_order.append(row)
            elif section == "COLUMNS":
                if len(tokens) >= 3 and tokens[1].strip("'").upper() == "MARKER":
                    marker = tokens[2].strip("'").upper()
                    if marker == "INTORG":
                        integer_block = True
                    elif marker == "INTEND":
                        integer_block = False
                    else:
                        raise MpsFormatError(line_no, f"unknown marker '{tokens[2]}'")
                    continue
                if len(tokens) not in (3, 5):
                    raise MpsFormatError(line_no, "COLUMNS entries need a column and one or two (row, value) pairs")
                col = tokens[0]
                if col not in col_pos:
                    col_pos[col] = len(col_order)
                    col_order.append(col)
                    col_integer[col] = integer_block
                for k in range(1, len(tokens), 2):
                    row, value = tokens[k], number(tokens[k + 1], line_no)
                    if row == objective_row:
                        objective[col] = objective.get(col, 0.0) + value
                    elif row in row_sense:
                        if value != 0.0:
                            coeffs[(row, col)] = coeffs.get((row, col), 0.0) + value
                    else:
                        raise MpsFormatError(line_no, f"unknown row '{row}'")
            elif section in ("RHS", "RANGES"):
                if len(tokens) not in (2, 3, 4, 5):
                    raise MpsFormatError(line_no, f"malformed {section} entry")
                pairs = tokens[1:] if len(tokens) % 2 == 1 else tokens
                for k in range(0, len(pairs), 2):
                    row, value = pairs[k], number(pairs[k + 1], line_no)
                    if section == "RHS":
                        if row == objective_row:
                            continue
                        if row not in row_sense:
                            raise MpsFormatError(line_no, f"unknown row '{row}'")
                        rhs[row] = value
                    else:
                        if row not in row_sense:
                            raise MpsFormatError(line_no, f"unknown row '{row}'")
                        ranges[row] = value
            elif section == "BOUNDS":
                kind = tokens[0].upper()
                needs_value = kind in ("UP", "LO", "FX")
                # the bound set name is optional
                named = len(tokens) >= (4 if needs_value else 3)
                if len(tokens) < (3 if needs_value else 2):
                    raise MpsFormatError(line_no, "malformed BOUNDS entry")
                col = tokens[2] if named else tokens[1]
                if col not in col_pos:
                    raise MpsFormatError(line_no, f"unknown column '{col}'")
                lo, hi = bounds.setdefault(col, [None, None])
                value = number(tokens[3] if named else tokens[2], line_no) if needs_value else None
                if kind == "UP":
                    hi = value
                    if value < 0 and lo is None:
                        lo = -math.inf
                elif kind == "LO":
                    lo = value
                elif kind == "FX":
                    lo = hi = value
                elif kind == "FR":
                    lo, hi = -math.inf, math.inf
                elif kind == "MI":
                    lo = -math.inf
                elif kind == "PL":
                    hi = math.inf
                elif kind == "BV":
                    lo, hi = 0.0, 1.0
                    col_integer[col] = True
                else:
                    raise MpsFormatError(line_no, f"unsupported bound type '{tokens[0]}'")
                bounds[col] = [lo, hi]
            else:
                raise MpsFormatError(line_no, "data line outside of a section")

        if not ended:
            raise MpsFormatError(len(text.splitlines()), "missing ENDATA")
        if objective_row is None:
            raise MpsFormatError(1, "no objective row (type N) declared")

        n = len(col_order)
        lower = np.zeros(n)
        upper = np.full(n, math.inf)
        binary = np.zeros(n, dtype=bool)
        for col, j in col_pos.items():
            lo, hi = bounds.get(col, [None, None])
            if col_integer[col] and hi is None:
                hi = 1.0
            lower[j] = 0.0 if lo is None else lo
            upper[j] = math.inf if hi is None else hi
            if col_integer[col]:
                if lower[j] < 0.0 or upper[j] > 1.0:
                    raise MpsFormatError(0, f"column '{col}' is a general integer, only binaries are supported")
                binary[j] = True

        # ranged rows become a pair of one-sided rows
        senses = [row_sense[r] for r in row_order]
        rhs_values = [rhs.get(r, 0.0) for r in row_order]
        row_index = {r: i for i, r in enumerate(row_order)}
        extra_rows = []
        for r in row_order:
            if r not in ranges:
                continue
            i = row_index[r]
            b, width = rhs_values[i], ranges[r]
            sense = row_sense[r]
            if sense == "E":
                lo_b, hi_b = (b, b + abs(width)) if width >= 0 else (b - abs(width), b)
            elif sense == "L":
                lo_b, hi_b = b - abs(width), b
            else:
                lo_b, hi_b = b, b + abs(width)
            senses[i], rhs_values[i] = "G", lo_b
            extra_rows.append((r, hi_b))

        rows, cols, vals = [], [], []
        for (r, c), v in coeffs.items():
            rows.append(row_index[r])
            cols.append(col_pos[c])
            vals.append(v)
        row_names = [row_meta.get(r, ("mps", (r, None, None, None)))[1] for r in row_order]
        row_tags = [row_meta.get(r, ("mps", None))[0] for r in row_order]
        for k, (r, hi_b) in enumerate(extra_rows):
            i_new = len(row_order) + k
            for (rr, c), v in coeffs.items():
                if rr == r:
                    rows.append(i_new)
                    cols.append(col_pos[c])
                    vals.append(v)
            senses.append("L")
            rhs_values.append(hi_b)
            row_names.append((f"{r}_rng", None, None, None))
            row_tags.append("range")

        order = np.lexsort((np.array(cols, dtype=np.int64), np.array(rows, dtype=np.int64))) if rows else []
        obj = np.array([objective.get(c, 0.0) for c in col_order])
        if maximize:
            obj = -obj

        return MilpModel(
            rows=np.array(rows, dtype=np.int64)[order] if rows else np.zeros(0, dtype=np.int64),
            cols=np.array(cols, dtype=np.int64)[order] if rows else np.zeros(0, dtype=np.int64),
            vals=np.array(vals, dtype=float)[order] if rows else np.zeros(0),
            senses=tuple(senses),
            rhs=np.array(rhs_values, dtype=float),
            objective=obj,
            lower=lower,
            upper=upper,
            binary=binary,
            col_names=tuple(col_meta.get(c, ("mps", (c, None, None, None)))[1] for c in col_order),
            row_names=tuple(tuple(r) for r in row_names),
            col_tags=tuple(col_meta.get(c, ("mps", None))[0] for c in col_order),
            row_tags=tuple(row_tags),
            name=name,
            meta={"source": str(path), "maximize": maximize},
        )


export_mps = MpsIO.export_mps
read_mps = MpsIO.read_mps
