# ferry_planner/models/milp.py

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy import sparse

# (kind, entity, leg, index) - unused slots are None
NameTuple = Tuple[str, Optional[str], Optional[int], Optional[int]]

SENSES = ("L", "E", "G")


def name_key(kind: str, entity: Optional[str] = None, leg: Optional[int] = None,
             index: Optional[int] = None) -> NameTuple:
    return (kind, entity, leg, index)


@dataclass(frozen=True)
class VarRef:
    index: int
    name: NameTuple
    kind: str
    lower: float
    upper: float
    is_binary: bool
    tag: str

    def to_dict(self):
        return {
            "index": self.index,
            "name": list(self.name),
            "kind": self.kind,
            "lower": self.lower,
            "upper": self.upper,
            "is_binary": self.is_binary,
            "tag": self.tag,
        }


def _frozen(array, dtype) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class MilpModel:
    """
    A minimization MILP in triplet form.
    Rows are single-sided (`L`: <=, `E`: =, `G`: >=). Every row carries a
    provenance tag naming the constraint family that produced it.
    """

    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    senses: Tuple[str, ...]
    rhs: np.ndarray
    objective: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    binary: np.ndarray
    col_names: Tuple[NameTuple, ...]
    row_names: Tuple[NameTuple, ...]
    col_tags: Tuple[str, ...]
    row_tags: Tuple[str, ...]
    name: str = "ferry"
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "rows", _frozen(self.rows, np.int64))
        object.__setattr__(self, "cols", _frozen(self.cols, np.int64))
        object.__setattr__(self, "vals", _frozen(self.vals, float))
        object.__setattr__(self, "rhs", _frozen(self.rhs, float))
        object.__setattr__(self, "objective", _frozen(self.objective, float))
        object.__setattr__(self, "lower", _frozen(self.lower, float))
        object.__setattr__(self, "upper", _frozen(self.upper, float))
        object.__setattr__(self, "binary", _frozen(self.binary, bool))

    @property
    def n_rows(self) -> int:
        return len(self.senses)

    @property
    def n_cols(self) -> int:
        return len(self.col_names)

    @cached_property
    def col_index(self) -> Dict[NameTuple, int]:
        return {name: j for j, name in enumerate(self.col_names)}

    @cached_property
    def kind_index(self) -> Dict[str, List[int]]:
        index = defaultdict(list)
        for j, name in enumerate(self.col_names):
            index[name[0]].append(j)
        return dict(index)

    def columns_of(self, kind: str, entity: Optional[str] = None) -> List[int]:
        found = self.kind_index.get(kind, [])
        if entity is None:
            return list(found)
        return [j for j in found if self.col_names[j][1] == entity]

    def matrix(self, fmt: str = "csr") -> sparse.spmatrix:
        coo = sparse.coo_matrix((self.vals, (self.rows, self.cols)), shape=(self.n_rows, self.n_cols))
        return coo.asformat(fmt)

    def triplets(self) -> set:
        return set(zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()))

    def var_ref(self, j: int) -> VarRef:
        name = self.col_names[j]
        return VarRef(
            index=j,
            name=name,
            kind=name[0],
            lower=float(self.lower[j]),
            upper=float(self.upper[j]),
            is_binary=bool(self.binary[j]),
            tag=self.col_tags[j],
        )

    def with_bounds(self, lower, upper) -> "MilpModel":
        return replace(self, lower=lower, upper=upper)

    def with_objective(self, objective) -> "MilpModel":
        return replace(self, objective=objective)

    def free_binaries(self) -> List[int]:
        return [int(j) for j in np.flatnonzero(self.binary & (self.lower < self.upper))]

    def summary(self):
        return {
            "name": self.name,
            "rows": self.n_rows,
            "columns": self.n_cols,
            "nonzeros": int(len(self.vals)),
            "binaries": int(self.binary.sum()),
            "free_binaries": len(self.free_binaries()),
        }
