import numpy as np
import pytest

from ferry_planner.core.branch_and_bound import solve_milp
from ferry_planner.core.model_builder import ModelBuilder
from ferry_planner.core.solution_store import SolutionFileError, SolutionStore


def test_solution_file_keeps_values_and_header(tiny, exact_cfg, tmp_path):
    m = ModelBuilder.build_model(tiny, mode="secant", n_breakpoints=3)
    sol = solve_milp(m, exact_cfg)
    path = SolutionStore.write_solution(sol, tmp_path / "out" / "sol.csv")

    back = SolutionStore.read_solution(path)
    assert back.names == sol.names
    assert np.array_equal(back.x, sol.x)
    assert back.objective == sol.objective
    assert back.status == sol.status
    assert back.nodes == sol.nodes
    assert back.meta["mode"] == "secant"
    assert back.meta["n_breakpoints"] == 3


def test_missing_file(tmp_path):
    with pytest.raises(SolutionFileError, match="not found"):
        SolutionStore.read_solution(tmp_path / "absent.csv")


def test_missing_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("# status=optimal\nkind,value\nt_dep,1.0\n", encoding="utf-8")
    with pytest.raises(SolutionFileError, match="missing column"):
        SolutionStore.read_solution(path)
