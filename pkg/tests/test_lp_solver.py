import numpy as np
import pytest
from scipy import sparse

from ferry_planner.core.lp_solver import LpSolver
from ferry_planner.core.model_builder import ModelBuilder
from ferry_planner.core.experiment_runner import ExperimentRunner
from ferry_planner.core.scenario_manager import ScenarioManager
from ferry_planner.core.simplex import RevisedSimplex, SolverError

from tests.conftest import DESK_BUNDLE

ENGINES = ("native", "highs")


def _solve(A, senses, rhs, c, lower, upper, engine):
    return LpSolver.solve_arrays(sparse.csc_matrix(np.array(A, dtype=float)), senses, rhs, c,
                                 lower, upper, engine=engine)


@pytest.mark.parametrize("engine", ENGINES)
def test_two_variable_lp_and_duals(engine):
    # min -x - 2y  s.t.  x + y <= 4,  x + 3y <= 6
    res = _solve([[1, 1], [1, 3]], ["L", "L"], [4, 6], [-1, -2], [0, 0], [10, 10], engine)
    assert res.status == "optimal"
    assert res.objective == pytest.approx(-5.0)
    assert res.x == pytest.approx([3.0, 1.0])
    assert res.duals == pytest.approx([-0.5, -0.5])


@pytest.mark.parametrize("engine", ENGINES)
def test_equality_and_greater_rows(engine):
    # min x + y  s.t.  x + y >= 2,  x - y = 0
    res = _solve([[1, 1], [1, -1]], ["G", "E"], [2, 0], [1, 1], [0, 0], [np.inf, np.inf], engine)
    assert res.status == "optimal"
    assert res.x == pytest.approx([1.0, 1.0])
    assert res.duals == pytest.approx([1.0, 0.0], abs=1e-9)


@pytest.mark.parametrize("engine", ENGINES)
def test_infeasible_lp(engine):
    res = _solve([[1, 1], [1, 1]], ["L", "G"], [1, 3], [1, 1], [0, 0], [10, 10], engine)
    assert res.status == "infeasible"
    assert res.objective == np.inf


def test_unbounded_lp_native():
    res = _solve([[1, -1]], ["L"], [1], [-1, 0], [0, 0], [np.inf, np.inf], "native")
    assert res.status == "unbounded"
    assert res.objective == -np.inf


def test_fixed_columns_are_presolved():
    res = _solve([[1, 1]], ["L"], [3], [2, 5], [1, 2], [1, 2], None)
    assert res.engine == "presolve"
    assert res.status == "optimal"
    assert res.objective == pytest.approx(12.0)


def test_row_broken_by_fixed_columns_is_infeasible():
    res = _solve([[1, 1], [1, 0]], ["L", "L"], [3, 10], [0, 1], [2, 0], [2, 5], None)
    assert res.status == "optimal"
    res = _solve([[1, 0], [1, 1]], ["G", "L"], [3, 10], [0, 1], [2, 0], [2, 5], None)
    assert res.status == "infeasible"
    assert res.engine == "presolve"


def test_crossed_bounds_are_infeasible():
    res = _solve([[1, 1]], ["L"], [3], [1, 1], [2, 0], [1, 1], "native")
    assert res.status == "infeasible"


def test_unknown_engine_raises():
    with pytest.raises(SolverError, match="unknown LP engine"):
        LpSolver.pick_engine("glpk", 1, 1)


def test_auto_engine_picks_by_size():
    assert LpSolver.pick_engine("auto", 100, 200) == "native"
    assert LpSolver.pick_engine("auto", 400, 400) == "highs"


@pytest.mark.parametrize("seed", range(10))
def test_native_matches_highs_on_random_box_lps(seed):
    rng = np.random.default_rng(seed)
    n, m = 8, 6
    A = rng.uniform(-1.0, 1.0, (m, n))
    x0 = rng.uniform(0.0, 10.0, n)
    senses = ["L", "L", "G", "G", "E", "L"]
    slack = np.array([1.0, 0.5, -1.0, -0.5, 0.0, 2.0])
    rhs = A @ x0 + slack
    c = rng.uniform(-1.0, 1.0, n)
    lower, upper = np.zeros(n), np.full(n, 10.0)

    native = RevisedSimplex().solve(sparse.csc_matrix(A), senses, rhs, c, lower, upper)
    highs = LpSolver.solve_arrays(A, senses, rhs, c, lower, upper, engine="highs")
    assert native.status == highs.status == "optimal"
    assert native.objective == pytest.approx(highs.objective, rel=1e-7, abs=1e-9)


def test_tiny_relaxation_agrees_across_engines(tiny):
    m = ModelBuilder.build_model(tiny)
    native = LpSolver.solve_lp(m, engine="native")
    highs = LpSolver.solve_lp(m, engine="highs")
    assert native.status == highs.status == "optimal"
    assert native.objective == pytest.approx(highs.objective, rel=1e-7, abs=1e-9)


@pytest.mark.parametrize("engine", ENGINES)
def test_relaxation_satisfies_optimality_conditions(tiny, engine):
    m = ModelBuilder.build_model(tiny)
    res = LpSolver.solve_lp(m, engine=engine)
    assert res.status == "optimal"
    A = m.matrix("csr")
    activity = A @ res.x
    senses = np.array(m.senses)
    slack = m.rhs - activity
    tol = 1e-6

    assert np.all(res.x >= m.lower - tol) and np.all(res.x <= m.upper + tol)
    assert np.all(slack[senses == "L"] >= -tol)
    assert np.all(slack[senses == "G"] <= tol)
    assert np.all(np.abs(slack[senses == "E"]) <= tol)

    # row prices: nonpositive on <=, nonnegative on >=, zero where the row is slack
    assert np.all(res.duals[senses == "L"] <= tol)
    assert np.all(res.duals[senses == "G"] >= -tol)
    assert np.all(np.abs(res.duals * slack) <= tol)

    # reduced costs vanish on columns strictly inside their bounds
    reduced = m.objective - A.T @ res.duals
    inside = (res.x > m.lower + tol) & (res.x < m.upper - tol)
    assert np.all(np.abs(reduced[inside]) <= 1e-5)
    assert float(m.objective @ res.x) == pytest.approx(res.objective, rel=1e-9, abs=1e-9)


@pytest.mark.slow
def test_desk_relaxation_agrees_across_engines():
    s = ScenarioManager.load(DESK_BUNDLE)
    m = ExperimentRunner.experiment_model(s, 1)
    assert LpSolver.pick_engine("auto", m.n_rows, m.n_cols) == "highs"
    native = LpSolver.solve_lp(m, engine="native")
    highs = LpSolver.solve_lp(m, engine="highs")
    assert native.status == highs.status == "optimal"
    assert native.objective == pytest.approx(highs.objective, rel=1e-7, abs=1e-9)
