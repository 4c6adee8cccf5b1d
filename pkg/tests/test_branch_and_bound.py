import math
from dataclasses import replace

import numpy as np
import pytest

from ferry_planner.core.branch_and_bound import BranchAndBound, relative_gap, solve_milp
from ferry_planner.core.lp_solver import LpSolver
from ferry_planner.core.model_builder import ModelBuilder
from ferry_planner.core.oracle import brute_force
from ferry_planner.core.simplex import SolverError
from ferry_planner.models.milp import MilpModel, name_key

from tests.conftest import make_scenario


def _knapsack(capacity=4.0, lower=(0.0, 0.0, 0.0), upper=(1.0, 1.0, 1.0)):
    """min -(5a + 4b + 3c)  s.t.  3a + 3b + 3c <= capacity, a, b, c binary."""
    return MilpModel(
        rows=np.array([0, 0, 0]),
        cols=np.array([0, 1, 2]),
        vals=np.array([3.0, 3.0, 3.0]),
        senses=("L",),
        rhs=np.array([capacity]),
        objective=np.array([-5.0, -4.0, -3.0]),
        lower=np.array(lower),
        upper=np.array(upper),
        binary=np.array([True, True, True]),
        col_names=tuple(name_key("y", None, None, i) for i in range(3)),
        row_names=(name_key("cap"),),
        col_tags=("", "", ""),
        row_tags=("cap",),
        name="knapsack",
    )


def test_relative_gap():
    assert relative_gap(10.0, 9.0) == pytest.approx(0.1)
    assert relative_gap(0.5, 0.4) == pytest.approx(0.1)
    assert relative_gap(1.0, 2.0) == 0.0
    assert relative_gap(math.inf, 1.0) == math.inf
    assert relative_gap(1.0, -math.inf) == math.inf


def test_knapsack_optimum(exact_cfg):
    sol = solve_milp(_knapsack(), exact_cfg)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(-5.0)
    assert sol.x == pytest.approx([1.0, 0.0, 0.0])
    assert sol.bound == pytest.approx(-5.0)
    assert sol.gap <= 1e-10
    assert sol.nodes >= 3


def test_node_limit_without_incumbent(exact_cfg):
    sol = solve_milp(_knapsack(), replace(exact_cfg, node_limit=1))
    assert sol.status == "limit_no_incumbent"
    assert sol.nodes == 1
    assert not sol.has_incumbent


def test_infeasible_root(exact_cfg):
    sol = solve_milp(_knapsack(capacity=-1.0), exact_cfg)
    assert sol.status == "infeasible"
    assert sol.objective == math.inf
    assert sol.nodes == 1


def test_unbounded_root(exact_cfg):
    m = _knapsack()
    m = replace(m, binary=np.array([False, True, True]), lower=np.array([-math.inf, 0.0, 0.0]),
                upper=np.array([0.0, 1.0, 1.0]), objective=np.array([1.0, -4.0, -3.0]))
    sol = solve_milp(m, replace(exact_cfg, lp_engine="native"))
    assert sol.status == "unbounded"
    assert sol.objective == -math.inf


def test_all_binaries_fixed_matches_lp(tiny, exact_cfg):
    m = ModelBuilder.build_model(tiny)
    reference = brute_force(tiny, model=m)
    fixed = ModelBuilder.fix_binaries(m, {j: reference.x[j] for j in np.flatnonzero(m.binary)})

    sol = solve_milp(fixed, exact_cfg)
    lp = LpSolver.solve_lp(fixed)
    assert sol.status == "optimal"
    assert sol.nodes == 1
    assert sol.objective == pytest.approx(lp.objective, rel=1e-9, abs=1e-9)


def test_tiny_optimum_matches_enumeration(tiny, exact_cfg):
    m = ModelBuilder.build_model(tiny)
    sol = solve_milp(m, exact_cfg)
    reference = brute_force(tiny, model=m)
    assert sol.status == reference.status == "optimal"
    assert sol.objective == pytest.approx(reference.objective, rel=1e-7, abs=1e-7)
    for j in np.flatnonzero(m.binary):
        assert sol.x[j] in (0.0, 1.0)


def test_node_log_tracks_bound_and_incumbent(tiny, exact_cfg):
    search = BranchAndBound(ModelBuilder.build_model(tiny), exact_cfg)
    sol = search.solve()
    assert len(search.node_log) == sol.nodes
    bounds = [entry["bound"] for entry in search.node_log]
    assert bounds == sorted(bounds)
    assert search.node_log[-1]["incumbent"] == pytest.approx(sol.objective)


def test_worker_count_does_not_change_result(tiny, exact_cfg):
    m = ModelBuilder.build_model(tiny)
    single = solve_milp(m, exact_cfg)
    pooled = solve_milp(m, replace(exact_cfg, workers=2))
    assert pooled.status == single.status
    assert pooled.nodes == single.nodes
    assert pooled.objective == single.objective
    assert np.array_equal(pooled.x, single.x)
    assert pooled.meta["workers"] == 2


def test_two_point_envelope_is_no_dearer_than_grid_candidates(tiny, exact_cfg):
    # both travel bounds lie on the grid, so the secant model contains every candidate choice at its exact cost
    candidates = solve_milp(ModelBuilder.build_model(tiny), exact_cfg)
    secant = solve_milp(ModelBuilder.build_model(tiny, mode="secant", n_breakpoints=2), exact_cfg)
    assert secant.status == "optimal"
    assert secant.objective <= candidates.objective + 1e-7


def test_warm_start_becomes_first_incumbent(tiny, exact_cfg):
    m = ModelBuilder.build_model(tiny)
    cold = solve_milp(m, exact_cfg)
    search = BranchAndBound(m, exact_cfg, start=cold.x)
    warm = search.solve()
    assert warm.status == "optimal"
    assert search.warm_start_objective == pytest.approx(cold.objective, rel=1e-9, abs=1e-9)
    assert warm.objective == pytest.approx(cold.objective, rel=1e-9, abs=1e-9)


def test_start_vector_length_is_checked(tiny, exact_cfg):
    m = ModelBuilder.build_model(tiny)
    with pytest.raises(SolverError, match="start vector has 3 entries"):
        BranchAndBound(m, exact_cfg, start=np.zeros(3))


@pytest.mark.parametrize("factor", [1e-3, 1e3])
def test_scaled_objective_keeps_the_argmin(tiny, exact_cfg, factor):
    m = ModelBuilder.build_model(tiny)
    plain = solve_milp(m, exact_cfg)
    scaled = solve_milp(ModelBuilder.scale_objective(m, factor), exact_cfg)
    assert scaled.status == "optimal"
    assert scaled.objective == pytest.approx(factor * plain.objective, rel=1e-6)
    assert float(m.objective @ scaled.x) == pytest.approx(plain.objective, rel=1e-6, abs=1e-9)


def test_halving_the_step_never_raises_the_optimum(exact_cfg):
    # every half-hour schedule is also a quarter-hour schedule
    coarse = solve_milp(ModelBuilder.build_model(make_scenario()), exact_cfg)
    fine = solve_milp(ModelBuilder.build_model(make_scenario(step=0.25)), exact_cfg)
    assert coarse.status == fine.status == "optimal"
    assert fine.objective <= coarse.objective + 1e-7 * max(1.0, abs(coarse.objective))
