import numpy as np
import pytest

from ferry_planner.core.branch_and_bound import solve_milp
from ferry_planner.core.lp_solver import LpSolver
from ferry_planner.core.model_builder import ModelBuilder
from ferry_planner.core.oracle import OracleSizeError, _groups, brute_force
from ferry_planner.core.scenario_manager import ScenarioManager

from tests.conftest import DESK_BUNDLE, make_leg, make_scenario, random_scenario


def test_free_binaries_grouped_by_leg(tiny):
    travel, flags = _groups(ModelBuilder.build_model(tiny))
    assert [len(g) for g in travel] == [2, 2]
    assert len(flags) == 4


def test_enumeration_counts_every_combination(tiny):
    sol = brute_force(tiny)
    assert sol.status == "optimal"
    assert sol.nodes == 2 * 2 * 2 ** 4
    assert sol.gap == 0.0
    assert sol.bound == sol.objective
    assert sol.meta["oracle"] == "brute_force"


def test_no_free_binaries_is_a_single_lp(tiny):
    m = ModelBuilder.build_model(tiny)
    reference = brute_force(tiny, model=m)
    fixed = ModelBuilder.fix_binaries(m, {j: reference.x[j] for j in np.flatnonzero(m.binary)})

    sol = brute_force(tiny, model=fixed)
    assert sol.nodes == 1
    assert sol.objective == pytest.approx(LpSolver.solve_lp(fixed).objective, rel=1e-12, abs=1e-12)
    assert sol.objective == pytest.approx(reference.objective, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("seed", range(20))
def test_branch_and_bound_matches_enumeration(seed, exact_cfg):
    s = random_scenario(seed)
    m = ModelBuilder.build_model(s)
    reference = brute_force(s, model=m)
    sol = solve_milp(m, exact_cfg)
    assert sol.status == reference.status
    if reference.status == "optimal":
        assert sol.objective == pytest.approx(reference.objective, rel=1e-7, abs=1e-7)


def test_unreachable_arrival_window_is_infeasible(exact_cfg):
    legs = (
        make_leg("V1", 1, "A", "B", (1.0, 1.5), (1.2, 1.4)),
        make_leg("V1", 2, "B", "A", (3.5, 4.0), (4.5, 5.5)),
    )
    s = make_scenario(legs=legs)
    assert ScenarioManager.validate(s) == []
    assert brute_force(s).status == "infeasible"
    assert solve_milp(ModelBuilder.build_model(s), exact_cfg).status == "infeasible"


def test_large_instances_are_refused():
    s = ScenarioManager.load(DESK_BUNDLE)
    with pytest.raises(OracleSizeError, match="enumeration cap"):
        brute_force(s)
