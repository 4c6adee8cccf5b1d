from dataclasses import replace

import pytest

from ferry_planner.core.model_builder import ModelBuilder, ModelError
from ferry_planner.models.milp import name_key
from ferry_planner.models.scenario import Vessel
from ferry_planner.utils.helpers import amortization_factor

from tests.conftest import make_scenario


def _bounds(m, name):
    j = m.col_index[name]
    return m.lower[j], m.upper[j]


# ---------------------------------------------------------
# Structure of the tiny model
# ---------------------------------------------------------
def test_every_decision_symbol_is_housed(tiny):
    for mode in ("candidates", "secant"):
        coverage = ModelBuilder.symbol_coverage(ModelBuilder.build_model(tiny, mode=mode))
        assert coverage["unhoused"] == []
    coverage = ModelBuilder.symbol_coverage(ModelBuilder.build_model(tiny, mode="secant"))
    assert coverage["housed"]["t_v,l^travel"] == "t_travel"


def test_row_family_counts(tiny):
    counts = ModelBuilder.family_counts(ModelBuilder.build_model(tiny))
    assert counts["eq2"] == 2
    assert counts["eq3"] == 2
    assert counts["eq6"] == 1
    assert counts["eq9"] == 1
    assert counts["eq10"] == 1
    assert counts["eq10-closure"] == 1
    assert counts["eq11"] == 7
    assert counts["eq15"] == 7
    assert counts["eq16"] == 4
    assert counts["eq17-grid"] == 2 * 2 * 12
    assert counts["eq26"] == 2 * 12
    assert counts["eq27"] == 2 * 2 * 12
    assert counts["eq26-terminal"] == 2
    assert "eq4" not in counts


def test_secant_mode_emits_one_row_per_chord(tiny):
    m = ModelBuilder.build_model(tiny, mode="secant", n_breakpoints=4)
    counts = ModelBuilder.family_counts(m)
    assert counts["eq4"] == 2 * 3
    assert "eq3" not in counts
    assert _bounds(m, name_key("t_travel", "V1", 1)) == (1.0, 1.5)
    assert m.free_binaries() == [j for j in m.columns_of("Z") if m.lower[j] == 0.0]


def test_forced_and_free_mooring_flags(tiny):
    m = ModelBuilder.build_model(tiny)
    z = {m.col_names[j][2:]: (m.lower[j], m.upper[j]) for j in m.columns_of("Z", "V1")}

    # leg 1 may charge before its departure window closes at 1.5 h
    assert sorted(t for (leg, t) in z if leg == 1) == [1, 2, 3]
    # leg 2 charges after the first arrival (>= 2 h) and before 4 h
    assert sorted(t for (leg, t) in z if leg == 2) == [5, 6, 7, 8]
    forced = sorted(key for key, (lo, _) in z.items() if lo == 1.0)
    assert forced == [(1, 1), (1, 2), (2, 7)]
    assert len(m.free_binaries()) == 8


def test_vessel_flows_exist_only_at_leg_origin_columns(tiny):
    m = ModelBuilder.build_model(tiny)
    flows = m.columns_of("P_g2v", "V1")
    assert len(flows) == 7
    assert {m.col_names[j][2] for j in flows} == {1, 2}


def test_objective_coefficients(tiny):
    costs = ModelBuilder.build_objective(tiny)
    a_vessel = amortization_factor(6.0, 10.0)
    a_infra = amortization_factor(6.0, 15.0)

    assert costs[name_key("E_v_max", "V1")] == pytest.approx(a_vessel * 400)
    assert costs[name_key("P_g_i_max", "A")] == pytest.approx(a_infra * 172)
    assert costs[name_key("E_b_i_max", "B")] == pytest.approx(a_infra * 250)
    assert costs[name_key("P_g_plus", "A", None, 1)] == pytest.approx(0.5 * 0.10)
    assert costs[name_key("P_g_minus", "A", None, 1)] == pytest.approx(-0.5 * 0.2 * 0.10)
    assert costs[name_key("P_g_plus", "B", None, 2)] == pytest.approx(0.5 * 1.2 * 0.08)


def test_big_m_values_recorded_in_meta(tiny):
    m = ModelBuilder.build_model(tiny, big_m_scale=10.0)
    assert m.meta["m_power"] == {"A": 100.0, "B": 100.0}
    assert m.meta["m_time"] == pytest.approx(60.0)


def test_time_big_m_is_the_smallest_valid_value_per_row(tiny):
    m = ModelBuilder.build_model(tiny, big_m_scale=10.0)
    A = m.matrix("csr")
    rows = {name: i for i, name in enumerate(m.row_names)}

    def coef(row, col):
        return A[rows[row], m.col_index[col]]

    # leg 1 departs no earlier than 1.0 h; period 3 ends at 1.5 h
    assert coef(name_key("eq15", "V1", 1, 3), name_key("Z", "V1", 1, 3)) == pytest.approx(5.0)
    # the first arrival may be as late as 3.0 h; period 5 starts at 2.0 h
    assert coef(name_key("eq16", "V1", 2, 5), name_key("Z", "V1", 2, 5)) == pytest.approx(10.0)
    # forced periods keep one period's worth
    assert coef(name_key("eq15", "V1", 1, 1), name_key("Z", "V1", 1, 1)) == pytest.approx(5.0)
    for i, tag in enumerate(m.row_tags):
        if tag in ("eq15", "eq16"):
            assert abs(A[i].toarray()).max() <= m.meta["m_time"]


def test_disabled_features_zero_their_bounds(tiny):
    m = ModelBuilder.build_model(tiny.with_toggles(pv_enabled=False, storage_enabled=False))
    for j in m.columns_of("P_pv") + m.columns_of("P_b_plus") + m.columns_of("E_b_i"):
        assert m.upper[j] == 0.0
    assert _bounds(m, name_key("E_b_i_max", "A")) == (0.0, 0.0)


def test_departure_energy_respects_dod_floor(tiny):
    m = ModelBuilder.build_model(tiny)
    assert _bounds(m, name_key("E_v_leg_dep", "V1", 1)) == (2.0, 20.0)
    assert _bounds(m, name_key("E_v_leg_arr", "V1", 2)) == (2.0, 20.0)


# ---------------------------------------------------------
# Preconditions
# ---------------------------------------------------------
def test_invalid_scenario_is_rejected():
    vessel = Vessel(id="V1", battery_bound_max=20.0, battery_fixed=12.0, soc_min=15.0,
                    displacement=1000.0, friction_const=5e-5, speed_min=5.0, speed_max=20.0)
    with pytest.raises(ModelError, match="dod_exceeds_capacity"):
        ModelBuilder.build_model(make_scenario(vessel=vessel))


def test_big_m_scale_below_one_is_rejected(tiny):
    with pytest.raises(ModelError, match="big-M"):
        ModelBuilder.build_model(tiny, big_m_scale=0.5)


def test_unknown_mode_is_rejected(tiny):
    with pytest.raises(ModelError, match="unknown linearization mode"):
        ModelBuilder.build_model(tiny, mode="pwl")


# ---------------------------------------------------------
# Experiment ladder bounds
# ---------------------------------------------------------
def test_base_design_fixes_everything(tiny):
    m = ModelBuilder.fix_experiment(ModelBuilder.build_model(tiny), 1)
    assert m.meta["experiment"] == 1
    for port in ("A", "B"):
        assert _bounds(m, name_key("P_g_i_max", port)) == (5.0, 5.0)
        assert _bounds(m, name_key("P_pv_i_max", port)) == (0.0, 0.0)
        assert _bounds(m, name_key("E_b_i_max", port)) == (0.0, 0.0)
    assert _bounds(m, name_key("E_v_max", "V1")) == (12.0, 12.0)
    for j in m.columns_of("P_pv2v") + m.columns_of("P_b2v"):
        assert m.upper[j] == 0.0


def test_ladder_opens_one_feature_per_rung(tiny):
    base = ModelBuilder.build_model(tiny)
    two = ModelBuilder.fix_experiment(base, 2)
    three = ModelBuilder.fix_experiment(base, 3)
    four = ModelBuilder.fix_experiment(base, 4)

    assert _bounds(two, name_key("P_g_i_max", "A")) == (0.0, 10.0)
    assert _bounds(two, name_key("P_pv_i_max", "A")) == (0.0, 1.0)
    assert _bounds(two, name_key("E_b_i_max", "A")) == (0.0, 0.0)
    assert _bounds(three, name_key("E_b_i_max", "A")) == (0.0, 4.0)
    assert _bounds(three, name_key("E_v_max", "V1")) == (12.0, 12.0)
    assert _bounds(four, name_key("E_v_max", "V1")) == (2.0, 20.0)
    # the source model is never touched
    assert _bounds(base, name_key("E_b_i_max", "A")) == (0.0, 4.0)


def test_unknown_experiment_raises(tiny):
    with pytest.raises(ModelError, match="unknown experiment"):
        ModelBuilder.fix_experiment(ModelBuilder.build_model(tiny), 5)


def test_experiments_need_all_features(tiny):
    m = ModelBuilder.build_model(tiny.with_toggles(pv_enabled=False))
    with pytest.raises(ModelError, match="every design feature"):
        ModelBuilder.fix_experiment(m, 2)


# ---------------------------------------------------------
# Lookup
# ---------------------------------------------------------
def test_var_lookup(tiny):
    m = ModelBuilder.build_model(tiny)
    ref = ModelBuilder.var_lookup(m, ("Z", "V1", 1, 3))
    assert ref.is_binary and ref.lower == 0.0 and ref.upper == 1.0
    assert ref.tag == "eq11"
    assert ModelBuilder.var_lookup(m, ("E_v_max", "V1")).kind == "E_v_max"
    assert ModelBuilder.var_lookup(m, ("P_pv", "A", 4)).name == ("P_pv", "A", None, 4)
    with pytest.raises(ModelError, match="unknown variable"):
        ModelBuilder.var_lookup(m, ("Z", "V1", 1, 12))


def test_fix_binaries_rejects_continuous_columns(tiny):
    m = ModelBuilder.build_model(tiny)
    z = m.col_index[name_key("Z", "V1", 1, 3)]
    fixed = ModelBuilder.fix_binaries(m, {z: 0.9})
    assert (fixed.lower[z], fixed.upper[z]) == (1.0, 1.0)
    with pytest.raises(ModelError, match="not binary"):
        ModelBuilder.fix_binaries(m, {m.col_index[name_key("E_v_max", "V1")]: 1.0})


def test_build_is_deterministic(tiny):
    first = ModelBuilder.build_model(tiny)
    second = ModelBuilder.build_model(replace(tiny))
    assert first.col_names == second.col_names
    assert first.row_names == second.row_names
    assert first.triplets() == second.triplets()
