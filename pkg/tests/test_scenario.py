import shutil
from dataclasses import replace

import pytest
import yaml

from ferry_planner.core.scenario_manager import ScenarioError, ScenarioManager
from ferry_planner.models.scenario import Vessel

from tests.conftest import DESK_BUNDLE, WEEK_BUNDLE, at, make_leg, make_scenario


@pytest.fixture
def bundle_copy(tmp_path):
    target = tmp_path / "bundle"
    shutil.copytree(DESK_BUNDLE, target)
    return target


def _rewrite(path, old, new, count=1):
    text = path.read_text(encoding="utf-8")
    assert old in text
    path.write_text(text.replace(old, new, count), encoding="utf-8")


# ---------------------------------------------------------
# Loading the desk bundle
# ---------------------------------------------------------
def test_load_desk_bundle_in_canonical_units():
    s = ScenarioManager.load(DESK_BUNDLE)

    assert s.name == "ba_co_desk"
    assert s.grid.periods == 192
    assert s.grid.step == pytest.approx(0.25)
    assert [p.id for p in s.ports] == ["BA", "CO"]
    assert [v.id for v in s.vessels] == ["V1", "V2"]
    assert len(s.legs_of("V1")) == 8
    assert len(s.legs_of("V2")) == 8

    leg = s.legs_of("V1")[0]
    assert leg.travel_time_bounds == pytest.approx((1.28, 1.5))
    assert leg.displacement == 2800.0
    assert s.costs.storage_capex == 250.0
    assert s.resale_ratio_unused == pytest.approx(0.2)
    assert ScenarioManager.validate(s) == []


def test_load_week_bundle():
    s = ScenarioManager.load(WEEK_BUNDLE)
    assert s.grid.periods == 672
    assert s.grid.step == pytest.approx(0.25)
    assert len(s.ports) == 2
    assert len(s.all_legs()) == 56
    assert ScenarioManager.validate(s) == []


def test_desk_timetable_fixes_all_but_the_last_crossings():
    s = ScenarioManager.load(DESK_BUNDLE)
    for vessel_id in ("V1", "V2"):
        *fixed, last = s.legs_of(vessel_id)
        for leg in fixed:
            assert leg.dep_window[0] == leg.dep_window[1]
            assert leg.arr_window[0] == leg.arr_window[1]
        assert s.grid.offset_hours(last.dep_window[1]) - s.grid.offset_hours(last.dep_window[0]) == pytest.approx(0.25)


def test_friction_calibration_reproduces_reference_crossing():
    s = ScenarioManager.load(DESK_BUNDLE)
    v = s.vessels[0]
    energy = v.friction_const * 32.0 * 25.0 ** 2 * 2800.0 ** (2.0 / 3.0)
    assert energy == pytest.approx(25.0, rel=1e-12)


def test_normalize_units_is_idempotent():
    raw = yaml.safe_load((DESK_BUNDLE / "scenario.yaml").read_text(encoding="utf-8"))
    once = ScenarioManager.normalize_units(raw)
    twice = ScenarioManager.normalize_units(once)

    assert once == twice
    assert once["time_grid"]["step"] == pytest.approx(0.25)
    assert once["legs"][0]["travel_time"] == pytest.approx([1.28, 1.5])
    # the input document is left alone
    assert raw["time_grid"]["step"] == 15


def test_unknown_unit_is_rejected():
    raw = {"units": {"power": "hp"}}
    with pytest.raises(ScenarioError, match="unknown unit"):
        ScenarioManager.normalize_units(raw)


def test_save_and_load_round_trip(tmp_path):
    s = ScenarioManager.load(DESK_BUNDLE)
    ScenarioManager.save(s, tmp_path / "saved")
    again = ScenarioManager.load(tmp_path / "saved")
    assert replace(again, source_hash=s.source_hash) == s


# ---------------------------------------------------------
# Load errors
# ---------------------------------------------------------
def test_missing_bundle_raises(tmp_path):
    with pytest.raises(ScenarioError, match="missing file"):
        ScenarioManager.load(tmp_path / "nowhere")


def test_short_series_raises(bundle_copy):
    path = bundle_copy / "prices_BA.csv"
    lines = path.read_text(encoding="utf-8").splitlines()
    path.write_text("\n".join(lines[:-5]) + "\n", encoding="utf-8")
    with pytest.raises(ScenarioError, match="series length 187") as exc:
        ScenarioManager.load(bundle_copy)
    assert exc.value.file.endswith("prices_BA.csv")


def test_capacity_factor_out_of_range_raises(bundle_copy):
    path = bundle_copy / "pv_CO.csv"
    lines = path.read_text(encoding="utf-8").splitlines()
    stamp = lines[50].split(",")[0]
    lines[50] = f"{stamp},1.5"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(ScenarioError, match="capacity factor") as exc:
        ScenarioManager.load(bundle_copy)
    assert exc.value.key == "row 50"


def test_malformed_value_names_row(bundle_copy):
    path = bundle_copy / "prices_CO.csv"
    lines = path.read_text(encoding="utf-8").splitlines()
    stamp = lines[3].split(",")[0]
    lines[3] = f"{stamp},abc"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(ScenarioError, match="malformed value") as exc:
        ScenarioManager.load(bundle_copy)
    assert exc.value.key == "row 3"


def test_off_grid_timestamp_names_row(bundle_copy):
    path = bundle_copy / "pv_BA.csv"
    lines = path.read_text(encoding="utf-8").splitlines()
    value = lines[10].split(",")[1]
    # row 10 belongs at 02:15; 02:20 keeps the series increasing
    lines[10] = f"2023-11-01 02:20:00,{value}"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(ScenarioError, match="off the grid") as exc:
        ScenarioManager.load(bundle_copy)
    assert exc.value.key == "row 10"
    assert exc.value.file.endswith("pv_BA.csv")


def test_unknown_port_raises(bundle_copy):
    _rewrite(bundle_copy / "scenario.yaml", "destination: CO", "destination: XX")
    with pytest.raises(ScenarioError, match="unknown port 'XX'"):
        ScenarioManager.load(bundle_copy)


def test_missing_costs_field_raises(bundle_copy):
    _rewrite(bundle_copy / "scenario.yaml", "  grid_capex: 172\n", "")
    with pytest.raises(ScenarioError, match="missing field") as exc:
        ScenarioManager.load(bundle_copy)
    assert exc.value.key == "costs.grid_capex"


# ---------------------------------------------------------
# Validation
# ---------------------------------------------------------
def test_tiny_scenario_is_valid(tiny):
    assert ScenarioManager.validate(tiny) == []


def test_dod_above_capacity_is_reported():
    vessel = Vessel(id="V1", battery_bound_max=20.0, battery_fixed=12.0, soc_min=12.0,
                    displacement=1000.0, friction_const=5e-5, speed_min=5.0, speed_max=20.0)
    codes = [v.code for v in ScenarioManager.validate(make_scenario(vessel=vessel))]
    assert codes == ["dod_exceeds_capacity"]


def test_broken_leg_chain_is_reported():
    legs = (
        make_leg("V1", 1, "A", "B", (1.0, 1.5), (2.0, 3.0)),
        make_leg("V1", 2, "A", "B", (3.5, 4.0), (4.5, 5.5)),
    )
    found = ScenarioManager.validate(make_scenario(legs=legs))
    assert [v.code for v in found] == ["leg_chain_discontinuity"]
    assert found[0].entity == "V1/2"


def test_window_order_is_reported():
    legs = (
        make_leg("V1", 1, "A", "B", (1.5, 1.0), (2.0, 3.0)),
        make_leg("V1", 2, "B", "A", (3.5, 4.0), (4.5, 5.5)),
    )
    codes = [v.code for v in ScenarioManager.validate(make_scenario(legs=legs))]
    assert "window_order" in codes


def test_fixed_design_required_when_not_optimized(tiny):
    vessel = replace(tiny.vessels[0], battery_fixed=None)
    s = replace(tiny, vessels=(vessel,)).with_toggles(vessel_sizing_enabled=False)
    found = ScenarioManager.validate(s)
    assert [(v.code, v.entity) for v in found] == [("missing_fixed_design", "V1")]


# ---------------------------------------------------------
# Time grid and derived scenarios
# ---------------------------------------------------------
def test_time_index_maps_timestamps_to_periods(tiny):
    grid = tiny.grid
    assert ScenarioManager.time_index(grid, at(0.0)) == 1
    assert ScenarioManager.time_index(grid, at(0.49)) == 1
    assert ScenarioManager.time_index(grid, at(0.5)) == 2
    assert ScenarioManager.time_index(grid, at(5.99)) == 12
    assert ScenarioManager.time_index(grid, at(6.0)) is None
    assert ScenarioManager.time_index(grid, at(-0.25)) is None
    assert ScenarioManager.time_of(grid, 3) == at(1.0)


def test_scale_prices_leaves_original_untouched(tiny):
    scaled = ScenarioManager.scale_prices(tiny, 1.5)
    for before, after in zip(tiny.ports, scaled.ports):
        assert after.prices == pytest.approx(tuple(1.5 * p for p in before.prices))
        assert after.pv_profile == before.pv_profile
    assert tiny.ports[0].prices[0] == 0.10


def test_scenario_hash_tracks_file_content(bundle_copy):
    original = ScenarioManager.scenario_hash(DESK_BUNDLE)
    assert ScenarioManager.scenario_hash(bundle_copy) == original

    with open(bundle_copy / "pv_BA.csv", "a", encoding="utf-8") as fh:
        fh.write("\n")
    assert ScenarioManager.scenario_hash(bundle_copy) != original
