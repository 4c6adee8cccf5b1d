import math
from dataclasses import replace

import numpy as np
import pytest

from ferry_planner.core.linearizer import LinearizationError, Linearizer
from ferry_planner.models.scenario import TimeGrid, Vessel

from tests.conftest import FRICTION, START, make_leg


def _vessel(**overrides):
    values = dict(id="V1", battery_bound_max=20.0, soc_min=2.0, displacement=1000.0,
                  friction_const=FRICTION, speed_min=5.0, speed_max=20.0)
    values.update(overrides)
    return Vessel(**values)


# ---------------------------------------------------------
# Consumption law
# ---------------------------------------------------------
def test_consumption_law_scales_with_speed_squared():
    base = Linearizer.consumption(1e-5, 32.0, 10.0, 2800.0)
    assert Linearizer.consumption(1e-5, 32.0, 20.0, 2800.0) == pytest.approx(4 * base, rel=1e-12)
    assert base == pytest.approx(1e-5 * 32.0 * 100.0 * 2800.0 ** (2.0 / 3.0), rel=1e-12)


def test_calibrated_ferry_uses_less_energy_at_21_33_knots():
    w, d = 2800.0, 32.0
    k = 25.0 / (d * 25.0 ** 2 * w ** (2.0 / 3.0))
    fast = Linearizer.consumption(k, d, 25.0, w)
    slow = Linearizer.consumption(k, d, d / 1.5, w)
    assert fast == pytest.approx(25.0, rel=1e-12)
    assert slow == pytest.approx(25.0 * (d / 1.5 / 25.0) ** 2, rel=1e-12)
    assert slow < fast


def test_consumption_over_time_matches_speed_form():
    leg = make_leg("V1", 1, "A", "B", (1.0, 1.5), (2.0, 3.0))
    vessel = _vessel()
    for t in (0.6, 1.0, 1.37, 2.0):
        by_speed = Linearizer.consumption(vessel.friction_const, leg.distance, leg.distance / t, leg.displacement)
        assert Linearizer.consumption_at_time(leg, vessel, t) == pytest.approx(by_speed, rel=1e-12)


# ---------------------------------------------------------
# Candidate travel times
# ---------------------------------------------------------
def test_travel_options_on_half_hour_grid():
    leg = make_leg("V1", 1, "A", "B", (1.0, 1.5), (2.0, 3.0))
    grid = TimeGrid(start=START, periods=12, step=0.5)
    options = Linearizer.travel_options(leg, _vessel(), grid)

    assert [o.steps for o in options] == [2, 3]
    assert [o.travel_time for o in options] == [1.0, 1.5]
    assert options[1].speed == pytest.approx(10.0 / 1.5)
    assert options[0].consumption > options[1].consumption


def test_travel_options_respect_speed_limit():
    # 25 kn over 32 nmi is 1.28 h, so 1.25 h is too fast
    leg = make_leg("V1", 1, "A", "B", (1.0, 1.5), (2.5, 3.0), travel=(1.0, 1.5), distance=32.0)
    grid = TimeGrid(start=START, periods=12, step=0.25)
    options = Linearizer.travel_options(leg, _vessel(speed_max=25.0), grid)
    assert [o.travel_time for o in options] == [1.5]
    assert options[0].speed == pytest.approx(21.333333, abs=1e-5)


def test_empty_travel_interval_raises():
    leg = make_leg("V1", 1, "A", "B", (1.0, 1.5), (2.0, 3.0), travel=(0.2, 0.3))
    with pytest.raises(LinearizationError, match="do not meet"):
        Linearizer.travel_interval(leg, _vessel())


def test_no_grid_point_in_interval_raises():
    leg = make_leg("V1", 1, "A", "B", (1.0, 1.5), (2.0, 3.0), travel=(1.1, 1.4))
    grid = TimeGrid(start=START, periods=12, step=0.5)
    with pytest.raises(LinearizationError, match="no travel time"):
        Linearizer.travel_options(leg, _vessel(), grid)


# ---------------------------------------------------------
# Secant envelope
# ---------------------------------------------------------
def test_envelope_needs_two_breakpoints():
    leg = make_leg("V1", 1, "A", "B", (1.0, 1.5), (2.0, 3.0))
    with pytest.raises(LinearizationError):
        Linearizer.secant_envelope(leg, _vessel(), 1)


def test_envelope_segments_are_ordered_chords():
    leg = make_leg("V1", 1, "A", "B", (1.0, 1.5), (2.0, 3.0))
    vessel = _vessel()
    segments = Linearizer.secant_envelope(leg, vessel, 5)

    assert len(segments) == 4
    assert segments[0].t_start == pytest.approx(1.0)
    assert segments[-1].t_end == pytest.approx(1.5)
    for seg in segments:
        assert seg.value(seg.t_start) == pytest.approx(Linearizer.consumption_at_time(leg, vessel, seg.t_start), abs=1e-12)
        assert seg.value(seg.t_end) == pytest.approx(Linearizer.consumption_at_time(leg, vessel, seg.t_end), abs=1e-12)
    # convex and decreasing: slopes negative and increasing
    slopes = [seg.slope for seg in segments]
    assert all(s < 0 for s in slopes)
    assert slopes == sorted(slopes)


def test_degenerate_interval_gives_constant_segment():
    leg = make_leg("V1", 1, "A", "B", (1.0, 1.5), (2.0, 3.0), travel=(1.5, 1.5))
    vessel = _vessel()
    segments = Linearizer.secant_envelope(leg, vessel, 5)
    assert len(segments) == 1
    assert segments[0].slope == 0.0
    assert segments[0].intercept == pytest.approx(Linearizer.consumption_at_time(leg, vessel, 1.5))


def test_envelope_never_underestimates_random_samples():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        k = rng.uniform(1e-6, 1e-4)
        d = rng.uniform(5.0, 50.0)
        w = rng.uniform(200.0, 5000.0)
        s_min, s_max = 5.0, rng.uniform(12.0, 30.0)
        leg = make_leg("V1", 1, "A", "B", (1.0, 1.5), (2.0, 3.0), travel=(0.01, 100.0), distance=d)
        leg = replace(leg, displacement=w)
        vessel = _vessel(friction_const=k, speed_min=s_min, speed_max=s_max)
        segments = Linearizer.secant_envelope(leg, vessel, int(rng.integers(2, 9)))

        lo, hi = Linearizer.travel_interval(leg, vessel)
        t = rng.uniform(lo, hi)
        truth = Linearizer.consumption(k, d, d / t, w)
        assert Linearizer.envelope_value(segments, t) >= truth - 1e-12 * max(1.0, truth)

        for seg in segments:
            exact = Linearizer.consumption_at_time(leg, vessel, seg.t_start)
            assert math.isclose(Linearizer.envelope_value(segments, seg.t_start), exact,
                                rel_tol=1e-12, abs_tol=1e-12)


def test_five_breakpoints_are_tighter_than_two():
    leg = make_leg("V1", 1, "A", "B", (1.0, 1.5), (2.0, 3.0), travel=(0.6, 2.0))
    vessel = _vessel()
    coarse = Linearizer.secant_envelope(leg, vessel, 2)
    fine = Linearizer.secant_envelope(leg, vessel, 5)

    lo, hi = Linearizer.travel_interval(leg, vessel)
    samples = np.linspace(lo, hi, 100)
    truth = np.array([Linearizer.consumption_at_time(leg, vessel, t) for t in samples])
    over_coarse = np.array([Linearizer.envelope_value(coarse, t) for t in samples]) - truth
    over_fine = np.array([Linearizer.envelope_value(fine, t) for t in samples]) - truth

    assert np.all(over_fine >= -1e-9)
    assert np.all(over_fine <= over_coarse + 1e-9)
    assert over_fine.max() < 0.5 * over_coarse.max()
