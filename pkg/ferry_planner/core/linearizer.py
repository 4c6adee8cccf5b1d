# ferry_planner/core/linearizer.py

from __future__ import annotations

import math
from typing import List, Sequence, Tuple

import numpy as np

from ferry_planner.core.errors import FerryPlannerError
from ferry_planner.models.scenario import Leg, TimeGrid, Vessel
from ferry_planner.models.travel import EnvelopeSegment, TravelOption

GRID_TOL = 1e-9


class LinearizationError(FerryPlannerError):
    """Raised when a leg admits no travel time or the envelope request is invalid."""
    pass


class Linearizer:
    """
    Conservative MILP pieces for the speed/time coupling and the
    consumption law E = k d s^2 w^(2/3).
    """

    @staticmethod
    def consumption(k: float, d: float, s: float, w: float) -> float:
        """Energy in MWh for a crossing of d nmi at s kn with displacement w t."""
        return k * d * s ** 2 * w ** (2.0 / 3.0)

    @staticmethod
    def consumption_at_time(leg: Leg, vessel: Vessel, t: float) -> float:
        """Same law written over travel time: k d^3 w^(2/3) / t^2."""
        return vessel.friction_const * leg.distance ** 3 * leg.displacement ** (2.0 / 3.0) / t ** 2

    @staticmethod
    def travel_interval(leg: Leg, vessel: Vessel) -> Tuple[float, float]:
        """Travel-time bounds of the leg intersected with the speed bounds."""
        t_min, t_max = leg.travel_time_bounds
        lo = max(t_min, leg.distance / vessel.speed_max)
        hi = min(t_max, leg.distance / vessel.speed_min)
        if lo > hi + GRID_TOL:
            raise LinearizationError(
                f"leg {leg.vessel_id}/{leg.index}: travel bounds [{t_min}, {t_max}] h do not meet "
                f"speed bounds [{vessel.speed_min}, {vessel.speed_max}] kn over {leg.distance} nmi"
            )
        return lo, max(lo, hi)

    @staticmethod
    def travel_options(leg: Leg, vessel: Vessel, grid: TimeGrid) -> List[TravelOption]:
        """One option per period multiple inside the feasible travel interval."""
        lo, hi = Linearizer.travel_interval(leg, vessel)
        first = int(math.ceil(lo / grid.step - GRID_TOL))
        last = int(math.floor(hi / grid.step + GRID_TOL))

        options = []
        for steps in range(max(first, 1), last + 1):
            t = steps * grid.step
            speed = leg.distance / t
            if speed < vessel.speed_min - GRID_TOL or speed > vessel.speed_max + GRID_TOL:
                continue
            options.append(TravelOption(
                vessel_id=leg.vessel_id,
                leg_index=leg.index,
                steps=steps,
                travel_time=t,
                speed=speed,
                consumption=Linearizer.consumption(vessel.friction_const, leg.distance, speed, leg.displacement),
            ))
        if not options:
            raise LinearizationError(
                f"leg {leg.vessel_id}/{leg.index}: no travel time on the {grid.step} h grid "
                f"within [{lo:.4f}, {hi:.4f}] h"
            )
        return options

    @staticmethod
    def secant_envelope(leg: Leg, vessel: Vessel, n_breakpoints: int) -> List[EnvelopeSegment]:
        """
        Chords of the convex curve E(t) through uniformly spaced breakpoints.
        Their pointwise maximum overestimates E(t) between breakpoints and
        meets it at every breakpoint.
        """
        if n_breakpoints < 2:
            raise LinearizationError(f"envelope needs at least 2 breakpoints, got {n_breakpoints}")
        lo, hi = Linearizer.travel_interval(leg, vessel)

        if hi - lo < 1e-12:
            return [EnvelopeSegment(t_start=lo, t_end=hi, slope=0.0,
                                    intercept=Linearizer.consumption_at_time(leg, vessel, lo))]

        points = np.linspace(lo, hi, n_breakpoints)
        values = [Linearizer.consumption_at_time(leg, vessel, float(t)) for t in points]
        segments = []
        for j in range(n_breakpoints - 1):
            t0, t1 = float(points[j]), float(points[j + 1])
            e0, e1 = values[j], values[j + 1]
            slope = (e1 - e0) / (t1 - t0)
            segments.append(EnvelopeSegment(t_start=t0, t_end=t1, slope=slope, intercept=e0 - slope * t0))
        return segments

    @staticmethod
    def envelope_value(segments: Sequence[EnvelopeSegment], t: float) -> float:
        """Modeled consumption at travel time t: the largest chord line."""
        return max(seg.value(t) for seg in segments)


consumption = Linearizer.consumption
travel_options = Linearizer.travel_options
secant_envelope = Linearizer.secant_envelope
envelope_value = Linearizer.envelope_value
