# ferry_planner/models/travel.py

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TravelOption:
    """A candidate crossing time on the period grid and what it costs in energy."""

    vessel_id: str
    leg_index: int
    steps: int
    travel_time: float
    speed: float
    consumption: float

    def to_dict(self):
        return {
            "vessel": self.vessel_id,
            "leg": self.leg_index,
            "steps": self.steps,
            "travel_time": self.travel_time,
            "speed": self.speed,
            "consumption": self.consumption,
        }


@dataclass(frozen=True)
class EnvelopeSegment:
    """Chord of the consumption-vs-travel-time curve over [t_start, t_end]."""

    t_start: float
    t_end: float
    slope: float
    intercept: float

    def value(self, t: float) -> float:
        return self.slope * t + self.intercept
