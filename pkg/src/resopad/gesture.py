"""Pose streams → musical controls.

Altitude dips latch a running minimum (raised above normal altitude it
resets), an altitude threshold toggles the octave with hysteresis, and bow
position/speed come from the violin−bow difference.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

DEFAULT_RESET_MARGIN = 0.02
DEFAULT_HYSTERESIS = 0.05


@dataclass(frozen=True)
class PoseFrame:
    """One tracker sample: two rigid bodies, six numbers each."""

    time: float
    violin: Tuple[float, float, float, float, float, float]  # x y z yaw pitch roll
    bow: Tuple[float, float, float, float, float, float]

    def __post_init__(self):
        values = (self.time,) + tuple(self.violin) + tuple(self.bow)
        if len(self.violin) != 6 or len(self.bow) != 6:
            raise ValueError("pose bodies need 6 values each")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("pose values must be finite")


class AltitudeTracker:
    """Running minimum of altitude; control deepens as the violin dips.

    control = clamp((normal − min)/(normal − floor), 0, 1); climbing above
    normal + margin resets the minimum to the current altitude.
    """

    def __init__(self, normal_altitude: float, floor_altitude: float,
                 reset_margin: float = DEFAULT_RESET_MARGIN):
        if not floor_altitude < normal_altitude:
            raise ValueError("floor altitude must sit below normal altitude")
        self.normal = float(normal_altitude)
        self.floor = float(floor_altitude)
        self.margin = float(reset_margin)
        self.running_min: Optional[float] = None

    def update(self, z: float) -> float:
        if self.running_min is None or z > self.normal + self.margin:
            self.running_min = z
        else:
            self.running_min = min(self.running_min, z)
        control = (self.normal - self.running_min) / (self.normal - self.floor)
        return min(1.0, max(0.0, control))

    def reset(self):
        self.running_min = None


class OctaveToggle:
    """Hysteresis switch on altitude: ON below z_t − h/2, OFF above z_t + h/2."""

    def __init__(self, threshold: float, hysteresis: float = DEFAULT_HYSTERESIS):
        if hysteresis <= 0:
            raise ValueError("hysteresis must be positive")
        self.threshold = float(threshold)
        self.hysteresis = float(hysteresis)
        self.on = False

    def update(self, z: float) -> bool:
        half = self.hysteresis / 2.0
        if z < self.threshold - half:
            self.on = True
        elif z > self.threshold + half:
            self.on = False
        return self.on


def bow_relative(violin_pos: Sequence[float], bow_pos: Sequence[float]):
    """Bow position in the violin's frame: violin − bow, componentwise."""
    return tuple(v - b for v, b in zip(violin_pos, bow_pos))


def bow_speed(prev_rel: Sequence[float], cur_rel: Sequence[float], dt: float) -> float:
    """Euclidean speed of the relative bow position over dt seconds."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    dx, dy, dz = (c - p for c, p in zip(cur_rel, prev_rel))
    return math.hypot(dx, dy, dz) / dt


class GestureState:
    """Bundles the per-frame gesture pipeline for the engine."""

    def __init__(self, altitude: AltitudeTracker, toggle: OctaveToggle):
        self.altitude = altitude
        self.toggle = toggle
        self._prev_rel: Optional[Tuple[float, float, float]] = None
        self._prev_time: Optional[float] = None

    def update(self, frame: PoseFrame) -> dict:
        z = frame.violin[2]
        control = self.altitude.update(z)
        octave_on = self.toggle.update(z)
        rel = bow_relative(frame.violin[:3], frame.bow[:3])
        if self._prev_rel is None or frame.time <= self._prev_time:
            speed = 0.0
        else:
            speed = bow_speed(self._prev_rel, rel, frame.time - self._prev_time)
        self._prev_rel = rel
        self._prev_time = frame.time
        return {
            "altitude_control": control,
            "octave_on": octave_on,
            "bow_relative": rel,
            "bow_speed": speed,
        }
