"""Pose trajectories from CSV: an offline stand-in for the sensor stream.

Columns: time_s, vx, vy, vz, vyaw, vpitch, vroll, bx, by, bz, byaw, bpitch,
broll.  Sampling holds the first frame before t0, the last frame after the
end, and linearly interpolates (or step-holds) in between.
"""

import csv
import io
from pathlib import Path
from typing import List

from .gesture import PoseFrame

COLUMNS = ("time_s", "vx", "vy", "vz", "vyaw", "vpitch", "vroll",
           "bx", "by", "bz", "byaw", "bpitch", "broll")


class TrajectoryError(ValueError):
    def __init__(self, message: str, line: int = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class Trajectory:
    def __init__(self, frames: List[PoseFrame], mode: str = "linear"):
        if not frames:
            raise TrajectoryError("trajectory needs at least one frame")
        if mode not in ("linear", "step"):
            raise TrajectoryError(f"mode must be linear or step, got {mode!r}")
        for prev, cur in zip(frames, frames[1:]):
            if cur.time <= prev.time:
                raise TrajectoryError(
                    f"time must strictly increase: {prev.time} then {cur.time}")
        self.frames = list(frames)
        self.mode = mode

    @property
    def duration(self) -> float:
        return self.frames[-1].time

    def sample(self, t: float) -> PoseFrame:
        frames = self.frames
        if t <= frames[0].time:
            return PoseFrame(time=t, violin=frames[0].violin, bow=frames[0].bow)
        if t >= frames[-1].time:
            return PoseFrame(time=t, violin=frames[-1].violin, bow=frames[-1].bow)
        # rightmost frame at or before t
        lo, hi = 0, len(frames) - 1
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if frames[mid].time <= t:
                lo = mid
            else:
                hi = mid
        a, b = frames[lo], frames[hi]
        if self.mode == "step" or b.time == a.time:
            return PoseFrame(time=t, violin=a.violin, bow=a.bow)
        frac = (t - a.time) / (b.time - a.time)
        violin = tuple(x + (y - x) * frac for x, y in zip(a.violin, b.violin))
        bow = tuple(x + (y - x) * frac for x, y in zip(a.bow, b.bow))
        return PoseFrame(time=t, violin=violin, bow=bow)


def parse_trajectory(text: str, mode: str = "linear") -> Trajectory:
    reader = csv.reader(io.StringIO(text))
    frames = []
    for lineno, row in enumerate(reader, start=1):
        if not row or row[0].strip().startswith("#"):
            continue
        if lineno == 1 and row[0].strip() == COLUMNS[0]:
            header = tuple(cell.strip() for cell in row)
            if header != COLUMNS:
                raise TrajectoryError(f"bad header, expected {','.join(COLUMNS)}", lineno)
            continue
        if len(row) != len(COLUMNS):
            raise TrajectoryError(
                f"expected {len(COLUMNS)} columns, got {len(row)}", lineno)
        try:
            values = [float(cell) for cell in row]
        except ValueError as exc:
            raise TrajectoryError(f"non-numeric cell in {row!r}", lineno) from exc
        frames.append(PoseFrame(time=values[0], violin=tuple(values[1:7]),
                                bow=tuple(values[7:13])))
    return Trajectory(frames, mode=mode)


def load_trajectory(path, mode: str = "linear") -> Trajectory:
    return parse_trajectory(Path(path).read_text(), mode=mode)
