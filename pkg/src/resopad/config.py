"""Engine configuration: a flat key = value text file.

Unknown keys are rejected so typos fail loudly; '#' starts a comment.
"""

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .protocol import DEFAULT_TICK_MS, TICK_RANGE_MS


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass
class EngineConfig:
    sample_rate: float = 44100.0
    block_size: int = 256
    control_tick_ms: int = DEFAULT_TICK_MS
    model_path: str = ""
    map_path: str = ""
    lowest_freq_hz: float = 130.0
    min_bandwidth_hz: float = 5.0
    noise_mix: float = 0.0
    normal_altitude: float = 1.0
    floor_altitude: float = 0.0
    reset_margin: float = 0.02
    octave_threshold: float = 0.2
    octave_hysteresis: float = 0.05
    altitude_decay_gain: float = 1.0
    trajectory_mode: str = "linear"  # or "step"
    osc_port: int = 5505
    bridge_port: int = 5506
    host: str = "127.0.0.1"
    seed: int = 0
    trajectory_path: str = ""
    audio_path: str = ""

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.sample_rate <= 0:
            raise ConfigError("sample_rate must be positive")
        if self.block_size < 16:
            raise ConfigError(f"block_size must be >= 16, got {self.block_size}")
        lo, hi = TICK_RANGE_MS
        if not lo <= self.control_tick_ms <= hi:
            raise ConfigError(
                f"control_tick_ms must be in [{lo}, {hi}], got {self.control_tick_ms}")
        if self.trajectory_mode not in ("linear", "step"):
            raise ConfigError(f"trajectory_mode must be linear or step, got "
                              f"{self.trajectory_mode!r}")
        if not self.floor_altitude < self.normal_altitude:
            raise ConfigError("floor_altitude must be below normal_altitude")
        for name in ("model_path", "map_path", "trajectory_path", "audio_path"):
            value = getattr(self, name)
            if value and not Path(value).exists():
                raise ConfigError(f"{name} does not exist: {value}")


_FIELD_TYPES = {f.name: (f.type if isinstance(f.type, str) else f.type.__name__)
                for f in fields(EngineConfig)}


def parse_config(text: str) -> EngineConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key = value, got {line!r}", lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown key {key!r}", lineno)
        kind = _FIELD_TYPES[key]
        try:
            if kind == "int":
                values[key] = int(value)
            elif kind == "float":
                values[key] = float(value)
            else:
                values[key] = value
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r}", lineno) from exc
    try:
        return EngineConfig(**values)
    except ConfigError:
        raise
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> EngineConfig:
    return parse_config(Path(path).read_text())
