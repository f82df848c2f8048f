"""Composition root: block pipeline shared by offline render and live serving.

Per block: sample the trajectory, update gesture state, interpolate the map
at the violin's (x, y), apply octave/altitude bindings, retarget the bank,
inject excitation noise, filter, and normalize levels.  Everything is
deterministic given the seed.
"""

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .audiofiles import read_wav, write_wav
from .config import EngineConfig
from .filterbank import ResonatorBank
from .gesture import AltitudeTracker, GestureState, OctaveToggle, PoseFrame
from .levels import AmplitudeFollower, Normalizer, clamp_bandwidths, inject_noise
from .resonance import ResonanceModel, load_model
from .simplex import SimplicialMap, load_map
from .tracker import FeatureFrame, FeatureTracker
from .trajectory import load_trajectory

LOG_VERSION = "v1"


class DimensionContractError(ValueError):
    """Map codomain does not match 3 x model resonance count."""

    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"map codomain dimension {got} != 3 x resonance count = {expected}")


def check_dimensions(model: ResonanceModel, mapping: SimplicialMap):
    if mapping.dim != model.param_dim:
        raise DimensionContractError(model.param_dim, mapping.dim)


@dataclass
class BlockResult:
    time: float
    position: "tuple[float, float]"
    params: np.ndarray  # active (post-binding) parameter vector
    output: np.ndarray
    gesture: dict
    features: List[FeatureFrame]
    clamped: int


class EngineCore:
    """One block at a time: pose in, filtered audio + telemetry out."""

    def __init__(self, model: ResonanceModel, mapping: SimplicialMap,
                 config: EngineConfig):
        check_dimensions(model, mapping)
        self.model = model
        self.map = mapping
        self.config = config
        fs = config.sample_rate
        self.bank = ResonatorBank(model, fs)
        self.tracker = FeatureTracker(fs, lowest_freq=config.lowest_freq_hz)
        self.follower_in = AmplitudeFollower(fs, config.lowest_freq_hz)
        self.follower_out = AmplitudeFollower(fs, config.lowest_freq_hz)
        self.normalizer = Normalizer()
        self.gesture = GestureState(
            AltitudeTracker(config.normal_altitude, config.floor_altitude,
                            config.reset_margin),
            OctaveToggle(config.octave_threshold, config.octave_hysteresis))
        self.rng = np.random.default_rng(config.seed)
        self._sample_pos = 0
        self._last_features: Optional[FeatureFrame] = None

    @property
    def time(self) -> float:
        return self._sample_pos / self.config.sample_rate

    def active_params(self, pose: PoseFrame, gesture: dict) -> np.ndarray:
        """Map output with octave and altitude bindings applied."""
        params = np.array(self.map.interpolate((pose.violin[0], pose.violin[1])),
                          dtype=np.float64)
        if gesture["octave_on"]:
            params[1::3] *= 2.0
        decay_scale = 1.0 + self.config.altitude_decay_gain * gesture["altitude_control"]
        params[2::3] *= decay_scale
        return params

    def process_block(self, block: np.ndarray, pose: PoseFrame) -> BlockResult:
        block = np.asarray(block, dtype=np.float64)
        t = self.time
        gesture = self.gesture.update(pose)
        params = self.active_params(pose, gesture)
        clamped = self.bank.retarget(params)
        self.follower_in.follow(block)
        features = self.tracker.process(block)
        if features:
            self._last_features = features[-1]
        excitation = inject_noise(block, self.follower_in.level,
                                  self.config.noise_mix, self.rng)
        filtered = self.bank.process_block(excitation)
        self.follower_out.follow(filtered)
        gain = self.normalizer.normalize(self.follower_in.level,
                                         self.follower_out.level,
                                         len(block) / self.config.sample_rate)
        self._sample_pos += len(block)
        return BlockResult(time=t, position=(pose.violin[0], pose.violin[1]),
                           params=params, output=filtered * gain,
                           gesture=gesture, features=features, clamped=clamped)

    @property
    def last_features(self) -> Optional[FeatureFrame]:
        return self._last_features


# -- parameter/feature log (CSV, versioned) ---------------------------------

def log_header(param_dim: int) -> str:
    cols = ["time_s", "f0_hz", "amplitude", "centroid_hz", "pos_x", "pos_y"]
    cols += [f"p{i}" for i in range(param_dim)]
    return f"# resopad-log {LOG_VERSION}\n" + ",".join(cols)


def log_row(result: BlockResult, features: Optional[FeatureFrame]) -> str:
    f0 = "" if features is None or features.f0 is None else repr(float(features.f0))
    centroid = ("" if features is None or features.centroid is None
                else repr(float(features.centroid)))
    amplitude = repr(float(features.amplitude)) if features is not None else repr(0.0)
    cells = [repr(float(result.time)), f0, amplitude, centroid,
             repr(float(result.position[0])), repr(float(result.position[1]))]
    cells += [repr(float(v)) for v in result.params]
    return ",".join(cells)


def render_offline(input_path, trajectory_path, model_path, map_path,
                   output_path, config: Optional[EngineConfig] = None,
                   seed: Optional[int] = None, log_path=None) -> dict:
    """Deterministic file-to-file render; returns summary stats."""
    config = config or EngineConfig()
    if seed is not None:
        config.seed = seed
    rate, samples = read_wav(input_path)
    config.sample_rate = float(rate)
    model = load_model(model_path)
    mapping = load_map(map_path)
    trajectory = load_trajectory(trajectory_path, mode=config.trajectory_mode)
    core = EngineCore(model, mapping, config)
    n = len(samples)
    block = config.block_size
    out = np.zeros(n, dtype=np.float64)
    log_lines = [log_header(model.param_dim)]
    clamped_total = 0
    for start in range(0, n, block):
        chunk = samples[start:start + block]
        pose = trajectory.sample(start / config.sample_rate)
        result = core.process_block(chunk, pose)
        out[start:start + len(chunk)] = result.output
        log_lines.append(log_row(result, core.last_features))
        clamped_total += result.clamped
    write_wav(output_path, rate, out)
    if log_path is not None:
        with open(log_path, "w") as fh:
            fh.write("\n".join(log_lines) + "\n")
    in_rms = float(np.sqrt(np.mean(samples ** 2))) if n else 0.0
    out_rms = float(np.sqrt(np.mean(out ** 2))) if n else 0.0
    return {
        "samples": n,
        "blocks": math.ceil(n / block) if n else 0,
        "dropped_resonances": core.bank.dropped,
        "clamped_frequencies": clamped_total,
        "input_rms": in_rms,
        "output_rms": out_rms,
    }


def validate_files(model_path, map_path, min_bandwidth_hz: float = 5.0) -> dict:
    """Load + cross-check a model/map pair; collects problems instead of raising."""
    report = {"ok": True, "messages": []}
    model = mapping = None
    try:
        model = load_model(model_path)
        report["resonance_count"] = len(model.resonances)
        report["param_dim"] = model.param_dim
        _, clamped = clamp_bandwidths(model, min_bandwidth_hz)
        report["clamped_bandwidths"] = clamped
        if clamped:
            report["messages"].append(
                f"{clamped} resonance(s) below {min_bandwidth_hz} Hz bandwidth "
                f"will be clamped")
    except Exception as exc:
        report["ok"] = False
        report["messages"].append(f"model: {exc}")
    try:
        mapping = load_map(map_path)
        report["map_dim"] = mapping.dim
        report["map_points"] = len(mapping.domain)
        report["map_triangles"] = len(mapping.triangles)
    except Exception as exc:
        report["ok"] = False
        report["messages"].append(f"map: {exc}")
    if model is not None and mapping is not None:
        try:
            check_dimensions(model, mapping)
        except DimensionContractError as exc:
            report["ok"] = False
            report["messages"].append(str(exc))
    return report
