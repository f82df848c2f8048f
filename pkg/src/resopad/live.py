"""Live session core, transport-free.

Drives the block pipeline from a looped audio file (or silence) and a looped
trajectory (or injected pose input), publishes telemetry into the parameter
store, and owns the subscription server.  Transports call advance_to() and
control_tick() from a single loop; nothing here touches sockets, so the same
object runs under a simulated clock in tests.
"""

import json
from typing import List, Optional, Tuple

import numpy as np

from .config import EngineConfig
from .engine import BlockResult, EngineCore
from .gesture import PoseFrame
from .osc import ControlMessage
from .protocol import (PARAMS_ADDRESS, ControlServer, ParameterStore)
from .resonance import ResonanceModel
from .simplex import SimplicialMap
from .trajectory import Trajectory

VIOLIN_INPUT_NAMES = ("X", "Y", "Z", "Yaw", "Pitch2", "Roll")
BOW_INPUT_NAMES = ("BowX", "BowY", "BowZ", "BowYaw", "BowPitch", "BowRoll")


class LiveEngine:
    def __init__(self, model: ResonanceModel, mapping: SimplicialMap,
                 config: EngineConfig, trajectory: Optional[Trajectory] = None,
                 audio: Optional[np.ndarray] = None):
        self.core = EngineCore(model, mapping, config)
        self.config = config
        self.trajectory = trajectory
        self.audio = None if audio is None else np.asarray(audio, dtype=np.float64)
        self.store = ParameterStore()
        self.server = ControlServer(self.store, map_provider=self.map_json,
                                    input_sink=self._on_input)
        self.server.vector_providers[PARAMS_ADDRESS] = self._current_params
        self._overrides: "dict[str, float]" = {}
        self._params: Tuple[float, ...] = (0.0,) * model.param_dim
        self._audio_pos = 0

    # -- inbound ------------------------------------------------------------

    def handle_message(self, endpoint, msg: ControlMessage, now_ms: float):
        return self.server.handle_message(endpoint, msg, now_ms)

    def _on_input(self, name: str, args: tuple):
        """Pose injection: either one named axis or a whole 12-float pose."""
        if name == "Pose" and len(args) == 12:
            for key, value in zip(VIOLIN_INPUT_NAMES + BOW_INPUT_NAMES, args):
                self._overrides[key] = float(value)
            return
        if name in VIOLIN_INPUT_NAMES + BOW_INPUT_NAMES and len(args) == 1 \
                and isinstance(args[0], (int, float)):
            self._overrides[name] = float(args[0])

    # -- clock --------------------------------------------------------------

    def advance_to(self, now_ms: float) -> List[BlockResult]:
        """Process audio blocks until engine time catches up with the clock."""
        results = []
        while self.core.time * 1000.0 < now_ms:
            results.append(self._process_one_block())
        return results

    def control_tick(self, now_ms: float):
        return self.server.tick(now_ms)

    # -- internals ----------------------------------------------------------

    def _pose_at(self, t: float) -> PoseFrame:
        if self.trajectory is not None:
            duration = self.trajectory.duration
            loop_t = t % duration if duration > 0 else 0.0
            base = self.trajectory.sample(loop_t)
            violin, bow = list(base.violin), list(base.bow)
        else:
            violin = [0.0, 0.0, self.config.normal_altitude, 0.0, 0.0, 0.0]
            bow = [0.0] * 6
        for i, name in enumerate(VIOLIN_INPUT_NAMES):
            if name in self._overrides:
                violin[i] = self._overrides[name]
        for i, name in enumerate(BOW_INPUT_NAMES):
            if name in self._overrides:
                bow[i] = self._overrides[name]
        return PoseFrame(time=t, violin=tuple(violin), bow=tuple(bow))

    def _next_audio_block(self) -> np.ndarray:
        n = self.config.block_size
        if self.audio is None or len(self.audio) == 0:
            return np.zeros(n)
        idx = (self._audio_pos + np.arange(n)) % len(self.audio)
        self._audio_pos = (self._audio_pos + n) % len(self.audio)
        return self.audio[idx]

    def _process_one_block(self) -> BlockResult:
        pose = self._pose_at(self.core.time)
        result = self.core.process_block(self._next_audio_block(), pose)
        self._publish(pose, result)
        return result

    def _publish(self, pose: PoseFrame, result: BlockResult):
        store = self.store
        store.set("Amplitude", self.core.follower_in.level)
        feats = self.core.last_features
        # 0.0 is the wire sentinel for "absent": real pitch starts at 60 Hz
        store.set("Pitch", 0.0 if feats is None or feats.f0 is None else feats.f0)
        store.set("Centroid",
                  0.0 if feats is None or feats.centroid is None else feats.centroid)
        for name, value in zip(VIOLIN_INPUT_NAMES, pose.violin):
            store.set(name, value)
        for name, value in zip(BOW_INPUT_NAMES, pose.bow):
            store.set(name, value)
        self._params = tuple(float(v) for v in result.params)

    def _current_params(self) -> Tuple[float, ...]:
        return self._params

    def map_json(self) -> str:
        return json.dumps(self.core.map.mesh_dict())
