"""Loudness plumbing: amplitude following, output normalization, noise injection.

Keeps the processed output tracking the dry input level, so the instrument
gets louder only when the player does.  The follower window always covers
at least one full period of the lowest playable frequency.
"""

import math

import numpy as np

from .resonance import ResonanceModel, bandwidth_from_decay, decay_from_bandwidth, Resonance

DEFAULT_LOWEST_FREQ_HZ = 130.0
DEFAULT_SMOOTHING_S = 0.010
DEFAULT_LEVEL_FLOOR = 1e-6
DEFAULT_MIN_BANDWIDTH_HZ = 5.0
DEFAULT_NOISE_MIX = 0.1


class AmplitudeFollower:
    """Trailing-window RMS over at least one period of the lowest frequency."""

    def __init__(self, sample_rate: float, lowest_freq_hz: float = DEFAULT_LOWEST_FREQ_HZ):
        if lowest_freq_hz <= 0:
            raise ValueError(f"lowest frequency must be positive, got {lowest_freq_hz}")
        self.sample_rate = float(sample_rate)
        self.lowest_freq_hz = float(lowest_freq_hz)
        self.window_len = math.ceil(sample_rate / lowest_freq_hz)
        self._squares = np.zeros(self.window_len)
        self._pos = 0
        self.level = 0.0

    def follow(self, block) -> float:
        """Consume one block, return the RMS over the trailing window."""
        x = np.asarray(block, dtype=float)
        sq = x * x
        n = len(sq)
        if n >= self.window_len:
            self._squares[:] = sq[n - self.window_len:]
            self._pos = 0
        else:
            end = self._pos + n
            if end <= self.window_len:
                self._squares[self._pos:end] = sq
            else:
                split = self.window_len - self._pos
                self._squares[self._pos:] = sq[:split]
                self._squares[:end - self.window_len] = sq[split:]
            self._pos = end % self.window_len
        self.level = math.sqrt(max(self._squares.sum(), 0.0) / self.window_len)
        return self.level

    def reset(self):
        self._squares[:] = 0.0
        self._pos = 0
        self.level = 0.0


class Normalizer:
    """First-order smoothed gain that steers output level toward input level."""

    def __init__(
        self,
        smoothing_s: float = DEFAULT_SMOOTHING_S,
        floor: float = DEFAULT_LEVEL_FLOOR,
        initial_gain: float = 1.0,
    ):
        if smoothing_s <= 0:
            raise ValueError(f"smoothing time constant must be positive, got {smoothing_s}")
        if floor <= 0:
            raise ValueError(f"level floor must be positive, got {floor}")
        self.smoothing_s = float(smoothing_s)
        self.floor = float(floor)
        self.gain = float(initial_gain)

    def normalize(self, input_level: float, output_level: float, dt: float) -> float:
        """Advance the smoothed gain by dt toward input_level / max(output_level, floor)."""
        target = input_level / max(output_level, self.floor)
        alpha = 1.0 - math.exp(-dt / self.smoothing_s)
        self.gain += (target - self.gain) * alpha
        return self.gain


def inject_noise(block, input_level: float, mix: float, rng: np.random.Generator) -> np.ndarray:
    """Add uniform white noise in [-1, 1] scaled by mix * input_level.

    A zero scale leaves the block untouched and draws nothing from the
    generator, so silence stays bit-identical.
    """
    if mix < 0:
        raise ValueError(f"noise mix must be >= 0, got {mix}")
    x = np.asarray(block, dtype=float)
    scale = mix * input_level
    if scale == 0.0:
        return x
    noise = rng.uniform(-1.0, 1.0, size=len(x))
    return x + scale * noise


def clamp_bandwidths(model: ResonanceModel, min_bandwidth_hz: float = DEFAULT_MIN_BANDWIDTH_HZ):
    """Widen any resonance narrower than min_bandwidth_hz by shortening its decay.

    High-Q resonances blow up the gain staging when a partial lines up
    with them, so they are disallowed.  Returns (model, clamped_count).
    """
    if min_bandwidth_hz <= 0:
        raise ValueError(f"minimum bandwidth must be positive, got {min_bandwidth_hz}")
    max_decay = decay_from_bandwidth(min_bandwidth_hz)
    clamped = 0
    out = []
    for r in model.resonances:
        if bandwidth_from_decay(r.decay_t60) < min_bandwidth_hz:
            out.append(Resonance(r.center_freq, r.gain, max_decay))
            clamped += 1
        else:
            out.append(r)
    if clamped == 0:
        return model, 0
    return (
        ResonanceModel(name=model.name, resonances=tuple(out), reference_f0=model.reference_f0),
        clamped,
    )
