"""Pitch / amplitude / spectral-centroid tracking.

Spectral peaks come from parabolic interpolation on the log-magnitude FFT;
f0 is the candidate (peaks and their integer subdivisions) that captures the
most partial energy within a +-3% harmonic tolerance; the centroid is the
energy-weighted mean of the matched partials only.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .levels import AmplitudeFollower

WINDOW_SIZE = 4096
HOP_SIZE = 512
PEAK_THRESHOLD_DB = -60.0
F_MIN = 60.0
F_MAX = 2000.0
HARMONIC_TOLERANCE = 0.03  # about half a semitone
ENERGY_FLOOR = 1e-9
MIN_MATCHED_PARTIALS = 2
CANDIDATE_SOURCE_PEAKS = 32  # noisy frames can hold hundreds of peaks; only the
                             # strongest plausibly seed an f0, and an unbounded
                             # candidate set breaks the real-time budget

_LOG_FLOOR = 1e-30


@dataclass(frozen=True)
class SpectralPeak:
    frequency: float  # Hz
    energy: float  # squared linear magnitude


@dataclass(frozen=True)
class FeatureFrame:
    time: float
    f0: Optional[float]
    amplitude: float
    centroid: Optional[float]
    confidence: float


def analyze_frame(samples: np.ndarray, sample_rate: float,
                  threshold_db: float = PEAK_THRESHOLD_DB) -> List[SpectralPeak]:
    """Hann-windowed FFT peak picking with parabolic refinement.

    Local maxima below threshold_db relative to the frame maximum are
    discarded; silence yields an empty list.
    """
    n = len(samples)
    window = np.hanning(n)
    spectrum = np.fft.rfft(np.asarray(samples, dtype=np.float64) * window)
    mag = np.abs(spectrum)
    peak_mag = mag.max()
    if peak_mag <= 0.0:
        return []
    log_mag = np.log(np.maximum(mag, _LOG_FLOOR))
    threshold = np.log(peak_mag) + threshold_db * np.log(10.0) / 20.0
    peaks = []
    for k in range(1, len(mag) - 1):
        b = log_mag[k]
        if b < threshold:
            continue
        a, c = log_mag[k - 1], log_mag[k + 1]
        if not (b > a and b > c):
            continue
        denom = a - 2.0 * b + c
        delta = 0.0 if denom == 0.0 else 0.5 * (a - c) / denom
        freq = (k + delta) * sample_rate / n
        interp_log = b - 0.25 * (a - c) * delta
        if 0.0 < freq < sample_rate / 2.0:
            peaks.append(SpectralPeak(frequency=float(freq),
                                      energy=float(np.exp(2.0 * interp_log))))
    return peaks


def _matched_partials(candidate: float, peaks: List[SpectralPeak]) -> List[SpectralPeak]:
    matched = []
    for peak in peaks:
        multiple = round(peak.frequency / candidate)
        if multiple < 1:
            continue
        if abs(peak.frequency - multiple * candidate) <= HARMONIC_TOLERANCE * multiple * candidate:
            matched.append(peak)
    return matched


def estimate_f0(peaks: List[SpectralPeak],
                f_min: float = F_MIN, f_max: float = F_MAX
                ) -> Tuple[Optional[float], float, List[SpectralPeak]]:
    """Harmonic matching over peak subdivisions.

    Returns (f0 or None, confidence, matched partials); ties between equal
    matched-energy candidates go to the highest frequency so a full harmonic
    stack reports its true fundamental, not a subharmonic.
    """
    total = sum(p.energy for p in peaks)
    if not peaks or total < ENERGY_FLOOR:
        return None, 0.0, []
    sources = sorted(peaks, key=lambda p: p.energy, reverse=True)[:CANDIDATE_SOURCE_PEAKS]
    candidates = set()
    for peak in sources:
        lo = max(1, math.ceil(peak.frequency / f_max))
        hi = math.floor(peak.frequency / f_min)
        for divisor in range(lo, hi + 1):
            candidate = peak.frequency / divisor
            if f_min <= candidate <= f_max:
                candidates.add(round(candidate, 6))
    if not candidates:
        return None, 0.0, []
    # score every candidate against every peak in one broadcast
    cands = np.array(sorted(candidates))
    freqs = np.array([p.frequency for p in peaks])
    energies = np.array([p.energy for p in peaks])
    multiple = np.rint(freqs[None, :] / cands[:, None])
    hit = ((multiple >= 1.0)
           & (np.abs(freqs[None, :] - multiple * cands[:, None])
              <= HARMONIC_TOLERANCE * multiple * cands[:, None]))
    counts = hit.sum(axis=1)
    matched_energy = np.where(hit, energies[None, :], 0.0).sum(axis=1)
    matched_energy[counts < MIN_MATCHED_PARTIALS] = -1.0
    if matched_energy.max() < 0.0:
        return None, 0.0, []
    # ties go to the highest candidate; cands is sorted so argmax on the
    # reversed array finds the last (largest) maximiser
    best_idx = len(cands) - 1 - int(np.argmax(matched_energy[::-1]))
    best = float(cands[best_idx])
    best_matched = _matched_partials(best, peaks)
    return best, sum(p.energy for p in best_matched) / total, best_matched


def spectral_centroid(partials: List[SpectralPeak]) -> Optional[float]:
    """Energy-weighted mean frequency; None on empty or zero-energy input."""
    total = sum(p.energy for p in partials)
    if not partials or total <= 0.0:
        return None
    return sum(p.frequency * p.energy for p in partials) / total


class FeatureTracker:
    """Streaming tracker: one FeatureFrame per hop, window-length latency.

    Frames are timestamped at the last sample of their analysis window;
    amplitude is the trailing-window RMS at that instant.
    """

    def __init__(self, sample_rate: float, lowest_freq: float = 130.0,
                 window_size: int = WINDOW_SIZE, hop_size: int = HOP_SIZE):
        self.sample_rate = float(sample_rate)
        self.window_size = int(window_size)
        self.hop_size = int(hop_size)
        self.follower = AmplitudeFollower(self.sample_rate, lowest_freq)
        self._buffer = np.zeros(0, dtype=np.float64)
        self._consumed = 0  # samples dropped off the front of the buffer
        self._fed = 0  # samples handed to the follower so far

    def process(self, block: np.ndarray) -> List[FeatureFrame]:
        self._buffer = np.concatenate([self._buffer, np.asarray(block, dtype=np.float64)])
        frames = []
        while len(self._buffer) >= self.window_size:
            window = self._buffer[:self.window_size]
            end = self._consumed + self.window_size
            if end > self._fed:  # catch the follower up to this frame's last sample
                self.follower.follow(self._buffer[self._fed - self._consumed:
                                                  end - self._consumed])
                self._fed = end
            peaks = analyze_frame(window, self.sample_rate)
            f0, confidence, matched = estimate_f0(peaks)
            centroid = spectral_centroid(matched) if f0 is not None else None
            frames.append(FeatureFrame(time=end / self.sample_rate, f0=f0,
                                       amplitude=self.follower.level,
                                       centroid=centroid, confidence=confidence))
            self._buffer = self._buffer[self.hop_size:]
            self._consumed += self.hop_size
        return frames

    def reset(self):
        self._buffer = np.zeros(0, dtype=np.float64)
        self._consumed = 0
        self._fed = 0
        self.follower.reset()
