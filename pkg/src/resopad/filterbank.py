"""Bank of two-pole resonators realising a resonance model at a sample rate.

Each resonance becomes the recurrence

    y[n] = s * x[n] + 2 r cos(w0) * y[n-1] - r^2 * y[n-2]

with w0 = 2 pi f / fs and r = exp(-pi B / fs), B derived from the decay
time.  The input scale s is solved so the magnitude response at w0 equals
the resonance gain exactly.  Parameter retargets never jump: coefficients
ramp linearly across the following block.
"""

import cmath
import math
import warnings

import numpy as np
from scipy.signal import lfilter

from .resonance import ResonanceModel, bandwidth_from_decay

# Retargets clamp frequencies into (0, Nyquist); the clamp stays this
# fraction inside both ends.
_FREQ_CLAMP_MARGIN = 1e-6


def design_resonator(center_freq: float, gain: float, decay_t60: float, sample_rate: float):
    """Coefficients (input_scale, coef_y1, coef_y2) for one resonator.

    coef_y1 = 2 r cos(w0) and coef_y2 = -r^2; input_scale is calibrated so
    a steady sinusoid at the center frequency comes out multiplied by
    exactly `gain`.
    """
    nyquist = sample_rate / 2.0
    if not (0.0 < center_freq < nyquist):
        raise ValueError(
            f"center frequency {center_freq} Hz outside (0, {nyquist}) at fs {sample_rate}"
        )
    bandwidth = bandwidth_from_decay(decay_t60)
    r = math.exp(-math.pi * bandwidth / sample_rate)
    w0 = 2.0 * math.pi * center_freq / sample_rate
    coef_y1 = 2.0 * r * math.cos(w0)
    coef_y2 = -(r * r)
    # |H(e^jw0)| = s / |1 - 2 r cos(w0) e^-jw0 + r^2 e^-2jw0|
    z1 = cmath.exp(-1j * w0)
    denom = 1.0 - coef_y1 * z1 - coef_y2 * z1 * z1
    input_scale = gain * abs(denom)
    return input_scale, coef_y1, coef_y2


class ResonatorBank:
    """Filter-bank state for one model: coefficients, two output delays, ramp targets.

    Single-owner object: the audio thread calls process_block; retargets
    arrive as values and take effect only across the next block.
    """

    def __init__(self, model: ResonanceModel, sample_rate: float):
        self.sample_rate = float(sample_rate)
        self.size = len(model)
        self.coef_in = np.zeros(self.size)
        self.coef_y1 = np.zeros(self.size)
        self.coef_y2 = np.zeros(self.size)
        self.y1 = np.zeros(self.size)
        self.y2 = np.zeros(self.size)
        self._target = None  # (coef_in, coef_y1, coef_y2) pending ramp
        self.dropped = 0
        nyquist = self.sample_rate / 2.0
        for i, res in enumerate(model.resonances):
            if res.center_freq >= nyquist:
                # above Nyquist: silenced for this realisation, not aliased
                self.dropped += 1
                continue
            self.coef_in[i], self.coef_y1[i], self.coef_y2[i] = design_resonator(
                res.center_freq, res.gain, res.decay_t60, self.sample_rate
            )

    def retarget(self, params) -> int:
        """Schedule a ramp to the coefficients for a flat [gain, freq, decay]* vector.

        Returns the number of frequency values that had to be clamped into
        (0, Nyquist).  The ramp spans exactly the next processed block.
        """
        params = np.asarray(params, dtype=float)
        if params.shape != (3 * self.size,):
            raise ValueError(
                f"parameter vector length {params.size} != {3 * self.size} "
                f"(3 x {self.size} resonances)"
            )
        gains = params[0::3]
        freqs = params[1::3]
        decays = params[2::3]
        nyquist = self.sample_rate / 2.0
        lo = nyquist * _FREQ_CLAMP_MARGIN
        hi = nyquist * (1.0 - _FREQ_CLAMP_MARGIN)
        clamped = int(np.count_nonzero((freqs < lo) | (freqs > hi)))
        if clamped:
            warnings.warn(
                f"{clamped} retarget frequencies clamped into (0, Nyquist)",
                RuntimeWarning,
                stacklevel=2,
            )
            freqs = np.clip(freqs, lo, hi)
        tgt_in = np.empty(self.size)
        tgt_y1 = np.empty(self.size)
        tgt_y2 = np.empty(self.size)
        for i in range(self.size):
            if decays[i] <= 0:
                raise ValueError(f"resonance {i}: decay must be positive, got {decays[i]}")
            if gains[i] < 0:
                raise ValueError(f"resonance {i}: gain must be >= 0, got {gains[i]}")
            tgt_in[i], tgt_y1[i], tgt_y2[i] = design_resonator(
                freqs[i], gains[i], decays[i], self.sample_rate
            )
        if (
            np.array_equal(tgt_in, self.coef_in)
            and np.array_equal(tgt_y1, self.coef_y1)
            and np.array_equal(tgt_y2, self.coef_y2)
        ):
            self._target = None
        else:
            self._target = (tgt_in, tgt_y1, tgt_y2)
        return clamped

    def process_block(self, block) -> np.ndarray:
        """Filter one block; output is the sum over all resonators.

        With a pending retarget the coefficients move linearly sample by
        sample and land on the target at the block's last sample.
        """
        x = np.asarray(block, dtype=float)
        if self._target is None:
            return self._process_steady(x)
        return self._process_ramp(x)

    def _process_steady(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros(len(x))
        for i in range(self.size):
            a1 = -self.coef_y1[i]
            a2 = -self.coef_y2[i]
            # direct-form II transposed initial conditions from the two
            # delayed outputs: zi = [-a1*y1 - a2*y2, -a2*y1]
            zi = np.array([-a1 * self.y1[i] - a2 * self.y2[i], -a2 * self.y1[i]])
            y, zf = lfilter([self.coef_in[i]], [1.0, a1, a2], x, zi=zi)
            out += y
            if a2 != 0.0:
                y1 = -zf[1] / a2
                y2 = -(zf[0] + a1 * y1) / a2
            else:
                y1 = y[-1] if len(y) else self.y1[i]
                y2 = y[-2] if len(y) > 1 else self.y1[i]
            self.y1[i] = y1
            self.y2[i] = y2
        return out

    def _process_ramp(self, x: np.ndarray) -> np.ndarray:
        tgt_in, tgt_y1, tgt_y2 = self._target
        n = len(x)
        out = np.zeros(n)
        cur_in, cur_y1, cur_y2 = self.coef_in, self.coef_y1, self.coef_y2
        d_in = tgt_in - cur_in
        d_y1 = tgt_y1 - cur_y1
        d_y2 = tgt_y2 - cur_y2
        y1, y2 = self.y1, self.y2
        for k in range(n):
            frac = (k + 1) / n
            y = (cur_in + frac * d_in) * x[k] + (cur_y1 + frac * d_y1) * y1 + (cur_y2 + frac * d_y2) * y2
            out[k] = y.sum()
            y2 = y1
            y1 = y
        self.y1, self.y2 = y1, y2
        self.coef_in, self.coef_y1, self.coef_y2 = tgt_in, tgt_y1, tgt_y2
        self._target = None
        return out

    def reset(self):
        self.y1[:] = 0.0
        self.y2[:] = 0.0
        self._target = None
