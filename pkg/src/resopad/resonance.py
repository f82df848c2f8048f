"""Resonance models: sets of (gain, center frequency, decay) filter specs.

A model characterises a sound as a bank of exponentially decaying
resonances.  Bandwidth is never stored: it is derived from the decay time
through B = ln(1000) / (pi * t60), so narrow bandwidth and long ring are
the same fact.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

DECAY_BANDWIDTH_CONSTANT = math.log(1000.0) / math.pi


class ModelFormatError(ValueError):
    """Raised for malformed resonance model text; carries the 1-based line."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def bandwidth_from_decay(decay_t60: float) -> float:
    """-3 dB bandwidth in Hz of a resonance that rings down 60 dB in t60 seconds."""
    if decay_t60 <= 0:
        raise ValueError(f"decay time must be positive, got {decay_t60}")
    return DECAY_BANDWIDTH_CONSTANT / decay_t60


def decay_from_bandwidth(bandwidth_hz: float) -> float:
    """Inverse of bandwidth_from_decay: t60 in seconds for a given bandwidth."""
    if bandwidth_hz <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    return DECAY_BANDWIDTH_CONSTANT / bandwidth_hz


@dataclass(frozen=True)
class Resonance:
    """One resonance: linear gain, center frequency in Hz, decay time (t60) in seconds."""

    center_freq: float
    gain: float
    decay_t60: float

    def __post_init__(self):
        if not (self.center_freq > 0 and math.isfinite(self.center_freq)):
            raise ValueError(f"center frequency must be positive, got {self.center_freq}")
        if not (self.gain >= 0 and math.isfinite(self.gain)):
            raise ValueError(f"gain must be >= 0, got {self.gain}")
        if not (self.decay_t60 > 0 and math.isfinite(self.decay_t60)):
            raise ValueError(f"decay time must be positive, got {self.decay_t60}")

    @property
    def bandwidth(self) -> float:
        return bandwidth_from_decay(self.decay_t60)


@dataclass(frozen=True)
class ResonanceModel:
    """An ordered set of resonances plus the reference pitch the model was built at.

    Transposition always rescales from the model's pristine (as-authored)
    resonances, so transposing away and back reproduces the original
    frequencies exactly instead of accumulating rounding error.
    """

    name: str
    resonances: tuple
    reference_f0: float
    _base: Optional[tuple] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.resonances:
            raise ValueError("model has no resonances")
        freqs = [r.center_freq for r in self.resonances]
        if any(b < a for a, b in zip(freqs, freqs[1:])):
            raise ValueError("resonances must be sorted ascending by center frequency")
        if not (self.reference_f0 > 0 and math.isfinite(self.reference_f0)):
            raise ValueError(f"reference f0 must be positive, got {self.reference_f0}")

    def __len__(self) -> int:
        return len(self.resonances)

    @property
    def param_dim(self) -> int:
        """Length of the flat (gain, freq, decay) parameter vector for this model."""
        return 3 * len(self.resonances)


def make_model(name: str, resonances, reference_f0: Optional[float] = None) -> ResonanceModel:
    """Build a validated model; resonances are sorted by frequency.

    reference_f0 defaults to the lowest center frequency.
    """
    rs = tuple(sorted(resonances, key=lambda r: r.center_freq))
    if not rs:
        raise ModelFormatError("empty model")
    if reference_f0 is None:
        reference_f0 = rs[0].center_freq
    return ResonanceModel(name=name, resonances=rs, reference_f0=reference_f0)


def parse_model(text: str, name: str = "model") -> ResonanceModel:
    """Parse the three-column model format.

    One resonance per line: `center_freq_hz gain_linear decay_t60_s`,
    whitespace separated.  `#` starts a comment.  An optional header line
    `@f0 <hz>` pins the reference pitch; otherwise the lowest center
    frequency is used.
    """
    resonances = []
    reference_f0 = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@f0"):
            parts = line.split()
            if len(parts) != 2:
                raise ModelFormatError("expected `@f0 <hz>`", lineno)
            try:
                reference_f0 = float(parts[1])
            except ValueError:
                raise ModelFormatError(f"bad @f0 value {parts[1]!r}", lineno) from None
            if reference_f0 <= 0:
                raise ModelFormatError(f"reference f0 must be positive, got {parts[1]}", lineno)
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ModelFormatError(f"expected 3 fields, got {len(parts)}", lineno)
        try:
            freq, gain, decay = (float(p) for p in parts)
        except ValueError:
            raise ModelFormatError(f"non-numeric field in {line!r}", lineno) from None
        if freq <= 0:
            raise ModelFormatError(f"center frequency must be positive, got {freq}", lineno)
        if gain < 0:
            raise ModelFormatError(f"gain must be >= 0, got {gain}", lineno)
        if decay <= 0:
            raise ModelFormatError(f"decay time must be positive, got {decay}", lineno)
        resonances.append(Resonance(freq, gain, decay))
    if not resonances:
        raise ModelFormatError("empty model")
    try:
        return make_model(name, resonances, reference_f0)
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None


def load_model(path, name: Optional[str] = None) -> ResonanceModel:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_model(text, name=name if name is not None else str(path))


def transpose_model(model: ResonanceModel, target_f0: float) -> ResonanceModel:
    """Rescale all center frequencies so the model's reference pitch lands on target_f0.

    Gains and decays are untouched.  Resonances pushed to or past Nyquist
    are kept here and dropped when the bank is realised at a sample rate.
    """
    if not (target_f0 > 0 and math.isfinite(target_f0)):
        raise ValueError(f"target f0 must be positive, got {target_f0}")
    base_res, base_ref = model._base if model._base is not None else (model.resonances, model.reference_f0)
    ratio = target_f0 / base_ref
    if ratio == 1.0:
        resonances = base_res
    else:
        resonances = tuple(
            Resonance(r.center_freq * ratio, r.gain, r.decay_t60) for r in base_res
        )
    return ResonanceModel(
        name=model.name,
        resonances=resonances,
        reference_f0=target_f0,
        _base=(base_res, base_ref),
    )
