"""Mono WAV I/O: accept 16-bit PCM or 32-bit float, emit 32-bit float."""

import numpy as np
from scipy.io import wavfile


class AudioFileError(ValueError):
    pass


def read_wav(path):
    """Returns (sample_rate, float64 samples in [-1, 1])."""
    try:
        rate, data = wavfile.read(path)
    except (ValueError, OSError) as exc:
        raise AudioFileError(f"cannot read {path}: {exc}") from exc
    if data.ndim != 1:
        raise AudioFileError(f"{path}: expected mono, got {data.shape[1]} channels")
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise AudioFileError(f"{path}: unsupported sample format {data.dtype}")
    return int(rate), samples


def write_wav(path, sample_rate: int, samples):
    wavfile.write(path, int(sample_rate), np.asarray(samples, dtype=np.float32))
