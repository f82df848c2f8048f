import math
import warnings

import numpy as np
import pytest

from resopad.filterbank import ResonatorBank, design_resonator
from resopad.resonance import Resonance, make_model

FS = 44100.0


def reference_filter(coeffs, x):
    """Direct recurrence y[n] = s x[n] + c1 y[n-1] + c2 y[n-2], one resonator."""
    s, c1, c2 = coeffs
    y = np.zeros(len(x))
    y1 = y2 = 0.0
    for i, xi in enumerate(x):
        yi = s * xi + c1 * y1 + c2 * y2
        y2, y1 = y1, yi
        y[i] = yi
    return y


def test_design_pole_radius_and_angle():
    s, c1, c2 = design_resonator(1000.0, 1.0, 0.5, FS)
    bandwidth = math.log(1000.0) / (math.pi * 0.5)
    r = math.exp(-math.pi * bandwidth / FS)
    w0 = 2 * math.pi * 1000.0 / FS
    assert c1 == pytest.approx(2 * r * math.cos(w0), abs=1e-15)
    assert c2 == pytest.approx(-r * r, abs=1e-15)


def test_design_rejects_out_of_range():
    with pytest.raises(ValueError):
        design_resonator(FS / 2, 1.0, 0.5, FS)
    with pytest.raises(ValueError):
        design_resonator(0.0, 1.0, 0.5, FS)


def test_peak_gain_calibration():
    # steady sinusoid at the center frequency settles to the requested gain
    for gain in (0.25, 1.0, 2.0):
        model = make_model("g", [Resonance(1000.0, gain, 0.5)])
        bank = ResonatorBank(model, FS)
        n = int(FS)
        x = np.sin(2 * np.pi * 1000.0 * np.arange(n) / FS)
        y = bank.process_block(x)
        measured = np.max(np.abs(y[n // 2:]))
        assert measured == pytest.approx(gain, rel=1e-3)


def test_matches_reference_recurrence_across_blocks(small_model):
    bank = ResonatorBank(small_model, FS)
    rng = np.random.default_rng(7)
    x = rng.standard_normal(768)
    got = np.concatenate([bank.process_block(x[:256]),
                          bank.process_block(x[256:512]),
                          bank.process_block(x[512:])])
    want = np.zeros(len(x))
    for r in small_model.resonances:
        want += reference_filter(
            design_resonator(r.center_freq, r.gain, r.decay_t60, FS), x)
    np.testing.assert_allclose(got, want, atol=1e-10)


def test_impulse_decay_hits_minus_60_db():
    t60 = 0.5
    model = make_model("d", [Resonance(440.0, 1.0, t60)])
    bank = ResonatorBank(model, FS)
    x = np.zeros(int(FS * t60 * 1.5))
    x[0] = 1.0
    y = bank.process_block(x)
    peak = np.max(np.abs(y))
    above = np.nonzero(np.abs(y) >= peak * 1e-3)[0]
    measured = above[-1] / FS
    assert abs(measured - t60) / t60 < 0.05


def test_retarget_ramp_lands_on_target(small_model):
    bank = ResonatorBank(small_model, FS)
    target = np.array([0.5, 300.0, 0.2, 0.9, 600.0, 0.6])
    bank.retarget(target)
    assert bank._target is not None
    bank.process_block(np.zeros(128))
    # after the ramp block the active coefficients are exactly the target design
    for i, (gain, freq, decay) in enumerate(target.reshape(-1, 3)):
        s, c1, c2 = design_resonator(freq, gain, decay, FS)
        assert bank.coef_in[i] == s
        assert bank.coef_y1[i] == c1
        assert bank.coef_y2[i] == c2
    assert bank._target is None


def test_retarget_identical_params_is_noop(small_model):
    bank = ResonatorBank(small_model, FS)
    current = np.array([1.0, 220.0, 0.5, 0.8, 440.0, 0.3])
    bank.retarget(current)
    assert bank._target is None


def test_retarget_ramp_is_continuous(small_model):
    # the ramped block should not jump: sample-to-sample step stays bounded
    bank = ResonatorBank(small_model, FS)
    x = np.sin(2 * np.pi * 220.0 * np.arange(1024) / FS)
    y_before = bank.process_block(x[:512])
    bank.retarget(np.array([1.0, 225.0, 0.5, 0.8, 445.0, 0.3]))
    y_ramp = bank.process_block(x[512:])
    joined = np.concatenate([y_before, y_ramp])
    steps = np.abs(np.diff(joined))
    assert steps.max() < 0.2  # a hard coefficient swap spikes well above this


def test_retarget_clamps_bad_frequencies(small_model):
    bank = ResonatorBank(small_model, FS)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        clamped = bank.retarget(np.array([1.0, 30000.0, 0.5, 0.8, 440.0, 0.3]))
    assert clamped == 1
    assert any("clamp" in str(w.message).lower() for w in caught)


def test_retarget_rejects_bad_shapes_and_values(small_model):
    bank = ResonatorBank(small_model, FS)
    with pytest.raises(ValueError):
        bank.retarget(np.zeros(5))
    with pytest.raises(ValueError):
        bank.retarget(np.array([1.0, 220.0, -0.5, 0.8, 440.0, 0.3]))
    with pytest.raises(ValueError):
        bank.retarget(np.array([-1.0, 220.0, 0.5, 0.8, 440.0, 0.3]))


def test_nyquist_resonances_dropped_at_realization():
    model = make_model("n", [Resonance(440.0, 1.0, 0.5),
                             Resonance(30000.0, 1.0, 0.5)])
    bank = ResonatorBank(model, FS)
    assert bank.dropped == 1
    # the dropped slot stays silent
    x = np.zeros(256)
    x[0] = 1.0
    y = bank.process_block(x)
    solo = ResonatorBank(make_model("s", [Resonance(440.0, 1.0, 0.5)]), FS)
    np.testing.assert_allclose(y, solo.process_block(x), atol=1e-15)


def test_reset_clears_state(small_model):
    bank = ResonatorBank(small_model, FS)
    x = np.random.default_rng(0).standard_normal(256)
    first = bank.process_block(x)
    bank.reset()
    again = bank.process_block(x)
    np.testing.assert_array_equal(first, again)
