import numpy as np
import pytest

from resopad.resonance import Resonance, make_model
from resopad.simplex import build_map

FS = 44100.0

# acceptance tests report one line per criterion via the terminal summary
ACCEPTANCE_RESULTS = []


def record_acceptance(name: str, passed: bool, detail: str):
    ACCEPTANCE_RESULTS.append((name, passed, detail))
    assert passed, f"{name}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status}  {name}: {detail}")

MODEL_TEXT = """\
# five resonances, frequency-sorted
@f0 130.0
220.0  1.00  0.80
330.0  0.60  0.50
440.0  0.90  0.40
880.0  0.40  0.25
1760.0 0.20  0.15
"""

MAP_TEXT = """\
# 4 vertices over a 2-resonance model (n = 6)
n 6
0.0 0.0 : 1.0 220.0 0.5  0.8 440.0 0.3
1.0 0.0 : 1.1 220.0 0.5  0.8 440.0 0.3
1.0 1.0 : 1.2 220.0 0.5  0.8 440.0 0.3
0.0 1.0 : 1.3 220.0 0.5  0.8 440.0 0.3
"""

MODEL2_TEXT = "220.0 1.0 0.5\n440.0 0.8 0.3\n"

MAP6_TEXT = """n 6
0.0 0.0 : 1.0 220.0 0.5  0.8 440.0 0.3
1.0 0.0 : 1.1 230.0 0.4  0.7 450.0 0.35
1.0 1.0 : 1.2 240.0 0.6  0.6 460.0 0.25
0.0 1.0 : 1.3 250.0 0.45 0.9 470.0 0.3
"""


@pytest.fixture
def model_map_files(tmp_path):
    """Matching 2-resonance model + 6-dim square map written to disk."""
    model_path = tmp_path / "model.txt"
    map_path = tmp_path / "map.txt"
    model_path.write_text(MODEL2_TEXT)
    map_path.write_text(MAP6_TEXT)
    return str(model_path), str(map_path)


@pytest.fixture
def small_model():
    return make_model("small", [Resonance(220.0, 1.0, 0.5),
                                Resonance(440.0, 0.8, 0.3)])


@pytest.fixture
def square_points():
    return [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


@pytest.fixture
def square_map(square_points):
    rows = [
        [1.0, 220.0, 0.5, 0.8, 440.0, 0.3],
        [1.1, 230.0, 0.4, 0.7, 450.0, 0.35],
        [1.2, 240.0, 0.6, 0.6, 460.0, 0.25],
        [1.3, 250.0, 0.45, 0.9, 470.0, 0.3],
    ]
    return build_map(square_points, rows)


def sine(freq, seconds, fs=FS, amp=1.0):
    return amp * np.sin(2 * np.pi * freq * np.arange(int(seconds * fs)) / fs)
