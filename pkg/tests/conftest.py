import os
import sys
import random

import pytest

from waringlab.poly import MultiPoly

os.environ.setdefault("WARINGLAB_TOL", "1e-9")


def xs(nvars):
    return [MultiPoly.var(i, nvars) for i in range(nvars)]


def random_gl(rng: random.Random, size: int, bound: int = 3):
    """Random invertible integer matrix."""
    from waringlab import linalg
    while True:
        m = [[rng.randint(-bound, bound) for _ in range(size)] for _ in range(size)]
        if linalg.rank(m) == size:
            return m


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
