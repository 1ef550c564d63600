import functools
import itertools

import pytest

from lvresilience.model import NondimParams
from lvresilience.separatrix import compute_separatrix

AB_VALUES = (1.5, 2.0, 4.0)
DELTA_VALUES = (0.3, 1.0, 3.0)
PARAM_GRID = [NondimParams(a, b, d)
              for a, b, d in itertools.product(AB_VALUES, AB_VALUES, DELTA_VALUES)]


@functools.lru_cache(maxsize=None)
def _curve(alpha, beta, delta):
    return compute_separatrix(NondimParams(alpha, beta, delta))


def curve_for(q):
    return _curve(q.alpha, q.beta, q.delta)


@pytest.fixture
def curve():
    return curve_for


def grid_id(q):
    return f"a{q.alpha:g}-b{q.beta:g}-d{q.delta:g}"


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
