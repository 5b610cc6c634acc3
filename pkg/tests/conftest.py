import functools
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from polyglue import developer, fixtures  # noqa: E402


@functools.lru_cache(maxsize=None)
def developed(name, depth, base=0):
    """Developments are expensive and read-only in the tests, so share them."""
    return developer.develop(fixtures.fixture(name), base, depth)


@pytest.fixture
def rng():
    return random.Random(20261016)


def random_covectors(r, n, count, lo=-3, hi=3):
    out = []
    while len(out) < count:
        v = tuple(r.randint(lo, hi) for _ in range(n))
        if any(v):
            out.append(v)
    return out


_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None and rep.when == "call":
        _CRITERIA[mark.args[0]] = (rep.passed, mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        passed, summary = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {summary}")
