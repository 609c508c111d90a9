from collections import defaultdict
from fractions import Fraction

import pytest

from coprime_jitter import check_genericity, draw_jitter, validate_config

SWEEP_PAIRS = [(3, 2), (4, 3), (5, 2), (5, 3), (5, 4), (7, 5)]
SWEEP_R = [1, 2, 3, 4]
# fine grid and wide jitter so random draws are generic with high probability
FINE_Q = 2**24
WIDE_RHO = Fraction(1, 5)


def generic_seeds(config, count, start=0, limit=200):
    """First ``count`` seeds whose jitter passes the necessary genericity check."""
    found = []
    seed = start
    while len(found) < count:
        if seed - start >= limit:
            raise RuntimeError(f"fewer than {count} generic seeds in {limit} draws for {config}")
        jitter = draw_jitter(config, seed)
        if not check_genericity(jitter, config, "necessary"):
            found.append((seed, jitter))
        seed += 1
    return found


@pytest.fixture
def config433():
    return validate_config(4, 3, 3, WIDE_RHO, FINE_Q)


@pytest.fixture
def generic433(config433):
    return generic_seeds(config433, 1)[0][1]


# ---------------------------------------------------------------------------
# one pass/fail line per acceptance criterion

_criteria = {}
_outcomes = defaultdict(list)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    _criteria[number] = title
    if report.when == "call" or (report.when == "setup" and report.failed):
        _outcomes[number].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        results = _outcomes.get(number, [])
        status = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {_criteria[number]}")
