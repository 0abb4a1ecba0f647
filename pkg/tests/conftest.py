import numpy as np
import pytest

from passive_dilation.symplectic import random_unitary

_criteria = {}
_outcomes = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criteria[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    if report.when == "call" or report.outcome != "passed":
        prev = _outcomes.get(report.nodeid, ("passed", []))
        outcome = report.outcome if prev[0] == "passed" else prev[0]
        details = prev[1] + [v for k, v in report.user_properties if k == "detail"]
        _outcomes[report.nodeid] = (outcome, details)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    by_number = {}
    for nodeid, (number, text) in _criteria.items():
        if nodeid in _outcomes:
            by_number.setdefault(number, (text, []))[1].append(_outcomes[nodeid])
    terminalreporter.section("acceptance criteria")
    for number in sorted(by_number):
        text, results = by_number[number]
        ok = all(outcome == "passed" for outcome, _ in results)
        details = "; ".join(d for _, ds in results for d in ds)
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {text}"
        terminalreporter.write_line(line + (f"  [{details}]" if details else ""))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def unitary_pair(rng):
    return random_unitary(3, rng), random_unitary(3, rng)
