import numpy as np
import pytest

from varthresh import demo


@pytest.fixture
def paper_memories():
    return demo.MEMORIES


@pytest.fixture
def paper_T():
    return demo.T_MATRIX.copy()


@pytest.fixture
def paper_thresholds():
    return demo.THRESHOLDS.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one status line per acceptance criterion at the end of the run
_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _criteria[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_criteria.items()):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
