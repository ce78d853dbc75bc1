"""Shared fixtures and the acceptance report.

Tests marked ``acceptance(n, description)`` feed a summary section that
prints one PASS/FAIL line per criterion at the end of the run.
"""

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from dogwatch import Limits, Session, parse_model

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")

MODEL_PATH = Path(__file__).resolve().parent.parent / "models" / "smart-house.dog"


@pytest.fixture(scope="session")
def smart_house():
    return parse_model(MODEL_PATH.read_text())


@pytest.fixture()
def smart_session(smart_house):
    dog, attribution = smart_house
    return Session(dog, attribution, Limits())


_results: list[tuple[int, str, bool]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and report.when == "call":
        _results.append((marker.args[0], marker.args[1], report.passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, passed in sorted(_results):
        word = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {word} - {description}")
