import json
import os

import pytest

from props import EXAMPLE_COUNTS, INVARIANT_EXAMPLES

INVARIANT_OUTCOMES: dict[str, str] = {}
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "invariant: property-based invariant suite")


def pytest_collection_modifyitems(items):
    # acceptance criteria run last so criterion 9 can audit the invariant suites
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.get_closest_marker("invariant") and rep.when == "call":
        INVARIANT_OUTCOMES[f"{item.module.__name__}::{item.originalname}"] = rep.outcome
    mark = item.get_closest_marker("acceptance")
    if mark and rep.when == "call":
        n, title = mark.args
        status = "PASS" if rep.passed else "FAIL"
        ACCEPTANCE_LINES[n] = f"acceptance {n}: {status}  {title}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])


@pytest.fixture(scope="session")
def invariant_audit():
    """``(outcomes, counts, required)`` for the invariant suites run in this session."""
    return INVARIANT_OUTCOMES, EXAMPLE_COUNTS, INVARIANT_EXAMPLES


def pytest_sessionfinish(session):
    target = os.environ.get("QUASIAFFINE_INVARIANT_REPORT")
    if target:
        with open(target, "w") as fh:
            json.dump({"outcomes": INVARIANT_OUTCOMES, "counts": EXAMPLE_COUNTS}, fh)
