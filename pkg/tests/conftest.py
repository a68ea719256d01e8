"""Shared fixtures and the per-criterion acceptance summary."""

from __future__ import annotations

from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_criteria: dict[int, dict] = {}


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            n, title = m.args
            _criteria.setdefault(n, {"title": title, "outcomes": []})


def pytest_runtest_logreport(report):
    n = dict(report.user_properties).get("criterion")
    if n is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _criteria[n]["outcomes"].append(report.outcome)


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m is not None:
        item.user_properties.append(("criterion", m.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        c = _criteria[n]
        outcomes = c["outcomes"]
        if not outcomes:
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        skipped = outcomes.count("skipped")
        note = f", {skipped} not attainable" if skipped else ""
        tr.write_line(f"AC{n:<2} {status:<7} {c['title']} ({len(outcomes)} checks{note})")
