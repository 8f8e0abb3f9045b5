import re

import pytest

_acceptance = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _acceptance.append((props["criterion"], report.passed, props.get("detail", "")))


def _order(row):
    m = re.match(r"(\d+)(\w*)", row[0])
    return (int(m.group(1)), m.group(2)) if m else (10**9, row[0])


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit, ok, detail in sorted(_acceptance, key=_order):
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  {crit}  {detail}")


@pytest.fixture
def criterion(record_property):
    """Label an acceptance test and attach a one-line detail."""
    state = {}

    def label(name, detail=""):
        state["name"] = name
        record_property("criterion", name)
        if detail:
            record_property("detail", detail)

    return label
