"""Per-criterion pass/fail lines for the acceptance suite.

Acceptance tests carry ``@pytest.mark.criterion(n, "title")`` and may attach
a measured detail with ``record_property("detail", ...)``. After the run one
line per criterion is printed in the terminal summary.
"""

import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    detail = dict(item.user_properties).get("detail", "")
    failed = rep.failed
    if rep.when == "call" or (rep.when == "setup" and failed):
        prev = _RESULTS.get(number)
        ok = not failed and (prev is None or prev[1])
        _RESULTS[number] = (title, ok, detail if detail else (prev[2] if prev else ""))
        line = f"CRITERION {number} {'PASS' if ok else 'FAIL'}: {title}"
        if detail:
            line += f" | {detail}"
        print("\n" + line, end="")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok, detail = _RESULTS[number]
        line = f"CRITERION {number} {'PASS' if ok else 'FAIL'}: {title}"
        if detail:
            line += f" | {detail}"
        terminalreporter.write_line(line)
