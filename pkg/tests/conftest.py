"""Collects ``@pytest.mark.criterion(...)`` outcomes and prints one line per criterion."""

from collections import OrderedDict

import pytest

_results: "OrderedDict[str, list[tuple[str, bool]]]" = OrderedDict()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _results.setdefault(str(marker.args[0]), []).append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_results, key=lambda c: int(c)):
        runs = _results[cid]
        failed = [name for name, ok in runs if not ok]
        status = "FAIL" if failed else "PASS"
        line = f"ACCEPTANCE {cid} {status} ({len(runs) - len(failed)}/{len(runs)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        terminalreporter.write_line(line)
