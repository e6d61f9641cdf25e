"""Collects one pass/fail line per acceptance criterion and prints them at
the end of the run."""
import pytest

_RESULTS: dict[str, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and rep.passed):
        return
    cid, title = marker.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    if rep.failed:
        reason = rep.longrepr.reprcrash.message if hasattr(rep.longrepr, "reprcrash") else str(rep.longrepr)
        detail = (detail + "; " if detail else "") + reason.splitlines()[0]
    _RESULTS[cid] = ("PASS" if rep.passed else "FAIL" if rep.failed else "SKIP", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_RESULTS, key=lambda c: int(c[1:])):
        verdict, title, detail = _RESULTS[cid]
        terminalreporter.write_line(f"{verdict} {cid} {title}" + (f" -- {detail}" if detail else ""))
