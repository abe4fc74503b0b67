import pytest

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        label, title = marker.args
        _criteria.append((label, title, report.outcome, getattr(item, "criterion_detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, title, outcome, detail in _criteria:
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"[{status}] {label:>3}  {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
