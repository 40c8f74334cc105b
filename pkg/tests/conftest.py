import pytest

_OUTCOMES: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        _OUTCOMES[label] = _OUTCOMES.get(label, True) and not failed


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_OUTCOMES, key=lambda s: int(s.split()[0][2:])):
        terminalreporter.write_line(f"{'PASS' if _OUTCOMES[label] else 'FAIL'}  {label}")
