import pytest

_acceptance: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): exit criterion with a one-line verdict")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        verdict = "PASS" if report.passed else "FAIL"
        _acceptance.append((marker.args[0], verdict, item.name))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict, name in sorted(_acceptance):
        terminalreporter.write_line(f"{verdict}  {label}  ({name})")
