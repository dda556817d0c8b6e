import pytest

_acceptance: list[tuple[str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and report.when == "call":
        title = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _acceptance.append(("PASS" if report.passed else "FAIL", title))
    elif item.module.__name__.endswith("test_acceptance") and report.when == "setup" and report.failed:
        _acceptance.append(("FAIL", item.name))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for status, title in sorted(_acceptance, key=lambda r: r[1]):
        terminalreporter.write_line(f"{status}  {title}")
