_results: list[tuple[str, bool]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _results.append((value, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed in _results:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}")
