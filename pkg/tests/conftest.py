import re

ACCEPTANCE = {}
_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)(\[.*\])?$")


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or report.failed:
        ok = report.passed and ACCEPTANCE.get(key, True)
        ACCEPTANCE[key] = ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), ok in sorted(ACCEPTANCE.items()):
        terminalreporter.write_line(f"criterion {num:2d} {name}: {'PASS' if ok else 'FAIL'}")
