import sys


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name, (passed, detail, elapsed) in results.items():
        terminalreporter.write_line(
            f"{'PASS' if passed else 'FAIL'}  {name}  ({elapsed:.1f} s)  {detail}")
