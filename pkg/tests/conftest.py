import pytest

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def record():
    """Store one summary line per acceptance criterion."""

    def _record(criterion, ok, detail):
        ACCEPTANCE_RESULTS[criterion] = (bool(ok), detail)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE_RESULTS, key=lambda c: int(c[1:])):
        ok, detail = ACCEPTANCE_RESULTS[criterion]
        terminalreporter.write_line(f"{criterion:>3} {'PASS' if ok else 'FAIL'}  {detail}")
