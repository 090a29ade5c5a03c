import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def check(cid, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {cid}: {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
