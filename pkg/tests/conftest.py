import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance result line; printed in the terminal summary."""
    def _report(line):
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
