import pytest

from heunwell.spectrum import Parity, special_strengths

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def roots():
    """Special U0 at d=1, keyed by (N, parity), for N <= 3 up to U0 = 5000."""
    return {(n, p): special_strengths(n, p, 1.0, 5000.0) for n in range(4) for p in Parity}


@pytest.fixture
def report():
    def _report(criterion, passed, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
