import pytest

# (criterion, passed, detail) lines recorded by the acceptance suite
ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    def _record(criterion, passed, detail):
        line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
