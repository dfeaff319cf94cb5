import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    def record(criterion, title, ok, detail=""):
        line = f"ACCEPTANCE {criterion} [{title}]: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
