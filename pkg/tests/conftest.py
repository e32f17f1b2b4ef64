import pytest

# One line per acceptance criterion, printed after the run.
CRITERIA_LINES: dict = {}


def record_criterion(key: str, ok: bool, detail: str) -> None:
    CRITERIA_LINES[key] = f"{key}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.fixture
def criterion_line():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA_LINES, key=lambda k: int(k[1:])):
        terminalreporter.write_line(CRITERIA_LINES[key])
