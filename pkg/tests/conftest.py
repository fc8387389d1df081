import pytest

_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    """Collect one summary line per acceptance criterion."""
    def record(number: int, passed: bool, detail: str) -> None:
        _LINES.append(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
