import pytest

_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one verdict line per acceptance criterion."""

    def emit(ok: bool, label: str, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _LINES.append(line)
        print(line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
