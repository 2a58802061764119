import pytest

_criterion_lines = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Collector for the one-line-per-criterion acceptance summary."""
    def record(line: str) -> None:
        _criterion_lines.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
