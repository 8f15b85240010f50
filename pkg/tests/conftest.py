import pytest

# lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_acceptance():
    def record(line: str) -> None:
        print(line)
        ACCEPTANCE_LINES.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
