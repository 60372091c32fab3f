import pytest

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def record_criterion():
    def record(number: int, name: str, passed: bool, elapsed: float, detail: str = ""):
        line = (f"criterion {number} {'PASS' if passed else 'FAIL'}: {name} "
                f"({elapsed:.2f}s{'; ' + detail if detail else ''})")
        ACCEPTANCE_LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
