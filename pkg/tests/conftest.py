import pytest
from hypothesis import settings

# fixed example streams keep test_output.txt reproducible
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

CRITERIA: dict[int, str] = {}


def record(number: int, ok: bool, note: str = "") -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}" + (f"  ({note})" if note else "")
    CRITERIA[number] = line
    print(line)


@pytest.fixture
def criterion():
    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[k])
