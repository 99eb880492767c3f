from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


def read_golden(path=DATA / "golden_es.tsv"):
    rows = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        sentence, first, second, third, ambiguous, covers = line.split("\t")
        rows.append((sentence, (int(first), int(second), int(third), int(ambiguous)), covers.split(";")))
    return rows


@pytest.fixture(scope="session")
def golden():
    return read_golden()


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; repeated in the terminal summary."""

    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
