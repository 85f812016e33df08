import pytest

from clusternlf.graph import enumerate_matrix

A2 = [[0, 1], [-1, 0]]
B2 = [[0, 1], [-2, 0]]
G2 = [[0, 1], [-3, 0]]
A3 = [[0, 1, 0], [-1, 0, 1], [0, -1, 0]]
MARKOV = [[0, 2, -2], [-2, 0, 2], [2, -2, 0]]

FINITE = {"A2": A2, "B2": B2, "G2": G2, "A3": A3}


@pytest.fixture(scope="session")
def graphs():
    return {name: enumerate_matrix(rows) for name, rows in FINITE.items()}


@pytest.fixture(scope="session")
def a2(graphs):
    return graphs["A2"]


@pytest.fixture(scope="session")
def a3(graphs):
    return graphs["A3"]


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record a one-line verdict for the acceptance summary, then assert it."""

    def record(label: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f": {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
