import json
from pathlib import Path

import pytest
from hypothesis import strategies as st

from ribbonkit.grid import GridDiagram, load_grid
from ribbonkit.selftest import CORPUS, DATA

GOLDEN = Path(__file__).parent / "golden"


@st.composite
def grids(draw, min_size=2, max_size=5):
    size = draw(st.integers(min_size, max_size))
    xs = draw(st.permutations(range(size)))
    os = draw(st.permutations(range(size)).filter(lambda p: all(a != b for a, b in zip(xs, p))))
    return GridDiagram(size, tuple(xs), tuple(os))


@pytest.fixture(scope="session")
def corpus():
    return {name: load_grid(DATA / f"{name}.grid") for name in CORPUS}


@pytest.fixture(scope="session")
def golden():
    return {name: json.loads((GOLDEN / f"{name}.json").read_text()) for name in CORPUS}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
