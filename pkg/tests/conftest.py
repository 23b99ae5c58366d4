import math
from pathlib import Path

import pytest

from cxroute import CX, Circuit, Rz, t4

DATA = Path(__file__).resolve().parent.parent / "data"


def t4_example_circuit() -> Circuit:
    return Circuit.from_kinds(4, [CX(0, 1), CX(2, 3), CX(1, 2), Rz(1, math.pi / 4), CX(1, 0)])


@pytest.fixture
def t4_example() -> Circuit:
    return t4_example_circuit()


@pytest.fixture
def tgraph():
    return t4()


@pytest.fixture
def data_dir() -> Path:
    return DATA


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
