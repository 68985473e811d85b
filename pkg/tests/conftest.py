import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from subsig import parse_structure  # noqa: E402

EXAMPLES = Path(__file__).resolve().parent.parent / "docs" / "examples"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def sp3():
    """(x1 | x2) & x3."""
    return parse_structure("(x1 | x2) & x3", 3)


@pytest.fixture
def bridge4():
    return parse_structure("x1 & (x2 | (x3 & x4))", 4)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
