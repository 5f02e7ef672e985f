import re

import numpy as np
import pytest

from dunkl.roots import build_standard, rank_one

# acceptance lines collected by test_acceptance.py, echoed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=_order):
            terminalreporter.write_line(line)


def _order(line):
    label = line.split()[1].rstrip(":")
    digits = re.match(r"\d+", label).group()
    return int(digits), label


@pytest.fixture(scope="session")
def r1_half():
    return rank_one("1/2")


@pytest.fixture(scope="session")
def a2_one():
    return build_standard("A", 3, "1")


@pytest.fixture(scope="session")
def b2_mixed():
    return build_standard("B", 2, ["1/2", "1"])


@pytest.fixture(scope="session")
def i2_five():
    return build_standard("I2", 5, "1/3")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
