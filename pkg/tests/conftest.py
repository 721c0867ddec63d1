import math
from types import SimpleNamespace

import pytest

from efimov import radial

LI_RB = 87.0 / 7.0


@pytest.fixture(scope="session")
def li_rb():
    return radial.universal_params(LI_RB)


@pytest.fixture
def rounded_up():
    """Rounded constants quoted for the Li-Rb mixture."""
    alpha, beta = 2.17, 2.55
    return SimpleNamespace(s0=1.322, alpha=alpha, beta=beta, theta0=math.atan2(beta, alpha))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
