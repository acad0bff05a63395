import random

import pytest

from quickflow.generate import random_instance
from quickflow.model import example_i1

# Lines reported by the acceptance module, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def acceptance_corpus(seed: int = 2024, count: int = 200, max_horizon: int = 10):
    """Seeded instances with n <= 8, m <= 16, |S| <= 4 and T <= 10."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        inst = random_instance(rng, transit_range=(0, 3), supply_max=3, slack_max=2)
        if inst.horizon <= max_horizon:
            out.append(inst)
    return out


@pytest.fixture
def i1():
    return example_i1(4)


@pytest.fixture
def i1_t5():
    return example_i1(5)


@pytest.fixture(scope="session")
def small_corpus():
    return acceptance_corpus(seed=7, count=40)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
