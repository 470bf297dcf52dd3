import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dppa.costs import QuadraticCost
from dppa.instance import generate_instance
from dppa.mixing import MixingMatrix


@pytest.fixture
def two_agent():
    """f_1 = (x-1)^2/2, f_2 = (x+1)^2/2 on the complete 2-node network."""
    costs = [QuadraticCost([[1.0]], [1.0]), QuadraticCost([[1.0]], [-1.0])]
    mixing = MixingMatrix.from_weights([[0.5, 0.5], [0.5, 0.5]])
    return mixing, costs


@pytest.fixture(scope="session")
def small_instance():
    return generate_instance(n=6, m=3, d=4, link_prob=0.6, seed=3)


@pytest.fixture(scope="session")
def reference_instance():
    return generate_instance(n=20, m=5, d=10, link_prob=0.4, seed=1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    """Record a one-line verdict for the end-of-run acceptance summary."""
    def record(number, passed, text):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
