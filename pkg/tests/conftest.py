import numpy as np
import pytest

from kummer.phase_space import random_quadratic_field

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_point(rng, d, lo=0.3, hi=2.0):
    return rng.uniform(lo, hi, d) * np.exp(2j * np.pi * rng.uniform(size=d))


@pytest.fixture
def quad_fields(rng):
    return lambda d, n=3: [random_quadratic_field(d, rng) for _ in range(n)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
