import math
from fractions import Fraction

import numpy as np
import pytest

from schureq import Explicit

ACCEPTANCE_LINES: list[str] = []


def random_base(rng: np.random.Generator, size: int) -> Explicit:
    """Explicit pmf on {0..size-1} with Dirichlet(1, ..., 1) weights."""
    p = rng.dirichlet(np.ones(size))
    return Explicit(p / p.sum())


def random_bases(seed: int, count: int, min_size: int = 3, max_size: int = 20):
    rng = np.random.default_rng(seed)
    return [random_base(rng, int(rng.integers(min_size, max_size + 1))) for _ in range(count)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def poisson_pmf_exact(lam: float, x: int) -> float:
    """Poisson pmf from an exact rational power over the factorial."""
    return math.exp(-lam) * float(Fraction(lam) ** x / math.factorial(x))
