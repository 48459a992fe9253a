import numpy as np
import pytest

from mcgraph import WeightVector, clocks_from_xi


@pytest.fixture
def worked():
    """Two blocks (3, 1) with clocks (0.2, 5.0); merges at q* = 4.8 / 3."""
    return WeightVector([3.0, 1.0]), clocks_from_xi([0.2, 5.0])


def random_instance(seed, n_max=20, low=0.1, high=10.0):
    from mcgraph import RngStream, sample_clocks
    gen = RngStream(seed, 0).generator()
    n = int(gen.integers(1, n_max + 1))
    x = WeightVector.sorted(np.exp(gen.uniform(np.log(low), np.log(high), size=n)))
    return x, sample_clocks(x, gen), gen


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
