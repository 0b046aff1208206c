import pytest

from topoforge.generators import generate
from topoforge.optimizer import SAConfig, sa_search


@pytest.fixture(scope="session")
def opt16():
    """Annealed (16,4) and (16,3) graphs, shared across test modules."""
    g4 = sa_search(SAConfig(16, 4, n_iter=100_000, seed=1)).best
    g3 = sa_search(SAConfig(16, 3, n_iter=100_000, seed=1)).best
    return g4, g3


@pytest.fixture(scope="session")
def roster16(opt16):
    g4, g3 = opt16
    return [g4, g3, generate("torus:4x4"), generate("wagner:16"), generate("ring:16")]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
