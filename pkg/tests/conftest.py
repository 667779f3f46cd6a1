import random
from pathlib import Path

import pytest

from lexplace.generate import random_multitree
from lexplace.graph import read_graph

DATA = Path(__file__).parent / "data"


def load(name: str):
    return read_graph(DATA / name)


def corpus(count: int = 160, seed: int = 2024, max_n: int = 14):
    """Deterministic untangled multitrees with k in 1..4, paired with every feasible rho in 1..4."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        k = 1 + i % 4
        n = rng.randint(k + 2, max_n)
        g = random_multitree(k, n, rng.randrange(10**9), merges=rng.choice((n, 3 * n)))
        leaves = g.leaf_mask.bit_count()
        for rho in range(1, min(4, leaves - 1) + 1):
            out.append((g, rho))
    return out


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def four_roots():
    return load("four_roots.txt")


@pytest.fixture(scope="session")
def canonical():
    return load("canonical.txt")


@pytest.fixture(scope="session")
def cyclic():
    return load("cyclic.txt")


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    lines = test_acceptance.pytest_terminal_summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
