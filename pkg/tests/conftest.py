import numpy as np
import pytest

from thermomaj import ThermalContext, single_molecule_model, two_molecule_model

E1, DELTA_E = 2.48, 1.39


@pytest.fixture
def ctx():
    return ThermalContext(1.0)


@pytest.fixture
def single():
    return single_molecule_model(E1, DELTA_E)


@pytest.fixture
def pair():
    return two_molecule_model(E1, DELTA_E)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_population(rng, d, sparsity=0.3):
    v = rng.random(d) * (rng.random(d) > sparsity)
    if v.sum() == 0:
        v[rng.integers(d)] = 1.0
    return v / v.sum()


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
