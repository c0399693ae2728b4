import numpy as np
import pytest

from spinberry.systems import SystemSpec

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


@pytest.fixture
def spin_half():
    """A lone spin-1/2: two_momenta with a spin-0 partner."""
    return SystemSpec(kind="two_momenta", j1=0.5, j2=0.0, G=0.0, g1=2.0, g2=0.0, B0=1.0)


@pytest.fixture
def two_spin():
    return SystemSpec(kind="two_momenta", j1=0.5, j2=0.5, G=1.0, g1=2.0, g2=-1.0, B0=0.3)


@pytest.fixture
def quad1():
    return SystemSpec(kind="quadrupole", j=1.0, K=1.0)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
