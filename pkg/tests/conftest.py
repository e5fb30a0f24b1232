import numpy as np
import pytest

from iaorder import SystemConfig, allocate_ici


@pytest.fixture(scope="session")
def cfg_sym():
    """Three symmetric cells, three single-stream users each."""
    return SystemConfig(3, (3, 3, 3), 1, (7, 7, 7), (5, 5, 5))


@pytest.fixture(scope="session")
def cfg_asym():
    """Three uneven cells, two streams per user."""
    return SystemConfig(3, (3, 2, 4), 2, (14, 12, 16), (10, 8, 10))


@pytest.fixture(scope="session")
def cfg_tiny():
    """Smallest two-cell layout whose plan needs budget escalation."""
    return SystemConfig(2, (2, 2), 1, (4, 4), (2, 2))


@pytest.fixture(scope="session")
def cfg_single_users():
    """One user per cell: every ordering search is trivial."""
    return SystemConfig(2, (1, 1), 1, (2, 2), (1, 1))


@pytest.fixture(scope="session")
def plan_sym(cfg_sym):
    return allocate_ici(cfg_sym)


@pytest.fixture(scope="session")
def plan_asym(cfg_asym):
    return allocate_ici(cfg_asym)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))
