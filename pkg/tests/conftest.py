import numpy as np
import pytest

from wcobloch import default_grid


@pytest.fixture(scope="session")
def grid10():
    """Coarser grid for tests that do many norm evaluations."""
    return default_grid(10)


@pytest.fixture(scope="session")
def grid14():
    return default_grid(14)


@pytest.fixture()
def rng():
    return np.random.default_rng(42)


@pytest.fixture()
def disc_points(rng):
    """200 seeded points with |z| <= 0.95."""
    r = 0.95 * np.sqrt(rng.uniform(0.0, 1.0, 200))
    theta = rng.uniform(0.0, 2.0 * np.pi, 200)
    return r * np.exp(1j * theta)
