import numpy as np
import pytest

from gicirc import GaussianState


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def random_physical_state(rng, n_modes: int) -> GaussianState:
    """Random displaced product of thermal states, rotated mode by mode.

    Built from primitives whose physicality is known by construction, so it
    serves as an implementation-independent source of valid inputs.
    """
    mean = rng.normal(0.0, 3.0, size=2 * n_modes)
    cov = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        variance = rng.uniform(1.0, 4.0)
        squeeze = rng.uniform(0.5, 2.0)
        theta = rng.uniform(0.0, 2.0 * np.pi)
        c, s = np.cos(theta), np.sin(theta)
        rot = np.array([[c, -s], [s, c]])
        block = rot @ np.diag([variance * squeeze, variance / squeeze]) @ rot.T
        cov[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = block
    return GaussianState(n_modes, mean, cov)
