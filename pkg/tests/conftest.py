import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_disk(rng, count, radius, center=0j):
    """Uniform complex samples in a disk, deterministic under the seeded rng."""
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, count))
    t = rng.uniform(0.0, 2.0 * np.pi, count)
    return center + r * np.exp(1j * t)
