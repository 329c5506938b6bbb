import numpy as np
import pytest

# Equilateral triangle with circumradius sqrt(4/3); used all over the suite.
TRIANGLE = np.array([[-1.0, 0.0], [1.0, 0.0], [0.0, np.sqrt(3.0)]])


@pytest.fixture
def triangle():
    return TRIANGLE.copy()


def random_cloud(rng, n, d, box=1.0):
    """Uniform points in a box, resampled until pairwise distinct."""
    while True:
        pts = rng.uniform(0.0, box, size=(n, d))
        dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
        if n < 2 or dist[np.triu_indices(n, 1)].min() > 1e-6:
            return pts
