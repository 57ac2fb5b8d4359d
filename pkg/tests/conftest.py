import numpy as np
import pytest


def _random_su2(rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return q / np.sqrt(np.linalg.det(q))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_su2(rng):
    return lambda: _random_su2(rng)
