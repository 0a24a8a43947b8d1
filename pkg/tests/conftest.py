import numpy as np
import pytest

from accretive import AnalysisConfig, build_model

WORKED_2X2 = np.array([[2.0, 1j], [1j, 2.0]])


def random_accretive(rng, n, spread=2.0):
    """Random matrix with positive definite Hermitian part."""
    Q = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    herm = Q @ Q.conj().T / n + 0.5 * np.eye(n)
    K = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    skew = (K + K.conj().T) / 2 * spread / n
    return herm + 1j * skew


@pytest.fixture(scope="session")
def model_64():
    """Default elliptic + fractional split at n = 64."""
    return build_model(AnalysisConfig(sizes=(64,)), 64)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
