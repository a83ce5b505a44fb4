import numpy as np
import pytest


def random_instance(rng, n, low=-10_000, high=10_000, dup_rate=0.0):
    """Query plus ``n`` grid points; optionally reuse earlier points and the query."""
    X = rng.integers(low, high, size=(n, 2), endpoint=True)
    if dup_rate and n > 1:
        for i in range(1, n):
            if rng.random() < dup_rate:
                X[i] = X[rng.integers(0, i)]
    if rng.random() < 0.2 and n:
        q = X[rng.integers(0, n)].copy()
    else:
        q = rng.integers(low, high, size=2, endpoint=True)
    return tuple(int(v) for v in q), X


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def diamond():
    return np.array([(1, 0), (-1, 0), (0, 1), (0, -1)])
