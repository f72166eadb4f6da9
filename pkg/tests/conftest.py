import numpy as np
import pytest

from coxlassonet import dataset_from_arrays


def random_survival_arrays(rng, n, p, censor_frac=0.3, tie_prob=0.0):
    """Small random instance with at least one event; optional exact ties."""
    times = rng.exponential(1.0, size=n)
    if tie_prob > 0:
        # snap some times onto a coarse grid to force exact ties
        snap = rng.random(n) < tie_prob
        times[snap] = np.round(times[snap], 1)
    status = (rng.random(n) > censor_frac).astype(int)
    if status.sum() == 0:
        status[rng.integers(n)] = 1
    X = rng.normal(size=(n, p))
    return times, status, X


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def small_dataset(rng):
    times, status, X = random_survival_arrays(rng, n=12, p=3, tie_prob=0.4)
    return dataset_from_arrays(times, status, X)
