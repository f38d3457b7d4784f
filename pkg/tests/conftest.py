import numpy as np
import pytest

from setcomplete.bench import InstanceSpec, gen_instance
from setcomplete.matrix_core import ObservedMatrix


BARRIER_VALUES = np.array([[0.0, 2.0, 1.0], [3.0, 0.0, 1.0], [3.0, 2.0, 0.0]])
BARRIER_MASK = ~np.eye(3, dtype=bool)


@pytest.fixture
def barrier_example():
    """3x3 rank-one instance with the diagonal unobserved; one completion is
    [1,1,1]^T [3,2,1]."""
    return ObservedMatrix(values=BARRIER_VALUES.copy(), mask=BARRIER_MASK.copy())


def barrier_start():
    """Initial basis trapped behind the first column's barrier."""
    return np.array([[-10.0], [1.0], [1.0]]) / np.sqrt(102.0)


def random_observed(rng, m=20, n=15, r=3, rate=0.3):
    """Random rank-r instance with a uniform mask at the given sampling rate."""
    k = max(1, round(rate * m * n))
    X, mask = gen_instance(InstanceSpec(m=m, n=n, r=r, k=k, seed=int(rng.integers(2**32))))
    return ObservedMatrix.from_dense(X, mask)
