from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from steinlab.operators import random_density

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

seeds = st.integers(min_value=0, max_value=2**31 - 1)


def distributions(size: int, min_value: float = 1e-3):
    """Strictly positive probability vectors of a fixed size."""
    return st.lists(st.floats(min_value, 1.0), min_size=size, max_size=size).map(
        lambda xs: np.asarray(xs) / np.sum(xs)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def qubit_pair():
    return random_density(2, 2, 101), random_density(2, 2, 202)
