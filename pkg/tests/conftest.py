import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from tensor_gorenstein import selftest as ex

settings.register_profile("default", deadline=None, max_examples=30, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rng_from(seed):
    return np.random.default_rng(seed)


@pytest.fixture(scope="session")
def cycle():
    return ex.three_cycle()


@pytest.fixture(scope="session")
def a2():
    return ex.a2_path()


@pytest.fixture(scope="session")
def dual():
    return ex.dual_numbers()


@pytest.fixture(scope="session")
def ring():
    return ex.example_ring()


@pytest.fixture(scope="session")
def bimod():
    return ex.example_bimodule()
