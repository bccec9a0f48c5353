import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from evpos.models import example_counterexample_3d

settings.register_profile("evpos", deadline=None, max_examples=60, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("evpos")


@pytest.fixture
def A3():
    return example_counterexample_3d()[0]


@pytest.fixture
def B3():
    return example_counterexample_3d()[1]


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)
