import itertools
import os

import pytest
from hypothesis import HealthCheck, settings

from cvqss.scheme import ThresholdParams, random_encoding

settings.register_profile(
    "cvqss", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "cvqss"))

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(scope="session")
def golden2():
    return random_encoding(ThresholdParams.canonical(2), 42)


@pytest.fixture(scope="session")
def golden3():
    return random_encoding(ThresholdParams.canonical(3), 42)


def subsets(enc, size=None):
    return list(itertools.combinations(range(enc.n), enc.k if size is None else size))
