import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

import support  # noqa: E402

settings.register_profile(
    "default", max_examples=100, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("default")


@pytest.fixture(scope="session", params=support.PRIMES, ids=lambda p: f"p{p}")
def p(request):
    return request.param


@pytest.fixture(scope="session")
def pp(p):
    return support.public_params(p)


@pytest.fixture(scope="session")
def keys(p):
    return support.key_pair(p)


@pytest.fixture(scope="session")
def pp59():
    return support.public_params(59)


@pytest.fixture(scope="session")
def keys59():
    return support.key_pair(59)
