import mpmath
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True)
def working_precision():
    # every test starts from 128 bits; tests that need more raise it locally
    with mpmath.workprec(128):
        yield
