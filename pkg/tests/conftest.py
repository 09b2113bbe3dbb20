import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci", deadline=None, derandomize=True, max_examples=50,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


@pytest.fixture(scope="session")
def families():
    from orliczkit import make_family
    return {
        name: make_family(name, {}, None)
        for name in ("example_3_2", "example_3_4", "example_3_5",
                     "example_4_6")
    }
