import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def complex_run():
    """Complex-form classification of every family up to rank 6."""
    from parabolic_rigidity.classify import classify_all
    return classify_all("ABCDEFG", 6, "complex")


@pytest.fixture(scope="session")
def complex_diff(complex_run):
    from parabolic_rigidity.tables import diff_tables
    return diff_tables(complex_run.records, max_rank=6)
