import os
import warnings

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def no_precondition_warnings():
    from streammatch import PreconditionWarning

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PreconditionWarning)
        yield
