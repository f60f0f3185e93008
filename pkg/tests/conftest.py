import pytest
from hypothesis import HealthCheck, settings

from tracelab.trace import TraceEngine

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def engine():
    return TraceEngine()


@pytest.fixture(scope="session")
def plain_engine():
    """Engine without the power shortcut, for non-circular power-rule checks."""
    return TraceEngine(use_power_shortcut=False)
