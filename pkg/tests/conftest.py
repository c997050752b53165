import pytest
from hypothesis import HealthCheck, settings

from meixner_pv import PrecisionConfig

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def cfg():
    return PrecisionConfig(256)


@pytest.fixture(scope="session")
def cfg53():
    return PrecisionConfig(53)


@pytest.fixture(scope="session")
def cfg128():
    return PrecisionConfig(128)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
