import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_string(rng, n, real=False, radius=0.95):
    """Coefficient string strictly inside the disk."""
    r = radius * np.sqrt(rng.random(n))
    if real:
        return r * rng.choice([-1.0, 1.0], size=n)
    return r * np.exp(2j * np.pi * rng.random(n))


def unimodular(rng):
    return np.exp(2j * np.pi * rng.random())


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
