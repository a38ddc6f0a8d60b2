import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from cpig import random_piecewise_cdf

settings.register_profile(
    "cpig", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("cpig")

BATTERY_SEED = 20240611


def make_battery(count, seed=BATTERY_SEED):
    rng = np.random.default_rng(seed)
    return [random_piecewise_cdf(rng) for _ in range(count)]


@pytest.fixture(scope="session")
def battery():
    """100 seeded random piecewise-linear CDFs on nonnegative supports."""
    return make_battery(100)


@pytest.fixture(scope="session")
def bounds_battery():
    return make_battery(200, seed=BATTERY_SEED + 1)


# hypothesis strategy: a random bounded CDF drawn from a seed
random_cdfs = st.integers(min_value=0, max_value=2 ** 32 - 1).map(
    lambda s: random_piecewise_cdf(np.random.default_rng(s))
)
thetas = st.floats(min_value=0.2, max_value=6.0, allow_nan=False)


# acceptance lines collected by tests/test_acceptance.py, echoed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
