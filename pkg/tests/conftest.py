import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wparc.surface import one_holed_torus, pair_of_pants

settings.register_profile("wparc", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("wparc")

SYM = math.acosh(2.0)


@pytest.fixture
def torus():
    return one_holed_torus()


@pytest.fixture
def pants():
    return pair_of_pants()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
