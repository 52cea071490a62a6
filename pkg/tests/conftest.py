import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hsslab.domains import parse_domain

settings.register_profile("default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(params=["disc", "ball 2", "I 2 2", "I 2 3", "II 4", "II 5", "III 2", "III 3"])
def domain(request):
    return parse_domain(request.param)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
