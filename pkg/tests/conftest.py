import random

import pytest
from hypothesis import HealthCheck, settings

from pfaffring.polyring import QQ, FieldSpec

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GF5 = FieldSpec.prime(5)
GF32003 = FieldSpec.prime(32003)


@pytest.fixture(params=[QQ, GF32003], ids=["QQ", "GF32003"])
def field(request):
    return request.param


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import summary_lines
    except ImportError:
        return
    lines = summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
