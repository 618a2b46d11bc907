import random
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from gallerynet.geometry import validate_polygon
from gallerynet.instances import comb, l_polygon, square

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def unit_square():
    return square()


@pytest.fixture
def L():
    return l_polygon()


@pytest.fixture
def comb3():
    return comb(3)


@pytest.fixture
def pentagon():
    return validate_polygon([(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)])


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
