import os

import pytest
from hypothesis import settings

from posetbundles import fixtures
from posetbundles.groups import cyclic, product, symmetric

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES = {}


@pytest.fixture
def chain3():
    return fixtures.chain3()


@pytest.fixture
def circ4():
    return fixtures.circ4()


@pytest.fixture
def vee():
    return fixtures.vee()


@pytest.fixture
def diamond():
    return fixtures.diamond()


@pytest.fixture
def z2():
    return cyclic(2)


@pytest.fixture
def s3():
    return symmetric(3)


@pytest.fixture
def z2xz3():
    return product(cyclic(2), cyclic(3))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
