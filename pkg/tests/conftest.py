from pathlib import Path

import pytest
from hypothesis import settings

from cartan_gkz.cartan import CartanContext
from cartan_gkz.ellcurve import HeegnerTable, WeierstrassCurve

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "cartan_gkz" / "fixtures"


@pytest.fixture(scope="session")
def ctx():
    return CartanContext(17, 5)


@pytest.fixture(scope="session")
def curve():
    return WeierstrassCurve(1, -1, 1, -199, 510)


@pytest.fixture(scope="session")
def table1():
    return HeegnerTable.from_csv(FIXTURES / "table1.csv", 17)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
