import sys

import pytest

from lattice_voa.filtration import engine
from lattice_voa.root_data import RootSystem
from lattice_voa.vertex import LatticeVOA


@pytest.fixture(scope="session")
def a1():
    return RootSystem.from_string("A1")


@pytest.fixture(scope="session")
def a2():
    return RootSystem.from_string("A2")


@pytest.fixture(scope="session")
def vac1():
    return LatticeVOA("A1")


@pytest.fixture(scope="session")
def vac2():
    return LatticeVOA("A2")


@pytest.fixture(scope="session")
def eng1():
    return engine(RootSystem.from_string("A1"))


@pytest.fixture(scope="session")
def eng2():
    return engine(RootSystem.from_string("A2"))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
