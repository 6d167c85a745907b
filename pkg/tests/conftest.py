import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from friendsim.scenarios import load_scenario  # noqa: E402

import golden  # noqa: E402


@pytest.fixture(scope="session")
def ewf():
    return load_scenario("ewf")


@pytest.fixture(scope="session")
def wigner():
    return load_scenario("wigner")


@pytest.fixture(scope="session")
def system(ewf):
    return ewf.system


@pytest.fixture(scope="session")
def golden_states(system):
    """Hand-built reference states as StateVectors, keyed like the traces."""
    ens = {k: v.to_state(system) for k, v in golden.ensemble_states().items()}
    col = {k: v.to_state(system) for k, v in golden.collapse_states().items()}
    return {"ensemble": ens, "collapse": col}


# -- acceptance summary ------------------------------------------------------

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
