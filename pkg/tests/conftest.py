"""Shared fixtures: the bundled example curves and their expensive stages,
computed once per session."""

from pathlib import Path

import pytest

from troptangent.curve import intersect_curve
from troptangent.incidence import dual_complex, gauss_complex, graph_complex, tangential_complex
from troptangent.newton import newton_polytope
from troptangent.problem import fixture

# outcome of every test run in this session, keyed by "file.py::test_name";
# the acceptance report reads it back instead of repeating the property runs
OUTCOMES: dict[str, bool] = {}


def _key(nodeid: str) -> str:
    path, _, name = nodeid.partition("::")
    return f"{Path(path).name}::{name.split('[')[0]}"


def pytest_collection_modifyitems(items):
    items.sort(key=lambda item: item.path.name == "test_acceptance.py")


def pytest_runtest_logreport(report):
    if report.when == "call" or report.outcome != "passed":
        key = _key(report.nodeid)
        OUTCOMES[key] = OUTCOMES.get(key, True) and report.outcome == "passed"


@pytest.fixture(scope="session")
def space_curve():
    return intersect_curve(fixture("p3_curve").supports())


@pytest.fixture(scope="session")
def space_graph(space_curve):
    return graph_complex(space_curve)


@pytest.fixture(scope="session")
def space_gauss(space_curve, space_graph):
    return gauss_complex(space_curve, space_graph)


@pytest.fixture(scope="session")
def space_dual(space_curve, space_graph):
    return dual_complex(space_curve, space_graph)


@pytest.fixture(scope="session")
def space_tau(space_curve, space_graph):
    return tangential_complex(space_curve, space_graph)


@pytest.fixture(scope="session")
def space_polytope(space_dual):
    return newton_polytope(space_dual)


@pytest.fixture(scope="session")
def cubic():
    return intersect_curve(fixture("plane_cubic").supports())


@pytest.fixture(scope="session")
def cubic_graph(cubic):
    return graph_complex(cubic)


@pytest.fixture(scope="session")
def cubic_dual(cubic, cubic_graph):
    return dual_complex(cubic, cubic_graph)


@pytest.fixture(scope="session")
def recorded_outcomes():
    return OUTCOMES
