import pytest

from hyperturan import RGraph
from hyperturan.extremal import gen_fano, gen_turan
from hyperturan.families import gen_T


@pytest.fixture
def fano():
    return gen_fano()


@pytest.fixture
def t31():
    return gen_T(3, 1)


@pytest.fixture
def k4_minus():
    return RGraph(4, 3, [(1, 2, 3), (1, 2, 4), (2, 3, 4)])


@pytest.fixture
def t36():
    return gen_turan(6, 3)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for res in sorted(RESULTS, key=lambda r: r.cid):
        terminalreporter.write_line(res.line())
