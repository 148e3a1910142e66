import pytest

from exactlab.arknit import dynkin_quiver, knit

D4_ORIENTATIONS = [[1, 1, 1], [-1, 1, 1], [1, -1, -1], [-1, -1, -1]]


@pytest.fixture(scope="session")
def a2():
    return knit(dynkin_quiver("A2"))


@pytest.fixture(scope="session")
def a3():
    return knit(dynkin_quiver("A3"))


@pytest.fixture(scope="session")
def d4():
    return knit(dynkin_quiver("D4"))


@pytest.fixture(scope="session")
def a2ids(a2):
    """S2, P1, S1 for the quiver 1 -> 2."""
    return a2.by_dims((0, 1)), a2.by_dims((1, 1)), a2.by_dims((1, 0))


@pytest.fixture(scope="session")
def iv(a3):
    """Interval module [i,j] of the linear A3 quiver 1 -> 2 -> 3."""
    def get(i, j):
        return a3.by_dims(tuple(1 if i <= k <= j else 0 for k in (1, 2, 3)))
    return get


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
