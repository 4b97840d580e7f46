import pytest

from arithdeg.dynamics import Endomorphism, power_map


@pytest.fixture(scope="session")
def split23():
    return power_map([1, 1], [2, 3], "split23")


@pytest.fixture(scope="session")
def swap23():
    return Endomorphism.from_strings([1, 1], [["X1_0^2", "X1_1^2"], ["X0_0^3", "X0_1^3"]], "swap23")


@pytest.fixture(scope="session")
def square_p2():
    return power_map([2], [2], "square_p2")


@pytest.fixture(scope="session")
def square_p1():
    return power_map([1], [2], "square")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
