import numpy as np
import pytest

from fhnsync.fokker_planck import GridSpec


@pytest.fixture(scope="session")
def grid():
    return GridSpec()


@pytest.fixture(scope="session")
def small_grid():
    # coarse box for quick solver checks
    return GridSpec(u_min=-3.0, u_max=3.0, v_min=-1.5, v_max=1.5, du=0.06, dv=0.03)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


VERDICTS = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        VERDICTS.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance")
        for line in VERDICTS:
            terminalreporter.write_line(line)
