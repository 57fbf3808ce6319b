import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from prodcodes.gf import field_new
from prodcodes.product import preset, product_from_params

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def gf8():
    return field_new(3)


@pytest.fixture(scope="session")
def gf256():
    return field_new(8)


@pytest.fixture(scope="session")
def cp1():
    return preset("cp1")


@pytest.fixture(scope="session")
def cp2():
    return preset("cp2")


@pytest.fixture(scope="session")
def cp3():
    return preset("cp3")


@pytest.fixture(scope="session")
def tiny():
    """[4,2]^2 over GF(8): 16 symbols, small enough for exhaustive scans."""
    return product_from_params(4, 2, 4, 2, m=3)


def grid(text: str) -> np.ndarray:
    return np.array([[int(c) for c in row] for row in text.split()], dtype=bool)


# Acceptance criteria record one verdict line each; printed again at the end of the run.
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
