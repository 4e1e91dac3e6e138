import numpy as np
import pytest

from quasiqec.codes import build_repetition_code, build_surface_code


@pytest.fixture(scope="session")
def rep_code():
    return build_repetition_code()


@pytest.fixture(scope="session")
def d3():
    return build_surface_code(3)


@pytest.fixture(scope="session")
def d5():
    return build_surface_code(5)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
