import pytest

from bpcobar import AlgebraConfig


@pytest.fixture(scope="session")
def cfg():
    return AlgebraConfig()


@pytest.fixture(scope="session")
def cfg1():
    # one generator, tall cap: enough room for v1^30 and its differential
    return AlgebraConfig(3, 1, 132)
