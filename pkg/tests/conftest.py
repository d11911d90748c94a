import pytest

from asmoduli.config import bundled


@pytest.fixture(scope="session")
def cfgs():
    return {n: bundled(n) for n in ("cfg_a", "cfg_b", "cfg_c", "cfg_d")}


@pytest.fixture(scope="session")
def fk_a(cfgs):
    return cfgs["cfg_a"].kernel()


@pytest.fixture(scope="session")
def fk_b(cfgs):
    return cfgs["cfg_b"].kernel()


@pytest.fixture(scope="session")
def fk_c(cfgs):
    return cfgs["cfg_c"].kernel()


@pytest.fixture(scope="session")
def fk_d(cfgs):
    return cfgs["cfg_d"].kernel()
