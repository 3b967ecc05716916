import pytest
from hypothesis import HealthCheck, settings

from orbitquant.lie_core import catalog_algebra
from orbitquant.orbits import get_chart

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def aff_r():
    return catalog_algebra("aff_r")


@pytest.fixture(scope="session")
def aff_c():
    return catalog_algebra("aff_c")


@pytest.fixture(scope="session")
def chart_r():
    return get_chart("affR+")


@pytest.fixture(scope="session")
def chart_c():
    return get_chart("affC:0")
