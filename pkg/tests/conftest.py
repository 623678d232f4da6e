import pytest

from kreweras.thetaq import GFRequest, excursion_gf, vertex_excursion_gf


@pytest.fixture(scope="session")
def cell_gf_12():
    return excursion_gf(GFRequest("cell", 12))


@pytest.fixture(scope="session")
def vertex_gf_12():
    return vertex_excursion_gf(GFRequest("vertex", 12))


@pytest.fixture(scope="session")
def vertex_gf_15():
    return vertex_excursion_gf(GFRequest("vertex", 15))


@pytest.fixture(scope="session")
def vertex_gf_150():
    # shared by the two large asymptotic criteria; ~15 s to build
    return vertex_excursion_gf(GFRequest("vertex", 150))
