import numpy as np
import pytest

from packrigid.casebook import build_case


@pytest.fixture(scope="session")
def flower4():
    rec = build_case("flower4")
    return rec.graph, rec.packing, rec.partition


@pytest.fixture(scope="session")
def prestress10():
    rec = build_case("prestress10")
    return rec.graph, rec.packing, rec.partition


@pytest.fixture(scope="session")
def general10():
    rec = build_case("general10")
    return rec.graph, rec.packing, rec.partition


@pytest.fixture(scope="session")
def prestress15():
    rec = build_case("prestress15")
    return rec.graph, rec.packing, rec.partition


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
