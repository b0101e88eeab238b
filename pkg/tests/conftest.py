from pathlib import Path

import pytest

from nmsem import data_loader
from nmsem.universe import Universe

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def birds():
    return data_loader.load_sample_birds()


@pytest.fixture
def sec71():
    return data_loader.load_sample_sec71()


@pytest.fixture
def twin():
    return data_loader.load_sample_sec71_twin()


@pytest.fixture
def u1():
    return data_loader.load_sample_u1()


@pytest.fixture
def m3():
    return Universe.discrete(3)


@pytest.fixture
def pq():
    return Universe.propositional(["p", "q"])


@pytest.fixture
def expansion_witness():
    return data_loader.load_sample_expansion_witness()


@pytest.fixture
def partial_order():
    return data_loader.load_sample_partial_order()
