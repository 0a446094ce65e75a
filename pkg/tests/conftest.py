from pathlib import Path

import pytest

from conceptsim import ConceptSpec, NetworkSpec, validate_network

DATA_DIR = Path(__file__).resolve().parents[1] / "data"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

CANONICAL_SPEC = NetworkSpec(concepts=(
    ConceptSpec("looking", 0),
    ConceptSpec("tasting", 0),
    ConceptSpec("white", 0),
    ConceptSpec("salty", 0),
    ConceptSpec("sweet", 0),
    ConceptSpec("salt", 1, (("tasting", "salty"), ("looking", "white"))),
    ConceptSpec("sugar", 1, (("tasting", "sweet"), ("looking", "white"))),
))


@pytest.fixture(scope="session")
def canonical_spec():
    return CANONICAL_SPEC


@pytest.fixture(scope="session")
def net():
    return validate_network(CANONICAL_SPEC)


@pytest.fixture(scope="session")
def ids(net):
    return dict(net.name_to_id)


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN_DIR
