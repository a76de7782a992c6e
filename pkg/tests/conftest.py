from importlib import resources
from pathlib import Path

import pytest

from manswer import AssociationModel, Thesaurus, default_lexicon
from manswer.ingest import index_corpus

ROOT = Path(__file__).parent


def data_path(name: str) -> Path:
    return Path(str(resources.files("manswer.data").joinpath(name)))


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return ROOT / "corpus"


@pytest.fixture(scope="session")
def default_model() -> AssociationModel:
    return AssociationModel.load(data_path("assoc_model.txt"))


@pytest.fixture(scope="session")
def default_thesaurus() -> Thesaurus:
    return Thesaurus.load(data_path("thesaurus.txt"))


@pytest.fixture(scope="session")
def indexed(corpus_dir, default_thesaurus, default_model):
    return index_corpus(corpus_dir, thesaurus=default_thesaurus, model=default_model)


@pytest.fixture(scope="session")
def kb(indexed):
    return indexed[0]


@pytest.fixture(scope="session")
def index_summary(indexed):
    return indexed[1]
