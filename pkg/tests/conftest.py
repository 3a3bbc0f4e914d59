import pytest
from hypothesis import settings

from helpers import example_algebras

settings.register_profile("repo", max_examples=40, deadline=None)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def algebras():
    return example_algebras()
