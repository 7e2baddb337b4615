"""Session-scoped fixtures over the bundled mini-corpus."""

import pytest


@pytest.fixture(scope="session")
def fixture_corpus():
    from ecoqa.fixtures import mini_corpus

    return mini_corpus()


@pytest.fixture(scope="session")
def fixture_qa_pairs():
    from ecoqa.fixtures import mini_qa_pairs

    return mini_qa_pairs()
