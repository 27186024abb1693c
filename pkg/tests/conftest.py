"""Shared fixtures."""
from pathlib import Path

import pytest

from sumcentral.corpus import Corpus
from sumcentral.corpus import Document
from sumcentral.corpus import Lexicon
from sumcentral.corpus import Lexicons
from sumcentral.corpus import load_corpus
from sumcentral.corpus import Topic
from .factories import CORPUS_FILES
from .factories import write_tree


@pytest.fixture
def lexicons() -> Lexicons:
    """Small English word lists."""
    return Lexicons(
        stopword=Lexicon(
            "stopword",
            frozenset(["the", "The", "of", "to", "on", "a", "at", "in", "than", "by"]),
        ),
        pronoun=Lexicon("pronoun", frozenset(["He", "he", "She", "she", "it"])),
        proper_noun=Lexicon("proper_noun", frozenset(["Tehran"])),
    )


@pytest.fixture
def corpus_dir(tmp_path: Path) -> Path:
    """Two-topic corpus directory with gold summaries."""
    return write_tree(tmp_path / "corpus", CORPUS_FILES)


@pytest.fixture
def corpus(corpus_dir: Path, lexicons: Lexicons) -> Corpus:
    """Loaded two-topic corpus."""
    return load_corpus(corpus_dir, lexicons)


@pytest.fixture
def document(corpus: Corpus) -> Document:
    """First document of the corpus."""
    return corpus.documents[0]


@pytest.fixture
def topic(corpus: Corpus) -> Topic:
    """First topic of the corpus (two documents)."""
    return corpus.topics[0]
