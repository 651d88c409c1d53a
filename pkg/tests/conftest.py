import json
from pathlib import Path

import numpy as np
import pytest

from narraframe.corpus import CorpusPartition, Document
from narraframe.embedding import EmbeddingModel

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def make_doc(doc_id: str, tokens, party: str = "D", text: str | None = None,
             **overrides) -> Document:
    fields = dict(
        id=doc_id,
        author="someone",
        party=party,
        chamber="house",
        timestamp="2020-03-15T12:00:00Z",
        lang="en",
        text=text if text is not None else " ".join(tokens),
        is_retweet=False,
        tokens=tuple(tokens),
    )
    fields.update(overrides)
    return Document(**fields)


def make_partition(name: str, token_lists, party: str = "D") -> CorpusPartition:
    docs = [make_doc(f"{name}{i}", toks, party=party)
            for i, toks in enumerate(token_lists)]
    return CorpusPartition.from_docs(name, docs)


def random_model(rng: np.random.Generator, n_tokens: int, dim: int) -> EmbeddingModel:
    tokens = [f"w{i}" for i in range(n_tokens)]
    vectors = rng.normal(size=(n_tokens, dim))
    return EmbeddingModel(tokens, vectors)


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def fixture_tweets_path(fixture_dir) -> Path:
    return fixture_dir / "tweets_2000.jsonl"


@pytest.fixture(scope="session")
def fixture_triples_path(fixture_dir) -> Path:
    return fixture_dir / "triples_1000.jsonl"


@pytest.fixture(scope="session")
def fixture_config_dict(fixture_dir) -> dict:
    return json.loads((fixture_dir / "config.json").read_text())
