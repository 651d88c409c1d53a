"""Tweet ingestion, tokenization, topic-token normalization, and corpus partitioning."""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

log = logging.getLogger(__name__)

PARTIES = ("D", "R")
CHAMBERS = ("senate", "house", "governor", "president", "other")

REQUIRED_FIELDS = ("id", "author", "party", "chamber", "timestamp", "lang", "text", "is_retweet")

DEFAULT_TOPIC_KEYWORDS = ("covid", "coronavirus")
CANONICAL_TOPIC_TOKEN = "covid"

_URL_RE = re.compile(r"(?:https?://\S+|www\.\S+)", re.IGNORECASE)
# Pictographs, transport, symbols, flags, dingbats, variation selectors.
_EMOJI_RE = re.compile(
    "["
    "\U0001f000-\U0001fbff"
    "\U00002600-\U000027bf"
    "\U0001f1e6-\U0001f1ff"
    "⬀-⯿"
    "︎️‍"
    "]+"
)
# Hashtags and mentions stay whole; other tokens are word runs with internal
# hyphens/apostrophes kept ("covid-19", "don't").
_TOKEN_RE = re.compile(r"[#@]\w+(?:['’\-]\w+)*|\w+(?:['’\-]\w+)*")


@dataclass(frozen=True)
class Document:
    """One tweet with author/party metadata and its token list."""

    id: str
    author: str
    party: str
    chamber: str
    timestamp: str
    lang: str
    text: str
    is_retweet: bool
    tokens: tuple[str, ...]


@dataclass
class CorpusPartition:
    """A named bag of documents with cached term statistics."""

    name: str
    docs: list[Document]
    term_counts: Counter = field(default_factory=Counter)
    total_tokens: int = 0
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_docs(cls, name: str, docs: list[Document], meta: dict | None = None) -> "CorpusPartition":
        counts: Counter = Counter()
        for doc in docs:
            counts.update(doc.tokens)
        return cls(
            name=name,
            docs=list(docs),
            term_counts=counts,
            total_tokens=sum(counts.values()),
            meta=dict(meta or {}),
        )

    def __len__(self) -> int:
        return len(self.docs)


def tokenize(text: str) -> list[str]:
    """Lowercase and split text into tokens.

    URLs and emoji are removed, ``#hashtag`` / ``@mention`` survive as single
    tokens, punctuation is stripped elsewhere, and intra-word hyphens and
    apostrophes are kept so "covid-19" stays whole.
    """
    if not text:
        return []
    cleaned = _URL_RE.sub(" ", text)
    cleaned = _EMOJI_RE.sub(" ", cleaned)
    return _TOKEN_RE.findall(cleaned.lower())


def normalize_topic_tokens(tokens: list[str], keywords=DEFAULT_TOPIC_KEYWORDS) -> list[str]:
    """Replace every token containing a topic keyword with the canonical topic token.

    Matching is case-insensitive substring containment; order and length are
    preserved and the operation is idempotent.
    """
    if not keywords:
        raise ValueError("topic keyword set must be nonempty")
    lowered = tuple(k.lower() for k in keywords)
    return [
        CANONICAL_TOPIC_TOKEN if any(k in tok.lower() for k in lowered) else tok
        for tok in tokens
    ]


def _valid_timestamp(value: str) -> bool:
    try:
        datetime.fromisoformat(str(value).replace("Z", "+00:00"))
        return True
    except ValueError:
        return False


def ingest_tweets(path: str | Path, normalize_topics: bool = True,
                  topic_keywords=DEFAULT_TOPIC_KEYWORDS) -> CorpusPartition:
    """Load a line-delimited JSON tweet file into a corpus partition.

    Keeps records whose lang tag begins with "en"; malformed lines and records
    with missing required fields are counted and skipped. Raises if the file is
    unreadable or no valid record remains.
    """
    path = Path(path)
    docs: list[Document] = []
    seen_ids: set[str] = set()
    stats = Counter(lines=0, malformed=0, missing_fields=0, non_english=0,
                    duplicate_id=0, empty_text=0)
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            stats["lines"] += 1
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                stats["malformed"] += 1
                continue
            if not isinstance(record, dict) or any(record.get(k) is None for k in REQUIRED_FIELDS):
                stats["missing_fields"] += 1
                continue
            if not _valid_timestamp(record["timestamp"]):
                stats["missing_fields"] += 1
                continue
            if not str(record["lang"]).lower().startswith("en"):
                stats["non_english"] += 1
                continue
            doc_id = str(record["id"])
            if not doc_id or doc_id in seen_ids:
                stats["duplicate_id"] += 1
                continue
            tokens = tokenize(str(record["text"]))
            if normalize_topics:
                tokens = normalize_topic_tokens(tokens, topic_keywords)
            if not tokens:
                stats["empty_text"] += 1
                continue
            seen_ids.add(doc_id)
            docs.append(Document(
                id=doc_id,
                author=str(record["author"]),
                party=str(record["party"]).upper(),
                chamber=str(record["chamber"]).lower(),
                timestamp=str(record["timestamp"]),
                lang=str(record["lang"]),
                text=str(record["text"]),
                is_retweet=bool(record["is_retweet"]),
                tokens=tuple(tokens),
            ))
    skipped = stats["lines"] - len(docs)
    if skipped:
        log.warning("ingest %s: skipped %d of %d lines (%s)", path.name, skipped,
                    stats["lines"], dict(stats))
    if not docs:
        raise ValueError(f"no valid tweet records in {path}")
    return CorpusPartition.from_docs(path.stem, docs, meta=dict(stats))


def filter_topic(corpus: CorpusPartition, keywords=DEFAULT_TOPIC_KEYWORDS
                 ) -> tuple[CorpusPartition, CorpusPartition]:
    """Split a corpus into (topical, background) by case-insensitive keyword presence in raw text."""
    if not keywords:
        raise ValueError("topic keyword set must be nonempty")
    lowered = tuple(k.lower() for k in keywords)
    topical, background = [], []
    for doc in corpus.docs:
        text = doc.text.lower()
        (topical if any(k in text for k in lowered) else background).append(doc)
    return (
        CorpusPartition.from_docs(f"{corpus.name}_topical", topical),
        CorpusPartition.from_docs(f"{corpus.name}_background", background),
    )


def partition_by_party(corpus: CorpusPartition) -> dict[str, CorpusPartition]:
    """Split a corpus by party tag; documents outside the two-party set are excluded with a warning."""
    by_party: dict[str, list[Document]] = {p: [] for p in PARTIES}
    excluded = 0
    for doc in corpus.docs:
        if doc.party in by_party:
            by_party[doc.party].append(doc)
        else:
            excluded += 1
    if excluded:
        log.warning("partition_by_party: excluded %d documents with unknown party", excluded)
    return {
        party: CorpusPartition.from_docs(f"{corpus.name}_{party}", docs)
        for party, docs in by_party.items()
    }
