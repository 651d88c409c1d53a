"""Log-odds term over-representation with an informative Dirichlet prior, plus dense-rank comparisons."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, replace

from .corpus import CorpusPartition

log = logging.getLogger(__name__)

DEFAULT_TOP_TERMS = 40


@dataclass(frozen=True)
class TokenOdds:
    token: str
    s: float
    z: float
    f_i: int
    f_j: int
    f_bg: int


@dataclass
class LogOddsResult:
    """Per-token log-odds records for a target/other corpus pair."""

    target_name: str
    other_name: str
    records: list[TokenOdds]

    def by_token(self) -> dict[str, TokenOdds]:
        return {r.token: r for r in self.records}


@dataclass
class TopTerms:
    tokens: list[str]
    short: bool = False


def log_odds(target: CorpusPartition, other: CorpusPartition,
             background: CorpusPartition) -> LogOddsResult:
    """Score every token of the two corpora by prior-smoothed log-odds ratio.

    Tokens whose smoothed frequency is zero on either side carry no signal and
    are dropped. Natural log throughout.
    """
    if background.total_tokens <= 0:
        raise ValueError("background corpus is empty; the Dirichlet prior is undefined")
    n_i = target.total_tokens
    n_j = other.total_tokens
    n_bg = background.total_tokens
    records = []
    for token in sorted(set(target.term_counts) | set(other.term_counts)):
        f_i = target.term_counts.get(token, 0)
        f_j = other.term_counts.get(token, 0)
        f_bg = background.term_counts.get(token, 0)
        if f_i + f_bg == 0 or f_j + f_bg == 0:
            continue
        s = (
            math.log((f_i + f_bg) / (n_i + n_bg - f_i + f_bg))
            - math.log((f_j + f_bg) / (n_j + n_bg - f_j + f_bg))
        )
        records.append(TokenOdds(token=token, s=s, z=0.0, f_i=f_i, f_j=f_j, f_bg=f_bg))
    result = LogOddsResult(target_name=target.name, other_name=other.name, records=records)
    return z_scores(result)


def z_scores(result: LogOddsResult) -> LogOddsResult:
    """Attach a z-score to each record, normalizing s by its estimated standard deviation."""
    scored = [
        replace(r, z=r.s / math.sqrt(1.0 / (r.f_i + r.f_bg) + 1.0 / (r.f_j + r.f_bg)))
        for r in result.records
    ]
    scored.sort(key=lambda r: (-r.z, r.token))
    return LogOddsResult(result.target_name, result.other_name, scored)


def top_terms(result: LogOddsResult, k: int = DEFAULT_TOP_TERMS,
              exclusions: frozenset[str] | set[str] = frozenset()) -> TopTerms:
    """Highest-z tokens minus an exclusion set (names, handles); ties break lexicographically."""
    if k < 1:
        raise ValueError("k must be >= 1")
    eligible = sorted(
        (r for r in result.records if r.token not in exclusions),
        key=lambda r: (-r.z, r.token),
    )
    tokens = [r.token for r in eligible[:k]]
    short = len(eligible) < k
    if short:
        log.warning("top_terms: only %d eligible tokens for k=%d", len(eligible), k)
    return TopTerms(tokens=tokens, short=short)


@dataclass(frozen=True)
class SharedTermRank:
    token: str
    rank_i: int
    rank_j: int
    rank_bg: int  # 0 when absent from background
    score: int    # min of the two topical dense ranks


def dense_ranks(counts: Counter | dict[str, int]) -> dict[str, int]:
    """Dense frequency ranks: most frequent token gets 1, equal counts share a rank, no gaps."""
    distinct = sorted({c for c in counts.values() if c > 0}, reverse=True)
    rank_of = {count: rank for rank, count in enumerate(distinct, start=1)}
    return {tok: rank_of[c] for tok, c in counts.items() if c > 0}


def dense_rank_shared_terms(freq_i: CorpusPartition, freq_j: CorpusPartition,
                            background: CorpusPartition, k: int) -> list[SharedTermRank]:
    """Terms prominent in both topical partitions, ordered by the better of their dense ranks.

    Background ranks ride along for context. Ties resolve by the worse rank,
    then lexicographically.
    """
    if not (len(freq_i) and len(freq_j) and len(background)):
        raise ValueError("dense_rank_shared_terms requires nonempty partitions")
    ranks_i = dense_ranks(freq_i.term_counts)
    ranks_j = dense_ranks(freq_j.term_counts)
    ranks_bg = dense_ranks(background.term_counts)
    shared = set(ranks_i) & set(ranks_j)
    rows = [
        SharedTermRank(
            token=tok,
            rank_i=ranks_i[tok],
            rank_j=ranks_j[tok],
            rank_bg=ranks_bg.get(tok, 0),
            score=min(ranks_i[tok], ranks_j[tok]),
        )
        for tok in shared
    ]
    rows.sort(key=lambda r: (r.score, max(r.rank_i, r.rank_j), r.token))
    return rows[:k]
