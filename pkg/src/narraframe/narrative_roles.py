"""Agent-verb-Patient triple aggregation, differential tables, and us/them categorization."""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

log = logging.getLogger(__name__)

DEFAULT_MAX_ROLE_TOKENS = 3
DEFAULT_TOP_VERBS = 100

US_TERMS = ("i", "we", "us", "our", "ours")
THEM_TERMS = ("they", "their", "them")
LEADING_ARTICLES = ("the", "a", "an")


class MembershipCategory(Enum):
    US = "us"
    THEM = "them"
    OTHER_PARTY = "other_party"
    OTHER = "other"


@dataclass(frozen=True)
class RoleTriple:
    doc_id: str
    party: str
    agent: str
    verb_lemma: str
    patient: str
    agent_token_count: int
    patient_token_count: int
    verb: str = ""
    sentence_idx: int = 0


@dataclass(frozen=True)
class CombinationDiff:
    agent: str
    verb: str
    patient: str
    count_a: int
    count_b: int

    @property
    def diff(self) -> int:
        return self.count_a - self.count_b


def load_triples(path: str | Path) -> list[RoleTriple]:
    """Load the line-delimited JSON triple records, lowercased, with derived token counts.

    Records failing the schema, or lacking an agent or patient, are counted and
    skipped.
    """
    path = Path(path)
    triples: list[RoleTriple] = []
    invalid = 0
    incomplete = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                invalid += 1
                continue
            if not isinstance(rec, dict) or any(
                not str(rec.get(k, "")).strip() for k in ("doc_id", "party", "verb", "verb_lemma")
            ):
                invalid += 1
                continue
            agent = str(rec.get("agent", "")).strip().lower()
            patient = str(rec.get("patient", "")).strip().lower()
            if not agent or not patient:
                incomplete += 1
                continue
            triples.append(RoleTriple(
                doc_id=str(rec["doc_id"]),
                party=str(rec["party"]).upper(),
                agent=agent,
                verb_lemma=str(rec["verb_lemma"]).strip().lower(),
                patient=patient,
                agent_token_count=len(agent.split()),
                patient_token_count=len(patient.split()),
                verb=str(rec["verb"]).strip().lower(),
                sentence_idx=int(rec.get("sentence_idx", 0)),
            ))
    if invalid or incomplete:
        log.warning("load_triples %s: skipped %d invalid, %d incomplete records",
                    path.name, invalid, incomplete)
    return triples


def filter_triples(triples: list[RoleTriple],
                   max_tokens: int = DEFAULT_MAX_ROLE_TOKENS) -> list[RoleTriple]:
    """Keep triples whose agent and patient each have at most max_tokens tokens."""
    if max_tokens < 1:
        raise ValueError("max_tokens must be >= 1")
    return [t for t in triples
            if t.agent_token_count <= max_tokens and t.patient_token_count <= max_tokens]


def combination_frequencies(triples: list[RoleTriple]) -> Counter:
    """Exact multiset counts of (agent, verb_lemma, patient) combinations."""
    return Counter((t.agent, t.verb_lemma, t.patient) for t in triples)


def differential_combinations(counts_a: Counter, counts_b: Counter, k: int
                              ) -> tuple[list[CombinationDiff], list[CombinationDiff]]:
    """Top-k combinations by count difference in each direction.

    Ties break by total count (higher first), then lexicographically.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    keys = set(counts_a) | set(counts_b)
    rows = [
        CombinationDiff(agent=a, verb=v, patient=p,
                        count_a=counts_a.get((a, v, p), 0),
                        count_b=counts_b.get((a, v, p), 0))
        for (a, v, p) in keys
    ]
    a_over_b = sorted(rows, key=lambda r: (-r.diff, -(r.count_a + r.count_b),
                                           r.agent, r.verb, r.patient))[:k]
    b_over_a = sorted(rows, key=lambda r: (r.diff, -(r.count_a + r.count_b),
                                           r.agent, r.verb, r.patient))[:k]
    return a_over_b, b_over_a


def top_agents_patients(triples: list[RoleTriple], n: int
                        ) -> tuple[list[tuple[str, int]], list[tuple[str, int]]]:
    """The n most frequent agents and patients; ties break lexicographically."""
    if n < 1:
        raise ValueError("n must be >= 1")
    agents = Counter(t.agent for t in triples)
    patients = Counter(t.patient for t in triples)

    def ranked(counts: Counter) -> list[tuple[str, int]]:
        return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:n]

    return ranked(agents), ranked(patients)


def _contains_term(agent_tokens: tuple[str, ...], term: str) -> bool:
    term_tokens = tuple(term.split())
    if not term_tokens:
        return False
    span = len(term_tokens)
    return any(agent_tokens[i:i + span] == term_tokens
               for i in range(len(agent_tokens) - span + 1))


def categorize_memberships(triples: list[RoleTriple], us_terms=US_TERMS,
                           them_terms=THEM_TERMS, other_party_terms=()
                           ) -> list[tuple[RoleTriple, MembershipCategory]]:
    """Tag each triple's agent as us / them / other-party / other.

    us and them require an exact agent match; other-party matches a configured
    term as a contiguous token run inside the agent. Precedence: us, them,
    other-party.
    """
    us = frozenset(t.lower() for t in us_terms)
    them = frozenset(t.lower() for t in them_terms)
    party_terms = tuple(t.lower() for t in other_party_terms)
    tagged = []
    for triple in triples:
        agent_tokens = tuple(triple.agent.split())
        if triple.agent in us:
            category = MembershipCategory.US
        elif triple.agent in them:
            category = MembershipCategory.THEM
        elif any(_contains_term(agent_tokens, term) for term in party_terms):
            category = MembershipCategory.OTHER_PARTY
        else:
            category = MembershipCategory.OTHER
        tagged.append((triple, category))
    return tagged


def merge_patient(patient: str, merge_map: dict[str, str] | None = None) -> str:
    """Normalization used only for the relationship tables: strip a leading article, then merge."""
    tokens = patient.split()
    if len(tokens) > 1 and tokens[0] in LEADING_ARTICLES:
        patient = " ".join(tokens[1:])
    if merge_map:
        patient = merge_map.get(patient, patient)
    return patient


def patients_for_verbset(tagged: list[tuple[RoleTriple, MembershipCategory]],
                         verbs, category: MembershipCategory, n: int,
                         merge_map: dict[str, str] | None = None
                         ) -> dict[str, list[tuple[str, int]]]:
    """Per-party top-n patients for triples whose verb is in the set and whose agent matches the category."""
    verbs = frozenset(v.lower() for v in verbs)
    if not verbs:
        raise ValueError("verb set must be nonempty")
    per_party: dict[str, Counter] = {}
    for triple, cat in tagged:
        if cat is not category or triple.verb_lemma not in verbs:
            continue
        patient = merge_patient(triple.patient, merge_map)
        per_party.setdefault(triple.party, Counter())[patient] += 1
    return {
        party: sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:n]
        for party, counts in sorted(per_party.items())
    }


def top_verbs(triples: list[RoleTriple], n: int = DEFAULT_TOP_VERBS) -> list[str]:
    """The n most frequent verb lemmas; ties break lexicographically."""
    if n < 1:
        raise ValueError("n must be >= 1")
    counts = Counter(t.verb_lemma for t in triples)
    return [v for v, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:n]]
