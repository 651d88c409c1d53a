"""Labeling backends: a deterministic shallow pattern labeler, plus loader hooks for external models."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .lemmas import AUXILIARIES, is_verb_form, lemmatize

DEFAULT_MODEL = "pattern-v1"

_TOKEN_RE = re.compile(r"[#@]\w+(?:['’\-]\w+)*|\w+(?:['’\-]\w+)*|[.,;:!?]")
_CLAUSE_BREAKS = frozenset({".", ",", ";", ":", "!", "?"})
_DETERMINERS = frozenset({"the", "a", "an", "this", "that", "these", "those",
                          "my", "our", "your", "their", "his", "her", "its", "no"})
_MODALS = frozenset({"will", "would", "can", "could", "shall", "should", "may",
                     "might", "must", "to"})
_FILLERS = frozenset({"and", "but", "or", "so", "then", "also", "still", "just",
                      "never", "always", "not", "now", "today", "tonight",
                      "please", "rt"})
_AGENT_TRIM = _FILLERS | _MODALS | frozenset(
    {"am", "is", "are", "was", "were", "be", "been", "being",
     "have", "has", "had", "do", "does", "did"})
_PATIENT_TRIM = _FILLERS | _MODALS


@dataclass(frozen=True)
class Predicate:
    verb: str
    verb_lemma: str
    agent: str | None
    patient: str | None


class ModelLoadError(RuntimeError):
    pass


class PatternLabeler:
    """Shallow subject-verb-object labeler.

    Within each clause, every lexical verb becomes a predicate; the span back to
    the clause start (or previous verb) is its agent, the span forward to the
    next verb or clause end its patient. Auxiliary chains collapse onto the
    lexical head, and a verb form directly following another verb is read as its
    object ("save lives"). Deterministic; version bumps whenever rules change.
    """

    name = "pattern"
    version = "1"

    def label(self, sentence: str) -> list[Predicate]:
        tokens = [t.lower() for t in _TOKEN_RE.findall(sentence)]
        n = len(tokens)
        verb_at = [False] * n
        for i, tok in enumerate(tokens):
            if tok in _CLAUSE_BREAKS or tok.startswith(("#", "@")):
                continue
            if not is_verb_form(tok):
                continue
            # determiner right before -> noun usage ("the fight", "our work")
            if i > 0 and tokens[i - 1] in _DETERMINERS:
                continue
            verb_at[i] = True
        # be/have/do forms attach to a following lexical verb within two tokens
        for i in range(n):
            if not verb_at[i] or tokens[i] not in AUXILIARIES:
                continue
            if any(verb_at[j] for j in range(i + 1, min(i + 3, n))):
                verb_at[i] = False
        # a verb form right after a verb is its object ("save lives", "stop testing")
        for i in range(1, n):
            if verb_at[i] and verb_at[i - 1]:
                verb_at[i] = False

        predicates: list[Predicate] = []
        clause_start = 0
        previous_verb: int | None = None
        for i in range(n + 1):
            if i == n or tokens[i] in _CLAUSE_BREAKS:
                clause_start = i + 1
                previous_verb = None
                continue
            if not verb_at[i]:
                continue
            agent_lo = clause_start if previous_verb is None else previous_verb + 1
            agent = _trim_span(tokens, agent_lo, i, _AGENT_TRIM)
            patient_hi = i + 1
            while patient_hi < n and not verb_at[patient_hi] \
                    and tokens[patient_hi] not in _CLAUSE_BREAKS:
                patient_hi += 1
            patient = _trim_span(tokens, i + 1, patient_hi, _PATIENT_TRIM)
            predicates.append(Predicate(
                verb=tokens[i], verb_lemma=lemmatize(tokens[i]),
                agent=agent or None, patient=patient or None))
            previous_verb = i
        return predicates

    def label_batch(self, sentences: list[str]) -> list[list[Predicate]]:
        return [self.label(s) for s in sentences]


def _trim_span(tokens: list[str], lo: int, hi: int, trim: frozenset[str]) -> str:
    span = tokens[lo:hi]
    while span and span[0] in trim:
        span = span[1:]
    while span and span[-1] in trim:
        span = span[:-1]
    return " ".join(span)


def load_labeler(model: str = DEFAULT_MODEL):
    """Resolve a model name to a labeler instance.

    `pattern-v1` is built in; `allennlp:<archive>` requires the allennlp runtime
    and fails with a clear message when it is not installed.
    """
    if model == DEFAULT_MODEL:
        return PatternLabeler()
    if model.startswith("allennlp:"):
        try:
            import allennlp  # noqa: F401
        except ImportError as exc:
            raise ModelLoadError(
                f"model {model!r} requires the allennlp package, which is not "
                f"installed in this environment") from exc
        raise ModelLoadError(
            f"allennlp backend stub: install allennlp_models and wire the archive "
            f"{model.split(':', 1)[1]!r} here")
    raise ModelLoadError(
        f"unknown model {model!r}; available: {DEFAULT_MODEL}, allennlp:<archive>")
