"""Triple record schema: validated before anything is written."""

from __future__ import annotations

REQUIRED_FIELDS = ("doc_id", "party", "sentence_idx", "verb", "verb_lemma")
OPTIONAL_ROLE_FIELDS = ("agent", "patient")


class SchemaError(ValueError):
    pass


def validate_record(record: dict) -> None:
    """Raise SchemaError unless the record honors the triple wire schema.

    agent/patient must be omitted entirely (never empty strings) when the
    labeler found no Arg0/Arg1 for the predicate.
    """
    if not isinstance(record, dict):
        raise SchemaError("record must be an object")
    unknown = set(record) - set(REQUIRED_FIELDS) - set(OPTIONAL_ROLE_FIELDS)
    if unknown:
        raise SchemaError(f"unknown fields: {sorted(unknown)}")
    for field in ("doc_id", "party", "verb", "verb_lemma"):
        value = record.get(field)
        if not isinstance(value, str) or not value.strip():
            raise SchemaError(f"{field} must be a nonempty string")
    if record["verb_lemma"] != record["verb_lemma"].lower():
        raise SchemaError("verb_lemma must be lowercase")
    idx = record.get("sentence_idx")
    if not isinstance(idx, int) or isinstance(idx, bool) or idx < 0:
        raise SchemaError("sentence_idx must be a non-negative integer")
    for field in OPTIONAL_ROLE_FIELDS:
        if field in record:
            value = record[field]
            if not isinstance(value, str) or not value.strip():
                raise SchemaError(f"{field}, when present, must be a nonempty string")
