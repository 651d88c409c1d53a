"""CLI: read tweet records, run the labeler sentence by sentence, emit triple records."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .labeler import DEFAULT_MODEL, ModelLoadError, load_labeler
from .schema import validate_record
from .splitter import split_sentences

log = logging.getLogger("srl_adapter")

TWEET_REQUIRED = ("id", "party", "text")


def label_sentences(in_path: str | Path, out_path: str | Path,
                    model: str = DEFAULT_MODEL, batch_size: int = 32) -> dict:
    """Label every sentence of every tweet and write schema-valid triple records.

    Returns (and is the source of) the summary counts; the output file is
    written atomically and a sidecar manifest records the model identity.
    """
    labeler = load_labeler(model)
    in_path = Path(in_path)
    out_path = Path(out_path)
    counts = {"tweets": 0, "sentences": 0, "predicates": 0, "records": 0,
              "skipped_tweets": 0, "failed_sentences": 0}

    pending: list[tuple[str, str, int, str]] = []  # doc_id, party, sentence_idx, text
    lines: list[str] = []

    def flush() -> None:
        if not pending:
            return
        try:
            batched = labeler.label_batch([item[3] for item in pending])
        except Exception:
            # retry singly so one bad sentence cannot sink the whole batch
            batched = []
            for _, _, _, text in pending:
                try:
                    batched.append(labeler.label(text))
                except Exception as exc:
                    counts["failed_sentences"] += 1
                    log.warning("sentence failed: %s", exc)
                    batched.append([])
        for (doc_id, party, sentence_idx, _), predicates in zip(pending, batched):
            counts["predicates"] += len(predicates)
            for predicate in predicates:
                record = {
                    "doc_id": doc_id,
                    "party": party,
                    "sentence_idx": sentence_idx,
                    "verb": predicate.verb,
                    "verb_lemma": predicate.verb_lemma,
                }
                if predicate.agent is not None:
                    record["agent"] = predicate.agent
                if predicate.patient is not None:
                    record["patient"] = predicate.patient
                validate_record(record)
                lines.append(json.dumps(record, sort_keys=True))
                counts["records"] += 1
        pending.clear()

    with open(in_path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                tweet = json.loads(line)
            except json.JSONDecodeError:
                counts["skipped_tweets"] += 1
                continue
            if not isinstance(tweet, dict) or any(
                    not str(tweet.get(k, "")).strip() for k in TWEET_REQUIRED):
                counts["skipped_tweets"] += 1
                continue
            counts["tweets"] += 1
            doc_id = str(tweet["id"])
            party = str(tweet["party"]).upper()
            for sentence_idx, sentence in enumerate(split_sentences(str(tweet["text"]))):
                counts["sentences"] += 1
                pending.append((doc_id, party, sentence_idx, sentence))
                if len(pending) >= batch_size:
                    flush()
    flush()

    out_path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=out_path.parent, prefix=out_path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            for record_line in lines:
                fh.write(record_line + "\n")
        os.replace(tmp_name, out_path)
    except BaseException:
        os.unlink(tmp_name)
        raise

    manifest = {
        "model": labeler.name,
        "model_version": labeler.version,
        "adapter_version": __version__,
        "input": in_path.name,
        "counts": counts,
    }
    manifest_path = out_path.with_name(out_path.name + ".manifest.json")
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return counts


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(
        prog="srl-adapter",
        description="Label tweet sentences and emit Agent/verb/Patient triple records.")
    parser.add_argument("--in", dest="in_path", required=True, help="tweet record JSONL")
    parser.add_argument("--out", dest="out_path", required=True, help="triple record JSONL")
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--model", default=DEFAULT_MODEL)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")

    if args.batch_size < 1:
        parser.error("--batch-size must be >= 1")
    try:
        counts = label_sentences(args.in_path, args.out_path,
                                 model=args.model, batch_size=args.batch_size)
    except ModelLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(2)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)
    print(f"tweets={counts['tweets']} sentences={counts['sentences']} "
          f"predicates={counts['predicates']} records={counts['records']} "
          f"skipped={counts['skipped_tweets']}")


if __name__ == "__main__":
    main()
