"""Rule-based sentence splitting for tweets: terminal punctuation plus line boundaries."""

from __future__ import annotations

import re

_TERMINALS = re.compile(r"(?<=[.!?])\s+")
_ABBREVIATIONS = ("mr.", "mrs.", "ms.", "dr.", "sen.", "rep.", "gov.", "st.",
                  "u.s.", "d.c.", "vs.", "inc.", "no.")


def split_sentences(text: str) -> list[str]:
    """Split tweet text into sentence units; tweet lines never merge."""
    sentences: list[str] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        pieces = _TERMINALS.split(line)
        merged: list[str] = []
        for piece in pieces:
            piece = piece.strip()
            if not piece:
                continue
            if merged and merged[-1].lower().endswith(_ABBREVIATIONS):
                merged[-1] = merged[-1] + " " + piece
            else:
                merged.append(piece)
        sentences.extend(merged)
    return sentences
