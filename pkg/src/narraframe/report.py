"""TSV table and SVG figure emitters; all output is deterministic byte-for-byte."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .frameaxis import FrameComparison, FrameScore
from .geometry import Clustering, Projection
from .narrative_roles import CombinationDiff
from .overrepresentation import LogOddsResult, SharedTermRank

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5",
)


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def _clean_cell(text: str) -> str:
    return " ".join(str(text).split())


def write_tsv(path: str | Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(_clean_cell(c) for c in row) + "\n")


def write_logodds_tsv(result: LogOddsResult, path: str | Path) -> None:
    rows = [[r.token, _fmt(r.s), _fmt(r.z), str(r.f_i), str(r.f_j), str(r.f_bg)]
            for r in sorted(result.records, key=lambda r: (-r.z, r.token))]
    write_tsv(path, ["token", "s", "z", "f_i", "f_j", "f_bg"], rows)


def write_shared_terms_tsv(shared: list[SharedTermRank], path: str | Path,
                           name_i: str = "D", name_j: str = "R") -> None:
    rows = [[r.token, str(r.rank_i), str(r.rank_j), str(r.rank_bg), str(r.score)]
            for r in shared]
    write_tsv(path, ["token", f"rank_{name_i}", f"rank_{name_j}", "rank_bg", "min_rank"], rows)


def write_projection_tsv(projection: Projection, path: str | Path,
                         clustering: Clustering | None = None) -> None:
    header = ["token", "x", "y"] + (["cluster"] if clustering else [])
    rows = []
    for i, tok in enumerate(projection.labels):
        row = [tok, _fmt(projection.coords[i, 0]), _fmt(projection.coords[i, 1])]
        if clustering:
            row.append(str(clustering.assignment[tok]))
        rows.append(row)
    write_tsv(path, header, rows)


def write_frames_diff_tsv(a_over_b: list[FrameComparison], b_over_a: list[FrameComparison],
                          path: str | Path, name_a: str = "D", name_b: str = "R") -> None:
    header = ["favors", "frame", f"bias_{name_a}", f"intensity_{name_a}",
              f"bias_{name_b}", f"intensity_{name_b}", "intensity_diff"]
    rows = []
    for favors, comparisons in ((name_a, a_over_b), (name_b, b_over_a)):
        for c in comparisons:
            rows.append([favors, c.frame, _fmt(c.bias_a), _fmt(c.intensity_a),
                         _fmt(c.bias_b), _fmt(c.intensity_b), _fmt(c.intensity_diff)])
    write_tsv(path, header, rows)


def write_frame_scores_tsv(scores: list[FrameScore], path: str | Path) -> None:
    rows = [[s.doc_id, s.frame, _fmt(s.bias), _fmt(s.intensity)] for s in scores]
    write_tsv(path, ["doc_id", "frame", "bias", "intensity"], rows)


def write_top_tweets_tsv(rows: list[tuple[str, str, int, str, float, str]],
                         path: str | Path) -> None:
    """Rows are (party, frame, rank, doc_id, intensity, text)."""
    out = [[party, frame, str(rank), doc_id, _fmt(intensity), text]
           for party, frame, rank, doc_id, intensity, text in rows]
    write_tsv(path, ["party", "frame", "rank", "doc_id", "intensity", "text"], out)


def write_combinations_tsv(a_over_b: list[CombinationDiff], b_over_a: list[CombinationDiff],
                           path: str | Path, name_a: str = "D", name_b: str = "R") -> None:
    header = ["favors", "agent", "verb", "patient", f"count_{name_a}", f"count_{name_b}", "diff"]
    rows = []
    for favors, combos in ((name_a, a_over_b), (name_b, b_over_a)):
        for c in combos:
            rows.append([favors, c.agent, c.verb, c.patient,
                         str(c.count_a), str(c.count_b), str(c.diff)])
    write_tsv(path, header, rows)


def write_top_roles_tsv(per_party: dict[str, tuple[list, list]], path: str | Path) -> None:
    rows = []
    for party in sorted(per_party):
        agents, patients = per_party[party]
        for role, ranked in (("agent", agents), ("patient", patients)):
            for rank, (text, count) in enumerate(ranked, start=1):
                rows.append([party, role, str(rank), text, str(count)])
    write_tsv(path, ["party", "role", "rank", "text", "count"], rows)


def write_relationships_tsv(rows: list[tuple[str, str, str, str, int]],
                            path: str | Path) -> None:
    """Rows are (agent category, verb set name, patient, party, weight)."""
    out = [[agent, verb_set, patient, party, str(weight)]
           for agent, verb_set, patient, party, weight in rows]
    write_tsv(path, ["agent", "verb_set", "patient", "party", "weight"], out)


def emit_scatter_svg(projection: Projection, path: str | Path,
                     clustering: Clustering | None = None,
                     width: int = 860, height: int = 640, title: str = "") -> None:
    """Standalone scatter figure: one labeled circle per point, colored by cluster."""
    n = len(projection.labels)
    if n == 0:
        raise ValueError("cannot render an empty projection")
    coords = projection.coords
    margin = 50.0
    spans = []
    for axis in (0, 1):
        lo, hi = float(coords[:, axis].min()), float(coords[:, axis].max())
        if hi == lo:
            hi = lo + 1.0
        spans.append((lo, hi))
    (x_lo, x_hi), (y_lo, y_hi) = spans

    def sx(v: float) -> float:
        return margin + (v - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def sy(v: float) -> float:
        return height - margin - (v - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_fmt(width / 2)}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{escape(title)}</text>'
        )
    for i, tok in enumerate(projection.labels):
        cluster = clustering.assignment[tok] if clustering else 0
        color = PALETTE[cluster % len(PALETTE)]
        px, py = sx(float(coords[i, 0])), sy(float(coords[i, 1]))
        parts.append(
            f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="4" fill="{color}" fill-opacity="0.8"/>'
        )
        parts.append(
            f'<text x="{_fmt(px + 6)}" y="{_fmt(py + 4)}" font-family="sans-serif" '
            f'font-size="10" fill="#333333">{escape(tok)}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
