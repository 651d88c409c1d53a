"""Microframe (antonym-axis) bias and intensity scoring over documents and corpora."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._stopwords import DEFAULT_STOPWORDS
from .corpus import CorpusPartition, Document
from .embedding import EmbeddingModel

log = logging.getLogger(__name__)

DEFAULT_TOP_FRAMES = 10
DEFAULT_TOP_TWEETS = 3


@dataclass(frozen=True, eq=False)
class Microframe:
    """An antonym pole pair and its axis vector (positive pole minus negative pole)."""

    pole_neg: str
    pole_pos: str
    axis: np.ndarray

    @property
    def label(self) -> str:
        return f"{self.pole_neg}---{self.pole_pos}"

    def swapped(self) -> "Microframe":
        return Microframe(pole_neg=self.pole_pos, pole_pos=self.pole_neg, axis=-self.axis)


@dataclass(frozen=True)
class FrameScore:
    doc_id: str
    frame: str
    bias: float
    intensity: float


@dataclass(frozen=True)
class BaselineBias:
    frame: str
    value: float


@dataclass(frozen=True)
class FrameComparison:
    frame: str
    bias_a: float
    intensity_a: float
    bias_b: float
    intensity_b: float

    @property
    def intensity_diff(self) -> float:
        return self.intensity_a - self.intensity_b


def microframe(pole_neg: str, pole_pos: str, model: EmbeddingModel) -> Microframe:
    if pole_neg == pole_pos:
        raise ValueError(f"microframe poles must differ: {pole_neg!r}")
    axis = model.vector(pole_pos) - model.vector(pole_neg)
    if not np.linalg.norm(axis) > 0.0:
        raise ValueError(f"zero-norm axis for poles {pole_neg!r}/{pole_pos!r}")
    return Microframe(pole_neg=pole_neg, pole_pos=pole_pos, axis=axis)


def load_microframes(path: str | Path, model: EmbeddingModel) -> tuple[list[Microframe], int]:
    """Read tab-separated antonym pairs, keeping those with both poles in vocabulary.

    Returns the microframes and the count of skipped pairs.
    """
    frames: list[Microframe] = []
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                skipped += 1
                continue
            neg, pos = parts[0].strip().lower(), parts[1].strip().lower()
            if neg == pos or neg not in model or pos not in model:
                skipped += 1
                continue
            axis = model.vector(pos) - model.vector(neg)
            if not np.linalg.norm(axis) > 0.0:
                skipped += 1
                continue
            frames.append(Microframe(pole_neg=neg, pole_pos=pos, axis=axis))
    if skipped:
        log.warning("load_microframes: skipped %d unusable pairs from %s", skipped, path)
    if not frames:
        raise ValueError(f"no usable antonym pairs in {path}")
    return frames, skipped


def word_contribution(v_w: np.ndarray, axis: np.ndarray) -> float:
    """Cosine between a word vector and a frame axis."""
    v_w = np.asarray(v_w, dtype=np.float64)
    axis = np.asarray(axis, dtype=np.float64)
    if v_w.shape != axis.shape:
        raise ValueError("word vector and axis dimensions differ")
    nw = np.linalg.norm(v_w)
    na = np.linalg.norm(axis)
    if nw == 0.0 or na == 0.0:
        raise ValueError("word_contribution requires nonzero-norm inputs")
    return float(np.dot(v_w, axis) / (nw * na))


def _resolve_stopwords(stopwords) -> frozenset[str]:
    if stopwords is None:
        return DEFAULT_STOPWORDS
    return frozenset(stopwords)


def _doc_term_arrays(doc: Document, model: EmbeddingModel,
                     stop: frozenset[str]) -> tuple[np.ndarray, np.ndarray]:
    counts: dict[int, int] = {}
    for tok in doc.tokens:
        if tok in stop:
            continue
        idx = model.index.get(tok)
        if idx is not None:
            counts[idx] = counts.get(idx, 0) + 1
    if not counts:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64)
    # Canonical index order makes scores exactly invariant to token order.
    idx = np.fromiter(sorted(counts.keys()), dtype=np.int64, count=len(counts))
    cnt = np.array([counts[i] for i in idx], dtype=np.float64)
    return idx, cnt


def _unit_axis(frame: Microframe) -> np.ndarray:
    return frame.axis / np.linalg.norm(frame.axis)


def contribution_matrix(model: EmbeddingModel, frames: list[Microframe]) -> np.ndarray:
    """Per-vocabulary-token contribution to each frame, shape (vocab, n_frames)."""
    axes = np.stack([_unit_axis(f) for f in frames], axis=1)
    return model.unit_vectors() @ axes


def document_bias(doc: Document, frame: Microframe, model: EmbeddingModel,
                  stopwords=None) -> float | None:
    """Count-weighted mean contribution of the document's scorable tokens.

    Returns None when no token is in vocabulary (score omitted, not zero).
    """
    idx, cnt = _doc_term_arrays(doc, model, _resolve_stopwords(stopwords))
    if idx.size == 0:
        return None
    contrib = model.unit_vectors()[idx] @ _unit_axis(frame)
    return float(np.dot(cnt, contrib) / cnt.sum())


def corpus_baseline_bias(background: CorpusPartition, frame: Microframe,
                         model: EmbeddingModel, stopwords=None) -> BaselineBias:
    """Token-count-weighted mean contribution pooled over the whole background corpus."""
    if not background.docs:
        raise ValueError("baseline bias requires a nonempty background corpus")
    stop = _resolve_stopwords(stopwords)
    unit_axis = _unit_axis(frame)
    num = 0.0
    den = 0.0
    unit = model.unit_vectors()
    for tok, count in background.term_counts.items():
        if tok in stop:
            continue
        idx = model.index.get(tok)
        if idx is None:
            continue
        num += count * float(unit[idx] @ unit_axis)
        den += count
    if den == 0.0:
        raise ValueError("background corpus has no in-vocabulary tokens")
    return BaselineBias(frame=frame.label, value=num / den)


def document_intensity(doc: Document, frame: Microframe, baseline: BaselineBias,
                       model: EmbeddingModel, stopwords=None) -> float | None:
    """Count-weighted second moment of contributions about the baseline bias."""
    idx, cnt = _doc_term_arrays(doc, model, _resolve_stopwords(stopwords))
    if idx.size == 0:
        return None
    contrib = model.unit_vectors()[idx] @ _unit_axis(frame)
    dev = contrib - baseline.value
    return float(np.dot(cnt, dev * dev) / cnt.sum())


def score_documents(corpus: CorpusPartition, frames: list[Microframe],
                    baselines: list[BaselineBias], model: EmbeddingModel,
                    stopwords=None) -> list[FrameScore]:
    """Bias and intensity for every (document, frame) pair with scorable tokens."""
    stop = _resolve_stopwords(stopwords)
    contrib = contribution_matrix(model, frames)
    base = np.array([b.value for b in baselines], dtype=np.float64)
    scores: list[FrameScore] = []
    for doc in corpus.docs:
        idx, cnt = _doc_term_arrays(doc, model, stop)
        if idx.size == 0:
            continue
        rows = contrib[idx]
        total = cnt.sum()
        bias = (cnt @ rows) / total
        dev = rows - base
        intensity = (cnt @ (dev * dev)) / total
        for f, frame in enumerate(frames):
            scores.append(FrameScore(doc_id=doc.id, frame=frame.label,
                                     bias=float(bias[f]), intensity=float(intensity[f])))
    return scores


def _corpus_means(corpus: CorpusPartition, frames: list[Microframe],
                  baselines: list[BaselineBias], model: EmbeddingModel,
                  stop: frozenset[str]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-frame mean bias/intensity with documents weighted equally; skipped docs omitted."""
    contrib = contribution_matrix(model, frames)
    base = np.array([b.value for b in baselines], dtype=np.float64)
    n_frames = len(frames)
    bias_sum = np.zeros(n_frames)
    intensity_sum = np.zeros(n_frames)
    scored = 0
    for doc in corpus.docs:
        idx, cnt = _doc_term_arrays(doc, model, stop)
        if idx.size == 0:
            continue
        rows = contrib[idx]
        total = cnt.sum()
        bias_sum += (cnt @ rows) / total
        dev = rows - base
        intensity_sum += (cnt @ (dev * dev)) / total
        scored += 1
    if scored == 0:
        raise ValueError(f"no scorable documents in corpus {corpus.name!r}")
    return bias_sum / scored, intensity_sum / scored, np.full(n_frames, scored)


def differential_microframes(corpus_a: CorpusPartition, corpus_b: CorpusPartition,
                             frames: list[Microframe], baselines: list[BaselineBias],
                             model: EmbeddingModel, k: int = DEFAULT_TOP_FRAMES,
                             stopwords=None) -> tuple[list[FrameComparison], list[FrameComparison]]:
    """Frames ranked by inter-corpus mean intensity difference, one list per direction."""
    if not corpus_a.docs or not corpus_b.docs:
        raise ValueError("differential_microframes requires nonempty corpora")
    stop = _resolve_stopwords(stopwords)
    bias_a, int_a, _ = _corpus_means(corpus_a, frames, baselines, model, stop)
    bias_b, int_b, _ = _corpus_means(corpus_b, frames, baselines, model, stop)
    comparisons = [
        FrameComparison(
            frame=frame.label,
            bias_a=float(bias_a[f]), intensity_a=float(int_a[f]),
            bias_b=float(bias_b[f]), intensity_b=float(int_b[f]),
        )
        for f, frame in enumerate(frames)
    ]
    a_over_b = sorted(comparisons, key=lambda c: (-c.intensity_diff, c.frame))[:k]
    b_over_a = sorted(comparisons, key=lambda c: (c.intensity_diff, c.frame))[:k]
    return a_over_b, b_over_a


def top_documents(corpus: CorpusPartition, frame: Microframe, baseline: BaselineBias,
                  model: EmbeddingModel, n: int = DEFAULT_TOP_TWEETS,
                  stopwords=None) -> list[Document]:
    """The n documents with the strongest intensity for a frame; ties break by document id."""
    if not corpus.docs:
        raise ValueError("top_documents requires a nonempty corpus")
    stop = _resolve_stopwords(stopwords)
    scored: list[tuple[float, str, Document]] = []
    for doc in corpus.docs:
        intensity = document_intensity(doc, frame, baseline, model, stopwords=stop)
        if intensity is not None:
            scored.append((intensity, doc.id, doc))
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [doc for _, _, doc in scored[:n]]
