"""In-corpus GloVe training, vector file IO, and cosine nearest-neighbor queries."""

from __future__ import annotations

import logging
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numba import njit

from .corpus import CorpusPartition

log = logging.getLogger(__name__)

DEFAULT_DIMENSION = 300
DEFAULT_EPOCHS = 500
DEFAULT_WINDOW = 10
DEFAULT_MIN_COUNT = 5


@dataclass(frozen=True)
class GloveHyper:
    x_max: float = 100.0
    alpha: float = 0.75
    learning_rate: float = 0.05
    seed: int = 1
    workers: int = 1


@dataclass
class CooccurrenceTable:
    """Sparse symmetric co-occurrence counts with 1/distance weighting."""

    vocabulary: dict[str, int]
    entries: dict[tuple[int, int], float]

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, token_a: str, token_b: str) -> float:
        ia = self.vocabulary.get(token_a)
        ib = self.vocabulary.get(token_b)
        if ia is None or ib is None:
            return 0.0
        return self.entries.get((ia, ib), 0.0)

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        keys = sorted(self.entries)
        rows = np.array([k[0] for k in keys], dtype=np.int64)
        cols = np.array([k[1] for k in keys], dtype=np.int64)
        vals = np.array([self.entries[k] for k in keys], dtype=np.float64)
        return rows, cols, vals


class EmbeddingModel:
    """token -> dense vector map; vectors are finite and share one dimension."""

    def __init__(self, tokens: list[str], vectors: np.ndarray, meta: dict | None = None):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(tokens):
            raise ValueError("vector matrix shape does not match token list")
        if len(tokens) == 0:
            raise ValueError("embedding vocabulary is empty")
        if not np.all(np.isfinite(vectors)):
            raise ValueError("embedding vectors contain NaN/Inf components")
        self.tokens = list(tokens)
        self.vectors = vectors
        self.dimension = vectors.shape[1]
        self.index = {tok: i for i, tok in enumerate(self.tokens)}
        self.meta = dict(meta or {})
        self._unit: np.ndarray | None = None

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def __len__(self) -> int:
        return len(self.tokens)

    def vector(self, token: str) -> np.ndarray:
        try:
            return self.vectors[self.index[token]]
        except KeyError:
            raise KeyError(f"token not in embedding vocabulary: {token!r}") from None

    def unit_vectors(self) -> np.ndarray:
        if self._unit is None:
            norms = np.linalg.norm(self.vectors, axis=1, keepdims=True)
            norms[norms == 0.0] = 1.0
            self._unit = self.vectors / norms
        return self._unit


def build_cooccurrence(corpus: CorpusPartition, window: int = DEFAULT_WINDOW,
                       min_count: int = DEFAULT_MIN_COUNT) -> CooccurrenceTable:
    """Accumulate symmetric windowed co-occurrence counts over a tokenized corpus.

    Each ordered in-window pair adds 1/distance; distances are measured over the
    min_count-filtered token sequence and documents never bridge.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    if not corpus.docs:
        raise ValueError("cannot build co-occurrence table from an empty corpus")
    kept = {tok for tok, c in corpus.term_counts.items() if c >= min_count}
    ordered = sorted(kept, key=lambda t: (-corpus.term_counts[t], t))
    vocab = {tok: i for i, tok in enumerate(ordered)}
    entries: dict[tuple[int, int], float] = {}
    for doc in corpus.docs:
        ids = [vocab[t] for t in doc.tokens if t in vocab]
        for pos in range(len(ids)):
            upper = min(pos + window, len(ids) - 1)
            for other in range(pos + 1, upper + 1):
                add = 1.0 / (other - pos)
                a, b = ids[pos], ids[other]
                entries[(a, b)] = entries.get((a, b), 0.0) + add
                entries[(b, a)] = entries.get((b, a), 0.0) + add
    if not entries:
        raise ValueError("no co-occurring in-vocabulary pairs (min_count too high?)")
    return CooccurrenceTable(vocabulary=vocab, entries=entries)


@njit(cache=True, nogil=True)
def _adagrad_sweep(rows, cols, logx, wf, order, W, Wt, b, bt, Gw, Gwt, Gb, Gbt, lr):
    total = 0.0
    d = W.shape[1]
    for oi in range(order.shape[0]):
        e = order[oi]
        i = rows[e]
        j = cols[e]
        diff = b[i] + bt[j] - logx[e]
        for c in range(d):
            diff += W[i, c] * Wt[j, c]
        f = wf[e]
        total += f * diff * diff
        fdiff = f * diff
        for c in range(d):
            gw = fdiff * Wt[j, c]
            gwt = fdiff * W[i, c]
            W[i, c] -= lr * gw / math.sqrt(Gw[i, c])
            Wt[j, c] -= lr * gwt / math.sqrt(Gwt[j, c])
            Gw[i, c] += gw * gw
            Gwt[j, c] += gwt * gwt
        b[i] -= lr * fdiff / math.sqrt(Gb[i])
        bt[j] -= lr * fdiff / math.sqrt(Gbt[j])
        Gb[i] += fdiff * fdiff
        Gbt[j] += fdiff * fdiff
    return total


@dataclass
class GloveParams:
    """Raw factor matrices and biases, exposed so the objective can be audited externally."""

    W: np.ndarray
    Wt: np.ndarray
    b: np.ndarray
    bt: np.ndarray


def _weight_factor(x: np.ndarray, x_max: float, alpha: float) -> np.ndarray:
    return np.minimum((x / x_max) ** alpha, 1.0)


def train_glove(cooc: CooccurrenceTable, d: int = DEFAULT_DIMENSION,
                epochs: int = DEFAULT_EPOCHS, hyper: GloveHyper = GloveHyper(),
                return_params: bool = False):
    """Fit vectors by AdaGrad on the weighted least-squares log-co-occurrence objective.

    Final vector per token is the sum of its two factor rows. Single-worker runs
    are deterministic for a fixed seed; extra workers apply unsynchronized
    updates and trade determinism for speed.
    """
    if len(cooc) == 0:
        raise ValueError("co-occurrence table is empty")
    if d < 2:
        raise ValueError("dimension must be >= 2")
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    vocab_size = len(cooc.vocabulary)
    rows, cols, vals = cooc.arrays()
    logx = np.log(vals)
    wf = _weight_factor(vals, hyper.x_max, hyper.alpha)

    rng = np.random.default_rng(hyper.seed)
    scale = 0.5 / (d + 1)
    W = rng.uniform(-scale, scale, size=(vocab_size, d))
    Wt = rng.uniform(-scale, scale, size=(vocab_size, d))
    b = rng.uniform(-scale, scale, size=vocab_size)
    bt = rng.uniform(-scale, scale, size=vocab_size)
    Gw = np.ones((vocab_size, d))
    Gwt = np.ones((vocab_size, d))
    Gb = np.ones(vocab_size)
    Gbt = np.ones(vocab_size)

    workers = max(1, hyper.workers)
    history: list[float] = []
    for epoch in range(epochs):
        order = rng.permutation(len(vals)).astype(np.int64)
        if workers == 1:
            loss = _adagrad_sweep(rows, cols, logx, wf, order, W, Wt, b, bt,
                                  Gw, Gwt, Gb, Gbt, hyper.learning_rate)
        else:
            shards = np.array_split(order, workers)
            losses = [0.0] * len(shards)

            def run(slot: int, shard: np.ndarray) -> None:
                losses[slot] = _adagrad_sweep(rows, cols, logx, wf, shard, W, Wt, b, bt,
                                              Gw, Gwt, Gb, Gbt, hyper.learning_rate)

            threads = [threading.Thread(target=run, args=(slot, shard))
                       for slot, shard in enumerate(shards)]
            for t in threads:
                t.start()
            for t in threads:
                t.join()
            loss = sum(losses)
        if not math.isfinite(loss):
            raise RuntimeError(
                f"non-finite training loss at epoch {epoch + 1} "
                f"(lr={hyper.learning_rate}, d={d}); lower the learning rate"
            )
        history.append(loss)
    log.info("glove: %d tokens, %d entries, %d epochs, loss %.4f -> %.4f",
             vocab_size, len(vals), epochs, history[0], history[-1])

    ordered = sorted(cooc.vocabulary, key=cooc.vocabulary.__getitem__)
    model = EmbeddingModel(ordered, W + Wt, meta={"loss_history": history, "seed": hyper.seed})
    if return_params:
        return model, GloveParams(W=W, Wt=Wt, b=b, bt=bt)
    return model


def save_embeddings(model: EmbeddingModel, path: str | Path) -> None:
    """Write the vector text format: one `token v1 ... vd` line per token, full float precision."""
    with open(path, "w", encoding="utf-8") as fh:
        for tok in model.tokens:
            vec = model.vectors[model.index[tok]]
            fh.write(tok + " " + " ".join(repr(float(v)) for v in vec) + "\n")


def load_embeddings(path: str | Path) -> EmbeddingModel:
    """Parse a vector text file; dimension is set by the first row and must hold throughout."""
    tokens: list[str] = []
    rows: list[list[float]] = []
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split(" ")
            if len(parts) < 2:
                raise ValueError(f"{path}: line {lineno}: no vector components")
            try:
                values = [float(p) for p in parts[1:]]
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise ValueError(
                    f"{path}: line {lineno}: expected {dim} components, found {len(values)}"
                )
            tokens.append(parts[0])
            rows.append(values)
    if not tokens:
        raise ValueError(f"{path}: empty vector file")
    return EmbeddingModel(tokens, np.array(rows, dtype=np.float64))


def nearest_neighbors(model: EmbeddingModel, query: str | np.ndarray,
                      k: int = 10) -> list[tuple[str, float]]:
    """Top-k vocabulary tokens by cosine similarity; a token query never returns itself."""
    if k < 1:
        raise ValueError("k must be >= 1")
    exclude = -1
    if isinstance(query, str):
        if query not in model:
            raise KeyError(f"token not in embedding vocabulary: {query!r}")
        exclude = model.index[query]
        qvec = model.vectors[exclude]
    else:
        qvec = np.asarray(query, dtype=np.float64)
        if qvec.shape != (model.dimension,):
            raise ValueError(f"query vector must have dimension {model.dimension}")
    norm = np.linalg.norm(qvec)
    if norm == 0.0:
        raise ValueError("query vector has zero norm")
    sims = model.unit_vectors() @ (qvec / norm)
    ranked = sorted(
        (i for i in range(len(model.tokens)) if i != exclude),
        key=lambda i: (-sims[i], model.tokens[i]),
    )
    return [(model.tokens[i], float(sims[i])) for i in ranked[:k]]


def expand_party_terms(model: EmbeddingModel, seeds: list[str], k: int = 20) -> list[str]:
    """Union of the seeds and each seed's top-k neighbors, ordered by best similarity."""
    best: dict[str, float] = {}
    usable = 0
    for seed in seeds:
        seed = seed.lower()
        if seed not in model:
            log.warning("expand_party_terms: seed %r not in vocabulary", seed)
            continue
        usable += 1
        best.setdefault(seed, math.inf)
        for tok, sim in nearest_neighbors(model, seed, k):
            if sim > best.get(tok, -math.inf):
                best[tok] = sim
    if not usable:
        raise ValueError("no seed token is in the embedding vocabulary")
    return sorted(best, key=lambda t: (-best[t], t))
