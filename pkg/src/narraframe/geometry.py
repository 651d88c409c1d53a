"""2-D projection of embedding vectors (UMAP-style) and k-means clustering."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.optimize import curve_fit

log = logging.getLogger(__name__)

DEFAULT_VERB_CLUSTERS = 15


@dataclass(frozen=True)
class UmapParams:
    n_neighbors: int = 15
    min_dist: float = 0.1
    epochs: int = 200
    seed: int = 42
    spread: float = 1.0
    negative_sample_rate: int = 5
    repulsion_strength: float = 1.0
    learning_rate: float = 1.0


@dataclass(frozen=True)
class KmeansParams:
    restarts: int = 8
    max_iter: int = 100
    seed: int = 0


@dataclass
class Projection:
    labels: list[str]
    coords: np.ndarray
    params: UmapParams


@dataclass
class Clustering:
    labels: list[str]
    assignment: dict[str, int]
    centroids: np.ndarray
    inertia: float
    inertia_history: list[float] = field(default_factory=list)

    @property
    def cluster_ids(self) -> np.ndarray:
        return np.array([self.assignment[lab] for lab in self.labels], dtype=np.int64)


def _check_labeled(labels, vectors) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[0] != len(labels):
        raise ValueError("labels and vector rows must correspond one-to-one")
    if len(set(labels)) != len(labels):
        raise ValueError("labels must be unique")
    if not np.all(np.isfinite(vectors)):
        raise ValueError("vectors contain NaN/Inf")
    return vectors


def _pairwise_sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Broadcast form keeps exactness for the planted-blob tests; inputs here are small.
    diff = a[:, None, :] - b[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _knn(vectors: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    n = vectors.shape[0]
    knn_idx = np.empty((n, k), dtype=np.int64)
    knn_dist = np.empty((n, k), dtype=np.float64)
    chunk = 1024
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        d2 = _pairwise_sq_dists(vectors[start:stop], vectors)
        for local, i in enumerate(range(start, stop)):
            order = np.argsort(d2[local], kind="stable")
            order = order[order != i][:k]
            knn_idx[i] = order
            knn_dist[i] = np.sqrt(d2[local][order])
    return knn_idx, knn_dist


def _smooth_knn(knn_dist: np.ndarray, n_iter: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Per-point connectivity radius rho and bandwidth sigma matching log2(k) total membership."""
    n, k = knn_dist.shape
    target = np.log2(k)
    rho = np.zeros(n)
    sigma = np.zeros(n)
    for i in range(n):
        row = knn_dist[i]
        positive = row[row > 0.0]
        rho[i] = positive[0] if positive.size else 0.0
        lo, hi, mid = 0.0, np.inf, 1.0
        for _ in range(n_iter):
            psum = np.exp(-np.maximum(row - rho[i], 0.0) / mid).sum()
            if abs(psum - target) < 1e-5:
                break
            if psum > target:
                hi = mid
                mid = (lo + hi) / 2.0
            else:
                lo = mid
                mid = mid * 2.0 if hi == np.inf else (lo + hi) / 2.0
        sigma[i] = max(mid, 1e-3 * row.mean()) if row.mean() > 0 else 1.0
    return rho, sigma


def _fuzzy_graph(knn_idx: np.ndarray, knn_dist: np.ndarray,
                 rho: np.ndarray, sigma: np.ndarray) -> dict[tuple[int, int], float]:
    directed: dict[tuple[int, int], float] = {}
    n, k = knn_idx.shape
    for i in range(n):
        for col in range(k):
            j = int(knn_idx[i, col])
            w = float(np.exp(-max(knn_dist[i, col] - rho[i], 0.0) / sigma[i]))
            directed[(i, j)] = w
    # Probabilistic union: W + Wt - W*Wt, stored symmetrically.
    combined: dict[tuple[int, int], float] = {}
    for (i, j), w in directed.items():
        if (j, i) in combined:
            continue
        w_t = directed.get((j, i), 0.0)
        val = w + w_t - w * w_t
        combined[(i, j)] = val
        combined[(j, i)] = val
    return combined


def _fit_curve(min_dist: float, spread: float) -> tuple[float, float]:
    """Fit the differentiable low-dimensional similarity curve 1/(1 + a d^{2b})."""
    xs = np.linspace(0.0, 3.0 * spread, 300)
    ys = np.where(xs < min_dist, 1.0, np.exp(-(xs - min_dist) / spread))
    (a, b), _ = curve_fit(lambda x, a, b: 1.0 / (1.0 + a * x ** (2.0 * b)), xs, ys,
                          p0=(1.0, 1.0), maxfev=10_000)
    return float(a), float(b)


def _pca_init(vectors: np.ndarray, seed: int) -> np.ndarray:
    centered = vectors - vectors.mean(axis=0, keepdims=True)
    u, s, _ = np.linalg.svd(centered, full_matrices=False)
    coords = u[:, :2] * s[:2]
    if coords.shape[1] < 2:
        coords = np.hstack([coords, np.zeros((coords.shape[0], 2 - coords.shape[1]))])
    max_abs = np.abs(coords).max()
    if max_abs == 0.0:
        return np.random.default_rng(seed).normal(0.0, 1.0, size=(vectors.shape[0], 2))
    return np.ascontiguousarray(coords * (10.0 / max_abs))


@njit(cache=True, nogil=True)
def _clip(val):
    if val > 4.0:
        return 4.0
    if val < -4.0:
        return -4.0
    return val


@njit(cache=True, nogil=True)
def _optimize_layout(coords, head, tail, eps, n_epochs, a, b, gamma,
                     neg_rate, init_alpha, seed):
    np.random.seed(seed)
    n = coords.shape[0]
    n_edges = head.shape[0]
    eps_neg = eps / neg_rate
    next_sample = eps.copy()
    next_neg = eps_neg.copy()
    for epoch in range(n_epochs):
        alpha = init_alpha * (1.0 - epoch / n_epochs)
        for e in range(n_edges):
            if next_sample[e] > epoch:
                continue
            i = head[e]
            j = tail[e]
            d2 = 0.0
            for c in range(2):
                diff = coords[i, c] - coords[j, c]
                d2 += diff * diff
            if d2 > 0.0:
                coef = (-2.0 * a * b * d2 ** (b - 1.0)) / (a * d2 ** b + 1.0)
                for c in range(2):
                    g = _clip(coef * (coords[i, c] - coords[j, c]))
                    coords[i, c] += alpha * g
                    coords[j, c] -= alpha * g
            next_sample[e] += eps[e]
            n_neg = int((epoch - next_neg[e]) / eps_neg[e])
            for _ in range(n_neg):
                other = np.random.randint(0, n)
                d2 = 0.0
                for c in range(2):
                    diff = coords[i, c] - coords[other, c]
                    d2 += diff * diff
                if d2 > 0.0:
                    coef = (2.0 * gamma * b) / ((0.001 + d2) * (a * d2 ** b + 1.0))
                elif other == j:
                    continue
                else:
                    coef = 0.0
                for c in range(2):
                    if coef > 0.0:
                        g = _clip(coef * (coords[i, c] - coords[other, c]))
                    else:
                        g = 4.0
                    coords[i, c] += alpha * g
            next_neg[e] += n_neg * eps_neg[e]
    return coords


def project_umap(labels: list[str], vectors: np.ndarray,
                 params: UmapParams = UmapParams()) -> Projection:
    """Project labeled vectors to 2-D.

    Pipeline: exact kNN graph, smoothed fuzzy memberships, symmetrization, then
    a negative-sampled stochastic layout seeded from PCA. Deterministic for a
    fixed seed.
    """
    vectors = _check_labeled(labels, vectors)
    n = vectors.shape[0]
    if n < params.n_neighbors + 1:
        raise ValueError(
            f"need at least n_neighbors+1={params.n_neighbors + 1} points, got {n}"
        )
    if params.epochs < 1:
        raise ValueError("epochs must be >= 1")
    knn_idx, knn_dist = _knn(vectors, params.n_neighbors)
    rho, sigma = _smooth_knn(knn_dist)
    graph = _fuzzy_graph(knn_idx, knn_dist, rho, sigma)

    w_max = max(graph.values())
    floor = w_max / params.epochs
    edges = sorted((i, j, w) for (i, j), w in graph.items() if w >= floor)
    head = np.array([e[0] for e in edges], dtype=np.int64)
    tail = np.array([e[1] for e in edges], dtype=np.int64)
    weights = np.array([e[2] for e in edges], dtype=np.float64)
    eps = w_max / weights  # epochs between samples of each edge

    a, b = _fit_curve(params.min_dist, params.spread)
    coords = _pca_init(vectors, params.seed)
    coords = _optimize_layout(coords, head, tail, eps, params.epochs, a, b,
                              params.repulsion_strength, float(params.negative_sample_rate),
                              params.learning_rate, params.seed)
    if not np.all(np.isfinite(coords)):
        raise RuntimeError("projection diverged to non-finite coordinates")
    return Projection(labels=list(labels), coords=coords, params=params)


def kmeans(labels: list[str], vectors: np.ndarray, k: int,
           params: KmeansParams = KmeansParams()) -> Clustering:
    """Best-of-restarts Lloyd clustering with greedy farthest-point seeding."""
    vectors = _check_labeled(labels, vectors)
    n = vectors.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < k:
        raise ValueError(f"cannot split {n} points into {k} clusters")
    best: tuple[float, np.ndarray, np.ndarray, list[float]] | None = None
    rng = np.random.default_rng(params.seed)
    for _ in range(max(1, params.restarts)):
        first = int(rng.integers(n))
        inertia, assign, centroids, history = _lloyd(vectors, k, first, params.max_iter)
        if best is None or inertia < best[0]:
            best = (inertia, assign, centroids, history)
    inertia, assign, centroids, history = best
    return Clustering(
        labels=list(labels),
        assignment={lab: int(assign[i]) for i, lab in enumerate(labels)},
        centroids=centroids,
        inertia=float(inertia),
        inertia_history=history,
    )


def _farthest_point_seed(vectors: np.ndarray, k: int, first: int) -> np.ndarray:
    chosen = [first]
    min_d2 = _pairwise_sq_dists(vectors, vectors[[first]])[:, 0]
    for _ in range(1, k):
        nxt = int(np.argmax(min_d2))
        chosen.append(nxt)
        d2 = _pairwise_sq_dists(vectors, vectors[[nxt]])[:, 0]
        min_d2 = np.minimum(min_d2, d2)
    return vectors[chosen].copy()


def _lloyd(vectors: np.ndarray, k: int, first: int, max_iter: int):
    centroids = _farthest_point_seed(vectors, k, first)
    assign = np.full(vectors.shape[0], -1, dtype=np.int64)
    history: list[float] = []
    for _ in range(max_iter):
        d2 = _pairwise_sq_dists(vectors, centroids)
        new_assign = np.argmin(d2, axis=1)
        inertia = float(d2[np.arange(len(vectors)), new_assign].sum())
        # Re-seed any emptied cluster with the point farthest from its centroid.
        for cluster in range(k):
            if not np.any(new_assign == cluster):
                victim = int(np.argmax(d2[np.arange(len(vectors)), new_assign]))
                centroids[cluster] = vectors[victim]
                new_assign[victim] = cluster
                d2 = _pairwise_sq_dists(vectors, centroids)
                inertia = float(d2[np.arange(len(vectors)), new_assign].sum())
        history.append(inertia)
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for cluster in range(k):
            centroids[cluster] = vectors[assign == cluster].mean(axis=0)
    d2 = _pairwise_sq_dists(vectors, centroids)
    final_inertia = float(d2[np.arange(len(vectors)), assign].sum())
    history.append(final_inertia)
    return final_inertia, assign, centroids, history


def trustworthiness(high: np.ndarray, projection: Projection | np.ndarray, k: int) -> float:
    """Penalty-based score in [0, 1] for low-dimensional neighbors that are not high-dimensional ones."""
    high = np.asarray(high, dtype=np.float64)
    low = projection.coords if isinstance(projection, Projection) else np.asarray(projection)
    n = high.shape[0]
    if low.shape[0] != n:
        raise ValueError("high- and low-dimensional point counts differ")
    if k < 1 or k >= n / 2.0:
        raise ValueError(f"k must satisfy 1 <= k < N/2 (k={k}, N={n})")
    d_high = _pairwise_sq_dists(high, high)
    d_low = _pairwise_sq_dists(low, low)
    penalty = 0.0
    for i in range(n):
        order_high = np.argsort(d_high[i], kind="stable")
        order_high = order_high[order_high != i]
        rank_high = np.empty(n, dtype=np.int64)
        rank_high[order_high] = np.arange(1, n)
        order_low = np.argsort(d_low[i], kind="stable")
        order_low = order_low[order_low != i][:k]
        high_set = set(order_high[:k].tolist())
        for j in order_low:
            if int(j) not in high_set:
                penalty += rank_high[j] - k
    return 1.0 - penalty * 2.0 / (n * k * (2.0 * n - 3.0 * k - 1.0))
