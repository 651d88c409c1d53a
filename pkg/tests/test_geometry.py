import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from narraframe import geometry as geo


def make_blobs(rng: np.random.Generator, n_per_blob=100, dim=50, n_blobs=3, spread=1.0,
               separation=60.0):
    centers = rng.normal(0, separation, size=(n_blobs, dim))
    points, truth = [], []
    for b in range(n_blobs):
        points.append(centers[b] + rng.normal(0, spread, size=(n_per_blob, dim)))
        truth.extend([b] * n_per_blob)
    return np.vstack(points), np.array(truth)


def purity(assigned: np.ndarray, truth: np.ndarray) -> float:
    total = 0
    for cluster in np.unique(assigned):
        members = truth[assigned == cluster]
        total += np.bincount(members).max()
    return total / len(truth)


def labels_for(n: int) -> list[str]:
    return [f"p{i}" for i in range(n)]


class TestKmeans:
    def test_singletons_when_k_equals_n(self):
        rng = np.random.default_rng(0)
        vectors = rng.normal(size=(6, 2))
        result = geo.kmeans(labels_for(6), vectors, k=6)
        assert result.inertia == pytest.approx(0.0, abs=1e-12)
        assert len(set(result.assignment.values())) == 6

    def test_hand_case_inertia_exactly_one(self):
        vectors = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 10.0], [10.0, 11.0]])
        result = geo.kmeans(labels_for(4), vectors, k=2)
        assert result.inertia == 1.0
        assert result.assignment["p0"] == result.assignment["p1"]
        assert result.assignment["p2"] == result.assignment["p3"]
        assert result.assignment["p0"] != result.assignment["p2"]

    def test_default_verb_cluster_constant(self):
        assert geo.DEFAULT_VERB_CLUSTERS == 15

    def test_inertia_history_nonincreasing(self):
        rng = np.random.default_rng(5)
        vectors = rng.normal(size=(120, 4))
        result = geo.kmeans(labels_for(120), vectors, k=6,
                            params=geo.KmeansParams(restarts=4, seed=3))
        history = result.inertia_history
        assert history, "history must be recorded"
        for earlier, later in zip(history, history[1:]):
            assert later <= earlier + 1e-9

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_separated_blobs_recovered_exactly(self, seed):
        rng = np.random.default_rng(seed)
        # inter-centroid distance >= 10x intra-blob sigma
        vectors, truth = make_blobs(rng, n_per_blob=40, dim=5, spread=0.5,
                                    separation=40.0)
        result = geo.kmeans(labels_for(len(truth)), vectors, k=3,
                            params=geo.KmeansParams(restarts=5, seed=seed))
        assigned = np.array([result.assignment[f"p{i}"] for i in range(len(truth))])
        assert purity(assigned, truth) == 1.0

    def test_n_below_k_rejected(self):
        with pytest.raises(ValueError):
            geo.kmeans(labels_for(2), np.zeros((2, 2)), k=3)

    def test_permutation_changes_no_cluster_sets(self):
        rng = np.random.default_rng(7)
        vectors, truth = make_blobs(rng, n_per_blob=30, dim=4, spread=0.4,
                                    separation=30.0)
        labels = labels_for(len(truth))
        result = geo.kmeans(labels, vectors, k=3, params=geo.KmeansParams(seed=1))
        perm = rng.permutation(len(truth))
        shuffled = geo.kmeans([labels[i] for i in perm], vectors[perm], k=3,
                              params=geo.KmeansParams(seed=1))

        def cluster_sets(clustering):
            groups = {}
            for label, cluster in clustering.assignment.items():
                groups.setdefault(cluster, set()).add(label)
            return {frozenset(v) for v in groups.values()}

        assert cluster_sets(result) == cluster_sets(shuffled)

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError):
            geo.kmeans(["a", "a"], np.zeros((2, 2)), k=1)


class TestProjectUmap:
    def test_output_shape(self):
        rng = np.random.default_rng(1)
        vectors = rng.normal(size=(30, 8))
        projection = geo.project_umap(labels_for(30), vectors,
                                      geo.UmapParams(n_neighbors=5, epochs=30, seed=2))
        assert projection.coords.shape == (30, 2)
        assert np.all(np.isfinite(projection.coords))

    def test_seed_determinism_bitwise(self):
        rng = np.random.default_rng(4)
        vectors = rng.normal(size=(40, 10))
        params = geo.UmapParams(n_neighbors=8, epochs=40, seed=9)
        first = geo.project_umap(labels_for(40), vectors, params)
        second = geo.project_umap(labels_for(40), vectors, params)
        assert np.array_equal(first.coords, second.coords)

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError):
            geo.project_umap(labels_for(5), np.zeros((5, 3)),
                             geo.UmapParams(n_neighbors=15))

    def test_duplicate_vectors_allowed(self):
        rng = np.random.default_rng(2)
        vectors = rng.normal(size=(20, 4))
        vectors[3] = vectors[4]
        projection = geo.project_umap(labels_for(20), vectors,
                                      geo.UmapParams(n_neighbors=4, epochs=20, seed=1))
        assert np.all(np.isfinite(projection.coords))

    def test_blobs_project_cleanly(self):
        rng = np.random.default_rng(42)
        vectors, truth = make_blobs(rng, n_per_blob=100, dim=50)
        projection = geo.project_umap(labels_for(300), vectors,
                                      geo.UmapParams(n_neighbors=15, epochs=200, seed=42))
        clusters = geo.kmeans(labels_for(300), projection.coords, k=3,
                              params=geo.KmeansParams(restarts=8, seed=0))
        assigned = np.array([clusters.assignment[f"p{i}"] for i in range(300)])
        assert purity(assigned, truth) >= 0.9
        assert geo.trustworthiness(vectors, projection, k=15) >= 0.80


class TestTrustworthiness:
    def test_identity_projection_scores_one(self):
        rng = np.random.default_rng(3)
        data = rng.normal(size=(40, 2))
        assert geo.trustworthiness(data, data.copy(), k=5) == pytest.approx(1.0, abs=1e-12)

    def test_shuffled_projection_scores_low(self):
        rng = np.random.default_rng(8)
        vectors, _ = make_blobs(rng, n_per_blob=50, dim=20)
        coords = rng.normal(size=(150, 2))
        shuffled = geo.trustworthiness(vectors, coords, k=10)
        assert shuffled < 0.7

    def test_matches_sklearn(self):
        sklearn_trust = pytest.importorskip("sklearn.manifold").trustworthiness
        rng = np.random.default_rng(12)
        high = rng.normal(size=(60, 10))
        low = rng.normal(size=(60, 2))
        ours = geo.trustworthiness(high, low, k=7)
        reference = sklearn_trust(high, low, n_neighbors=7)
        assert ours == pytest.approx(reference, abs=1e-9)

    def test_k_too_large_rejected(self):
        with pytest.raises(ValueError):
            geo.trustworthiness(np.zeros((10, 3)), np.zeros((10, 2)), k=5)

    def test_mismatched_counts_rejected(self):
        with pytest.raises(ValueError):
            geo.trustworthiness(np.zeros((10, 3)), np.zeros((9, 2)), k=2)
