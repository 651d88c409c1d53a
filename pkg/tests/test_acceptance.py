"""Acceptance gate: every criterion runs at its stated tolerance and prints a pass line."""

import hashlib
import json
import math
import random
import subprocess
import sys
import time
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from narraframe import embedding as emb
from narraframe import frameaxis as fx
from narraframe import geometry as geo
from narraframe import narrative_roles as roles
from narraframe import overrepresentation as ov
from narraframe.corpus import CorpusPartition
from narraframe.pipeline import validate_manifest

from conftest import make_doc, make_partition, random_model
from test_embedding import cooccurrence_oracle, glove_objective, synthetic_sentences
from test_frameaxis import bias_oracle, intensity_oracle
from test_geometry import make_blobs, purity
from test_overrepresentation import odds_oracle, random_counts, synthetic_partition
from test_pipeline import EXPECTED_REPORTS


def report_pass(name: str, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"\nACCEPTANCE PASS: {name}{suffix}")


def test_logodds_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(987)
    checked = 0
    for _ in range(200):
        c_i, c_j, c_bg = (random_counts(rng, vocab_size=50, max_count=20)
                          for _ in range(3))
        if sum(c_bg.values()) == 0:
            continue
        target = synthetic_partition("i", c_i)
        other = synthetic_partition("j", c_j)
        bg = synthetic_partition("bg", c_bg)
        result = ov.log_odds(target, other, bg).by_token()
        swapped = ov.log_odds(other, target, bg).by_token()
        oracle = odds_oracle(c_i, c_j, c_bg)
        assert set(result) == set(oracle)
        for w, (s, z) in oracle.items():
            assert abs(result[w].s - s) <= 1e-10
            assert abs(result[w].z - z) <= 1e-10
            assert abs(result[w].s + swapped[w].s) <= 1e-12
            assert abs(result[w].z + swapped[w].z) <= 1e-12
            checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"log-odds oracle sweep took {elapsed:.2f}s"
    report_pass("log-odds oracle equivalence",
                f"200 corpora, {checked} tokens, {elapsed:.2f}s")


def test_logodds_hand_derived_case():
    target = synthetic_partition("i", Counter({"x": 2, "pad": 8}))
    other = synthetic_partition("j", Counter({"x": 1, "pad": 9}))
    bg = synthetic_partition("bg", Counter({"x": 1, "pad": 19}))
    rec = ov.log_odds(target, other, bg).by_token()["x"]
    assert abs(rec.s - 0.4395) <= 1e-3
    assert abs(rec.z - 0.4815) <= 1e-3
    report_pass("log-odds hand-derived case", f"s={rec.s:.4f} z={rec.z:.4f}")


def test_frameaxis_bruteforce_equivalence():
    rng = np.random.default_rng(31)
    model = random_model(rng, 120, 20)
    docs = [make_doc(f"d{i}",
                     [f"w{rng.integers(0, 120)}" for _ in range(rng.integers(1, 31))])
            for i in range(500)]
    frames = []
    while len(frames) < 20:
        a, b = int(rng.integers(0, 120)), int(rng.integers(0, 120))
        if a != b:
            frames.append(fx.microframe(f"w{a}", f"w{b}", model))
    baseline_values = rng.uniform(-0.3, 0.3, size=20)
    none_stop = frozenset()

    start = time.perf_counter()
    pairs = 0
    for f_idx, frame in enumerate(frames):
        swapped = frame.swapped()
        baseline = fx.BaselineBias(frame.label, float(baseline_values[f_idx]))
        baseline_swapped = fx.BaselineBias(swapped.label, -float(baseline_values[f_idx]))
        for doc in docs:
            bias = fx.document_bias(doc, frame, model, stopwords=none_stop)
            expected_bias = bias_oracle(doc, frame, model)
            if expected_bias is None:
                assert bias is None
                continue
            assert abs(bias - expected_bias) <= 1e-9
            assert -1.0 <= bias <= 1.0
            intensity = fx.document_intensity(doc, frame, baseline, model,
                                              stopwords=none_stop)
            expected_intensity = intensity_oracle(doc, frame, baseline.value, model)
            assert abs(intensity - expected_intensity) <= 1e-9
            flipped_bias = fx.document_bias(doc, swapped, model, stopwords=none_stop)
            assert abs(flipped_bias + bias) <= 1e-12
            flipped_intensity = fx.document_intensity(doc, swapped, baseline_swapped,
                                                      model, stopwords=none_stop)
            assert abs(flipped_intensity - intensity) <= 1e-12
            pairs += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"frameaxis sweep took {elapsed:.2f}s"
    report_pass("frameaxis brute-force equivalence",
                f"{pairs} doc-frame pairs, {elapsed:.2f}s")


def test_cooccurrence_exactness():
    rng = random.Random(55)
    corpora = 0
    for _ in range(50):
        vocab = [f"t{i}" for i in range(rng.randint(2, 10))]
        docs = [rng.choices(vocab, k=rng.randint(1, 25))
                for _ in range(rng.randint(1, 8))]
        window = rng.randint(1, 8)
        oracle = cooccurrence_oracle(docs, window, min_count=0)
        if not oracle:
            continue
        table = emb.build_cooccurrence(make_partition("c", docs), window, min_count=0)
        seen = {}
        for (i, j), value in table.entries.items():
            tokens = sorted(table.vocabulary, key=table.vocabulary.__getitem__)
            seen[(tokens[i], tokens[j])] = value
        assert set(seen) == set(oracle)
        for key, value in oracle.items():
            assert abs(seen[key] - value) <= 1e-12
        corpora += 1
    report_pass("co-occurrence exactness", f"{corpora} mini-corpora")


def test_glove_training_progress(tmp_path):
    corpus = make_partition("c", synthetic_sentences(n_sentences=200, vocab=60, seed=77))
    cooc = emb.build_cooccurrence(corpus, window=5, min_count=1)
    hyper = emb.GloveHyper(seed=19, workers=1)
    # tiny warmup so the timed region measures training, not JIT compilation
    warm = emb.build_cooccurrence(make_partition("w", [["a", "b"]]), 2, 0)
    emb.train_glove(warm, d=2, epochs=1, hyper=emb.GloveHyper(seed=1))

    start = time.perf_counter()
    _, params_1 = emb.train_glove(cooc, d=50, epochs=1, hyper=hyper, return_params=True)
    model_50, params_50 = emb.train_glove(cooc, d=50, epochs=50, hyper=hyper,
                                          return_params=True)
    elapsed = time.perf_counter() - start
    loss_1 = glove_objective(params_1, cooc)
    loss_50 = glove_objective(params_50, cooc)
    assert loss_50 <= 0.5 * loss_1, f"epoch-50 loss {loss_50:.2f} vs epoch-1 {loss_1:.2f}"

    path = tmp_path / "vectors.txt"
    emb.save_embeddings(model_50, path)
    loaded = emb.load_embeddings(path)
    assert loaded.tokens == model_50.tokens
    assert np.array_equal(loaded.vectors, model_50.vectors)
    assert elapsed < 60.0, f"training took {elapsed:.2f}s"
    report_pass("glove training progress",
                f"loss {loss_1:.1f} -> {loss_50:.1f}, round-trip bitwise, {elapsed:.2f}s")


def test_umap_quality():
    rng = np.random.default_rng(42)
    vectors, truth = make_blobs(rng, n_per_blob=100, dim=50, n_blobs=3)
    labels = [f"p{i}" for i in range(300)]
    params = geo.UmapParams(n_neighbors=15, min_dist=0.1, epochs=200, seed=42)
    # warmup compiles the layout kernel on a tiny input
    geo.project_umap(labels[:20], vectors[:20],
                     geo.UmapParams(n_neighbors=4, epochs=5, seed=1))

    start = time.perf_counter()
    projection = geo.project_umap(labels, vectors, params)
    elapsed = time.perf_counter() - start
    clusters = geo.kmeans(labels, projection.coords, k=3,
                          params=geo.KmeansParams(restarts=8, seed=0))
    assigned = np.array([clusters.assignment[lab] for lab in labels])
    blob_purity = purity(assigned, truth)
    trust = geo.trustworthiness(vectors, projection, k=15)
    assert blob_purity >= 0.9, f"purity {blob_purity:.3f}"
    assert trust >= 0.80, f"trustworthiness {trust:.3f}"
    rerun = geo.project_umap(labels, vectors, params)
    assert np.array_equal(projection.coords, rerun.coords)
    assert elapsed < 30.0, f"projection took {elapsed:.2f}s"
    report_pass("umap quality",
                f"purity={blob_purity:.3f} trust={trust:.3f} {elapsed:.2f}s")


def test_kmeans_criteria():
    vectors = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 10.0], [10.0, 11.0]])
    hand = geo.kmeans(["a", "b", "c", "d"], vectors, k=2)
    assert hand.inertia == 1.0

    for seed in range(5):
        rng = np.random.default_rng(seed)
        blob_vectors, truth = make_blobs(rng, n_per_blob=40, dim=6, spread=0.5,
                                         separation=50.0)
        labels = [f"p{i}" for i in range(len(truth))]
        result = geo.kmeans(labels, blob_vectors, k=3,
                            params=geo.KmeansParams(restarts=6, seed=seed))
        history = result.inertia_history
        for earlier, later in zip(history, history[1:]):
            assert later <= earlier + 1e-9
        assigned = np.array([result.assignment[lab] for lab in labels])
        assert purity(assigned, truth) == 1.0
    report_pass("k-means", "hand inertia 1.0, exact blob recovery, monotone Lloyd")


def test_role_aggregation_against_bruteforce(fixture_triples_path):
    triples = roles.load_triples(fixture_triples_path)
    assert len(triples) == 1000

    # <= 3-token filter verified on planted long roles
    long_roles = [t for t in triples
                  if t.agent_token_count > 3 or t.patient_token_count > 3]
    assert long_roles, "fixture must plant long roles"
    filtered = roles.filter_triples(triples, max_tokens=3)
    assert len(filtered) == len(triples) - len(long_roles)
    assert all(t.agent_token_count <= 3 and t.patient_token_count <= 3
               for t in filtered)

    by_party = {"D": [t for t in filtered if t.party == "D"],
                "R": [t for t in filtered if t.party == "R"]}

    # combination frequencies: brute force recount
    for party, subset in by_party.items():
        oracle: dict = {}
        for t in subset:
            key = (t.agent, t.verb_lemma, t.patient)
            oracle[key] = oracle.get(key, 0) + 1
        assert dict(roles.combination_frequencies(subset)) == oracle

    # differential combinations equal a brute-force sort
    counts_d = roles.combination_frequencies(by_party["D"])
    counts_r = roles.combination_frequencies(by_party["R"])
    top_d, top_r = roles.differential_combinations(counts_d, counts_r, k=10)
    keys = set(counts_d) | set(counts_r)
    expect_d = sorted(
        keys, key=lambda key: (-(counts_d.get(key, 0) - counts_r.get(key, 0)),
                               -(counts_d.get(key, 0) + counts_r.get(key, 0)), key))[:10]
    assert [(c.agent, c.verb, c.patient) for c in top_d] == expect_d
    expect_r = sorted(
        keys, key=lambda key: ((counts_d.get(key, 0) - counts_r.get(key, 0)),
                               -(counts_d.get(key, 0) + counts_r.get(key, 0)), key))[:10]
    assert [(c.agent, c.verb, c.patient) for c in top_r] == expect_r

    # top agents/patients
    for party, subset in by_party.items():
        agents, patients = roles.top_agents_patients(subset, n=10)
        agent_oracle = Counter(t.agent for t in subset)
        patient_oracle = Counter(t.patient for t in subset)
        assert agents == sorted(agent_oracle.items(), key=lambda kv: (-kv[1], kv[0]))[:10]
        assert patients == sorted(patient_oracle.items(),
                                  key=lambda kv: (-kv[1], kv[0]))[:10]

    # membership categories: counts sum and match a direct re-derivation
    d_terms = ["democrats", "pelosi", "speaker pelosi", "house democrats", "schumer"]
    tagged = roles.categorize_memberships(filtered, other_party_terms=d_terms)
    assert len(tagged) == len(filtered)
    us = frozenset(roles.US_TERMS)
    them = frozenset(roles.THEM_TERMS)

    def oracle_category(agent: str):
        if agent in us:
            return roles.MembershipCategory.US
        if agent in them:
            return roles.MembershipCategory.THEM
        tokens = agent.split()
        for term in d_terms:
            term_tokens = term.split()
            for i in range(len(tokens) - len(term_tokens) + 1):
                if tokens[i:i + len(term_tokens)] == term_tokens:
                    return roles.MembershipCategory.OTHER_PARTY
        return roles.MembershipCategory.OTHER

    category_counts = Counter()
    for t, cat in tagged:
        assert cat is oracle_category(t.agent)
        category_counts[cat] += 1
    assert sum(category_counts.values()) == len(filtered)

    # verb-set patient tables vs filtered counting oracle
    verbs = {"help", "save", "protect"}
    table = roles.patients_for_verbset(tagged, verbs, roles.MembershipCategory.US, n=10)
    oracle_table: dict = {}
    for t, cat in tagged:
        if cat is roles.MembershipCategory.US and t.verb_lemma in verbs:
            patient = roles.merge_patient(t.patient)
            oracle_table.setdefault(t.party, Counter())[patient] += 1
    assert set(table) == set(oracle_table)
    for party, ranked in table.items():
        assert ranked == sorted(oracle_table[party].items(),
                                key=lambda kv: (-kv[1], kv[0]))[:10]
    report_pass("role aggregation", f"{len(filtered)} filtered triples, all recounts exact")


def test_defaults_match_reference_constants():
    import inspect
    from narraframe.pipeline import EmbeddingStage, PipelineConfig, StageParams

    assert inspect.signature(ov.top_terms).parameters["k"].default == 40
    assert fx.DEFAULT_TOP_TWEETS == 3
    assert inspect.signature(fx.top_documents).parameters["n"].default == 3
    assert fx.DEFAULT_TOP_FRAMES == 10
    assert inspect.signature(fx.differential_microframes).parameters["k"].default == 10
    assert roles.DEFAULT_TOP_VERBS == 100
    assert inspect.signature(roles.top_verbs).parameters["n"].default == 100
    assert geo.DEFAULT_VERB_CLUSTERS == 15
    assert inspect.signature(emb.train_glove).parameters["d"].default == 300
    assert inspect.signature(emb.train_glove).parameters["epochs"].default == 500

    stage = StageParams()
    assert (stage.logodds_top_k, stage.frames_top_tweets, stage.frames_top_k,
            stage.top_verbs, stage.verb_clusters) == (40, 3, 10, 100, 15)
    embedding = EmbeddingStage()
    assert (embedding.dim, embedding.epochs) == (300, 500)
    report_pass("defaults match reference constants",
                "k=40, top-3 tweets, top-10 frames, 100 verbs, 15 clusters, d=300/500 epochs")


def test_end_to_end_cli(fixture_dir, tmp_path):
    out_dir = tmp_path / "out"
    config_path = tmp_path / "config.json"
    raw = json.loads((fixture_dir / "config.json").read_text())
    for key in ("tweets_path", "antonym_pairs_path", "triples_path"):
        raw[key] = str(fixture_dir / raw[key])
    raw["out_dir"] = str(out_dir)
    config_path.write_text(json.dumps(raw))

    def run_once():
        return subprocess.run(
            [sys.executable, "-m", "narraframe.cli", "run", "--config", str(config_path)],
            capture_output=True, text=True, timeout=300)

    start = time.perf_counter()
    first = run_once()
    first_elapsed = time.perf_counter() - start
    assert first.returncode == 0, first.stderr
    assert first_elapsed < 120.0, f"pipeline took {first_elapsed:.1f}s"

    manifest = validate_manifest(out_dir)
    assert sorted(manifest["files"]) == EXPECTED_REPORTS

    def digest_tree():
        return {p.name: hashlib.sha256(p.read_bytes()).hexdigest()
                for p in out_dir.iterdir() if p.is_file()}

    before = digest_tree()
    second = run_once()
    assert second.returncode == 0, second.stderr
    assert digest_tree() == before, "rerun must be byte-identical"
    report_pass("end-to-end pipeline",
                f"{len(manifest['files'])} files, byte-identical rerun, "
                f"{first_elapsed:.1f}s first run")
