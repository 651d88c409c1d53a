"""Config-driven orchestration of the full analysis, with stage caching and an output manifest."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from . import embedding as emb_mod
from . import frameaxis as fx_mod
from . import geometry as geo_mod
from . import narrative_roles as roles_mod
from . import overrepresentation as ov_mod
from . import report

log = logging.getLogger(__name__)


class ConfigError(Exception):
    """Configuration is malformed or references missing inputs."""


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class EmbeddingStage:
    dim: int = emb_mod.DEFAULT_DIMENSION
    epochs: int = emb_mod.DEFAULT_EPOCHS
    window: int = emb_mod.DEFAULT_WINDOW
    min_count: int = emb_mod.DEFAULT_MIN_COUNT
    x_max: float = 100.0
    alpha: float = 0.75
    learning_rate: float = 0.05
    seed: int = 1
    workers: int = 1


@dataclass
class UmapStage:
    n_neighbors: int = 15
    min_dist: float = 0.1
    epochs: int = 200
    seed: int = 42


@dataclass
class KmeansStage:
    restarts: int = 8
    max_iter: int = 100
    seed: int = 7


@dataclass
class StageParams:
    logodds_top_k: int = ov_mod.DEFAULT_TOP_TERMS
    shared_terms_k: int = 40
    term_clusters: int = 6
    frames_top_k: int = fx_mod.DEFAULT_TOP_FRAMES
    frames_top_tweets: int = fx_mod.DEFAULT_TOP_TWEETS
    top_verbs: int = roles_mod.DEFAULT_TOP_VERBS
    verb_clusters: int = geo_mod.DEFAULT_VERB_CLUSTERS
    combinations_k: int = 10
    top_roles: int = 10
    verbset_patients: int = 10
    max_role_tokens: int = roles_mod.DEFAULT_MAX_ROLE_TOKENS
    party_expand_k: int = 20


DEFAULT_VERB_SETS = {
    "help": ["help", "save", "protect"],
    "stop": ["stop", "slow", "prevent"],
    "want": ["want"],
}


@dataclass
class PipelineConfig:
    tweets_path: str
    antonym_pairs_path: str
    triples_path: str
    out_dir: str
    pretrained_vectors_path: str | None = None
    cache_dir: str | None = None
    topic_keywords: list[str] = field(default_factory=lambda: list(corpus_mod.DEFAULT_TOPIC_KEYWORDS))
    party_seeds: dict[str, list[str]] = field(default_factory=lambda: {
        "D": ["democrat", "democratic"], "R": ["republican"]})
    party_terms: dict[str, list[str]] = field(default_factory=dict)
    us_terms: list[str] = field(default_factory=lambda: list(roles_mod.US_TERMS))
    them_terms: list[str] = field(default_factory=lambda: list(roles_mod.THEM_TERMS))
    exclusions: list[str] = field(default_factory=list)
    merge_map: dict[str, str] = field(default_factory=dict)
    verb_sets: dict[str, list[str]] = field(default_factory=lambda: {
        k: list(v) for k, v in DEFAULT_VERB_SETS.items()})
    stage: StageParams = field(default_factory=StageParams)
    embedding: EmbeddingStage = field(default_factory=EmbeddingStage)
    umap: UmapStage = field(default_factory=UmapStage)
    kmeans: KmeansStage = field(default_factory=KmeansStage)

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        return cls.from_dict(raw, base_dir=path.parent)

    @classmethod
    def from_dict(cls, raw: dict, base_dir: Path | None = None) -> "PipelineConfig":
        unknown = set(raw) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        nested = {"stage": StageParams, "embedding": EmbeddingStage,
                  "umap": UmapStage, "kmeans": KmeansStage}
        kwargs = {}
        for key, value in raw.items():
            if key in nested:
                section_cls = nested[key]
                bad = set(value) - set(section_cls.__dataclass_fields__)
                if bad:
                    raise ConfigError(f"unknown keys in config section {key!r}: {sorted(bad)}")
                kwargs[key] = section_cls(**value)
            else:
                kwargs[key] = value
        missing = [k for k in ("tweets_path", "antonym_pairs_path", "triples_path", "out_dir")
                   if k not in kwargs]
        if missing:
            raise ConfigError(f"config is missing required keys: {missing}")
        try:
            config = cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        if base_dir is not None:
            config._resolve_paths(base_dir)
        config.validate()
        return config

    def _resolve_paths(self, base_dir: Path) -> None:
        for attr in ("tweets_path", "antonym_pairs_path", "triples_path",
                     "pretrained_vectors_path", "out_dir", "cache_dir"):
            value = getattr(self, attr)
            if value and not Path(value).is_absolute():
                setattr(self, attr, str(base_dir / value))

    def validate(self) -> None:
        for attr in ("tweets_path", "antonym_pairs_path", "triples_path"):
            value = getattr(self, attr)
            if not Path(value).is_file():
                raise ConfigError(f"{attr} does not exist: {value}")
        if self.pretrained_vectors_path and not Path(self.pretrained_vectors_path).is_file():
            raise ConfigError(
                f"pretrained_vectors_path does not exist: {self.pretrained_vectors_path}")
        if not self.topic_keywords:
            raise ConfigError("topic_keywords must be nonempty")
        counts = [(f"stage.{name}", getattr(self.stage, name))
                  for name in self.stage.__dataclass_fields__]
        counts += [
            ("embedding.dim", self.embedding.dim),
            ("embedding.epochs", self.embedding.epochs),
            ("embedding.window", self.embedding.window),
            ("embedding.workers", self.embedding.workers),
            ("umap.n_neighbors", self.umap.n_neighbors),
            ("umap.epochs", self.umap.epochs),
            ("kmeans.restarts", self.kmeans.restarts),
            ("kmeans.max_iter", self.kmeans.max_iter),
        ]
        for name, value in counts:
            if value < 1:
                raise ConfigError(f"{name} must be >= 1, got {value}")
        if self.embedding.min_count < 0:
            raise ConfigError("embedding.min_count must be >= 0")

    def config_hash(self) -> str:
        return hashlib.sha256(
            json.dumps(asdict(self), sort_keys=True).encode("utf-8")
        ).hexdigest()

    def embedding_cache_key(self) -> str:
        payload = {
            "embedding": asdict(self.embedding),
            "tweets_path": str(self.tweets_path),
            "topic_keywords": list(self.topic_keywords),
            "pretrained": self.pretrained_vectors_path or "",
        }
        return hashlib.sha256(
            json.dumps(payload, sort_keys=True).encode("utf-8")
        ).hexdigest()[:16]


@dataclass
class ReportBundle:
    out_dir: Path
    manifest: dict

    @property
    def files(self) -> list[str]:
        return sorted(self.manifest["files"])


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


class PipelineRunner:
    """Lazily evaluates pipeline stages so subcommands can emit any subset of reports."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self._cache: dict[str, object] = {}

    def _memo(self, key: str, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def full_corpus(self) -> corpus_mod.CorpusPartition:
        return self._memo("full_corpus", lambda: corpus_mod.ingest_tweets(
            self.config.tweets_path, topic_keywords=self.config.topic_keywords))

    def topical_background(self):
        return self._memo("topical_background", lambda: corpus_mod.filter_topic(
            self.full_corpus(), self.config.topic_keywords))

    def topical_by_party(self) -> dict[str, corpus_mod.CorpusPartition]:
        return self._memo("topical_by_party",
                          lambda: corpus_mod.partition_by_party(self.topical_background()[0]))

    def background(self) -> corpus_mod.CorpusPartition:
        return self.topical_background()[1]

    def logodds(self) -> dict[str, ov_mod.LogOddsResult]:
        def build():
            parts = self.topical_by_party()
            bg = self.background()
            return {
                "D": ov_mod.log_odds(parts["D"], parts["R"], bg),
                "R": ov_mod.log_odds(parts["R"], parts["D"], bg),
            }
        return self._memo("logodds", build)

    def top_terms(self) -> dict[str, list[str]]:
        def build():
            exclusions = frozenset(t.lower() for t in self.config.exclusions)
            k = self.config.stage.logodds_top_k
            return {party: ov_mod.top_terms(result, k, exclusions).tokens
                    for party, result in self.logodds().items()}
        return self._memo("top_terms", build)

    def model(self) -> emb_mod.EmbeddingModel:
        return self._memo("model", self._build_model)

    def _build_model(self) -> emb_mod.EmbeddingModel:
        config = self.config
        if config.pretrained_vectors_path:
            return emb_mod.load_embeddings(config.pretrained_vectors_path)
        cache_dir = Path(config.cache_dir) if config.cache_dir else Path(config.out_dir) / ".cache"
        cache_path = cache_dir / f"vectors_{config.embedding_cache_key()}.txt"
        if cache_path.is_file():
            log.info("embedding: reusing cached vectors %s", cache_path)
            return emb_mod.load_embeddings(cache_path)
        e = config.embedding
        cooc = emb_mod.build_cooccurrence(self.full_corpus(), window=e.window,
                                          min_count=e.min_count)
        model = emb_mod.train_glove(
            cooc, d=e.dim, epochs=e.epochs,
            hyper=emb_mod.GloveHyper(x_max=e.x_max, alpha=e.alpha,
                                     learning_rate=e.learning_rate,
                                     seed=e.seed, workers=e.workers))
        cache_dir.mkdir(parents=True, exist_ok=True)
        emb_mod.save_embeddings(model, cache_path)
        return model

    def party_terms(self) -> dict[str, list[str]]:
        def build():
            configured = {k: [t.lower() for t in v]
                          for k, v in self.config.party_terms.items() if v}
            terms = {}
            for party in ("D", "R"):
                if party in configured:
                    terms[party] = configured[party]
                else:
                    terms[party] = emb_mod.expand_party_terms(
                        self.model(), self.config.party_seeds.get(party, []),
                        self.config.stage.party_expand_k)
            return terms
        return self._memo("party_terms", build)

    def microframes(self) -> list[fx_mod.Microframe]:
        return self._memo("microframes", lambda: fx_mod.load_microframes(
            self.config.antonym_pairs_path, self.model())[0])

    def baselines(self) -> list[fx_mod.BaselineBias]:
        return self._memo("baselines", lambda: [
            fx_mod.corpus_baseline_bias(self.background(), frame, self.model())
            for frame in self.microframes()
        ])

    def triples(self) -> list[roles_mod.RoleTriple]:
        def build():
            loaded = roles_mod.load_triples(self.config.triples_path)
            return roles_mod.filter_triples(loaded, self.config.stage.max_role_tokens)
        return self._memo("triples", build)

    def triples_by_party(self) -> dict[str, list[roles_mod.RoleTriple]]:
        def build():
            split: dict[str, list[roles_mod.RoleTriple]] = {"D": [], "R": []}
            for t in self.triples():
                if t.party in split:
                    split[t.party].append(t)
            return split
        return self._memo("triples_by_party", build)

    def tagged_triples(self) -> list[tuple[roles_mod.RoleTriple, roles_mod.MembershipCategory]]:
        def build():
            party_terms = self.party_terms()
            tagged = []
            for party in ("D", "R"):
                opposite = "R" if party == "D" else "D"
                tagged.extend(roles_mod.categorize_memberships(
                    self.triples_by_party()[party], self.config.us_terms,
                    self.config.them_terms, party_terms.get(opposite, [])))
            return tagged
        return self._memo("tagged_triples", build)


# -- stage emitters (shared by run_pipeline and the CLI subcommands) ------------

def emit_logodds(runner: PipelineRunner, out_dir: Path) -> dict[str, str]:
    results = runner.logodds()
    report.write_logodds_tsv(results["D"], out_dir / "logodds_D.tsv")
    report.write_logodds_tsv(results["R"], out_dir / "logodds_R.tsv")
    parts = runner.topical_by_party()
    shared = ov_mod.dense_rank_shared_terms(
        parts["D"], parts["R"], runner.background(), runner.config.stage.shared_terms_k)
    report.write_shared_terms_tsv(shared, out_dir / "shared_terms.tsv")
    return {"logodds_D.tsv": "logodds", "logodds_R.tsv": "logodds",
            "shared_terms.tsv": "logodds"}


def _project_and_cluster(runner: PipelineRunner, labels: list[str], k: int):
    config = runner.config
    model = runner.model()
    vectors = np.stack([model.vector(t) for t in labels])
    projection = geo_mod.project_umap(
        labels, vectors,
        geo_mod.UmapParams(n_neighbors=config.umap.n_neighbors,
                           min_dist=config.umap.min_dist,
                           epochs=config.umap.epochs, seed=config.umap.seed))
    clusters = geo_mod.kmeans(
        labels, projection.coords, min(k, len(labels)),
        geo_mod.KmeansParams(restarts=config.kmeans.restarts,
                             max_iter=config.kmeans.max_iter,
                             seed=config.kmeans.seed))
    return projection, clusters


def emit_terms_projection(runner: PipelineRunner, out_dir: Path) -> dict[str, str]:
    model = runner.model()
    terms = runner.top_terms()
    pooled = list(dict.fromkeys(terms["D"] + terms["R"]))
    in_vocab = [t for t in pooled if t in model]
    if len(in_vocab) < len(pooled):
        log.warning("terms projection: %d top terms below embedding min_count",
                    len(pooled) - len(in_vocab))
    projection, clusters = _project_and_cluster(
        runner, in_vocab, runner.config.stage.term_clusters)
    report.write_projection_tsv(projection, out_dir / "terms_projection.tsv", clusters)
    report.emit_scatter_svg(projection, out_dir / "terms_projection.svg", clusters,
                            title="Characteristic terms")
    return {"terms_projection.tsv": "project_terms", "terms_projection.svg": "project_terms"}


def emit_frames(runner: PipelineRunner, out_dir: Path, scores: bool = False) -> dict[str, str]:
    config = runner.config
    model = runner.model()
    frames = runner.microframes()
    baselines = runner.baselines()
    parts = runner.topical_by_party()
    d_frames, r_frames = fx_mod.differential_microframes(
        parts["D"], parts["R"], frames, baselines, model, k=config.stage.frames_top_k)
    report.write_frames_diff_tsv(d_frames, r_frames, out_dir / "frames_diff.tsv")
    by_label = {f.label: f for f in frames}
    base_by_label = {b.frame: b for b in baselines}
    tweet_rows = []
    selected_labels: list[str] = []
    for party, comparisons in (("D", d_frames), ("R", r_frames)):
        for comparison in comparisons:
            selected_labels.append(comparison.frame)
            frame = by_label[comparison.frame]
            baseline = base_by_label[comparison.frame]
            docs = fx_mod.top_documents(parts[party], frame, baseline, model,
                                        n=config.stage.frames_top_tweets)
            for rank, doc in enumerate(docs, start=1):
                intensity = fx_mod.document_intensity(doc, frame, baseline, model)
                tweet_rows.append((party, comparison.frame, rank, doc.id, intensity, doc.text))
    report.write_top_tweets_tsv(tweet_rows, out_dir / "frames_top_tweets.tsv")
    emitted = {"frames_diff.tsv": "frames", "frames_top_tweets.tsv": "frames"}
    if scores:
        ordered = [f for f in frames if f.label in set(selected_labels)]
        bases = [base_by_label[f.label] for f in ordered]
        rows: list[fx_mod.FrameScore] = []
        for party in ("D", "R"):
            rows.extend(fx_mod.score_documents(parts[party], ordered, bases, model))
        report.write_frame_scores_tsv(rows, out_dir / "frames_scores.tsv")
        emitted["frames_scores.tsv"] = "frames"
    return emitted


def emit_verb_clusters(runner: PipelineRunner, out_dir: Path) -> dict[str, str]:
    config = runner.config
    model = runner.model()
    split = runner.triples_by_party()
    emitted = {}
    for party in ("D", "R"):
        verbs = roles_mod.top_verbs(split[party], config.stage.top_verbs)
        in_vocab = [v for v in verbs if v in model]
        if len(in_vocab) < config.umap.n_neighbors + 1:
            raise ValueError(
                f"party {party}: only {len(in_vocab)} verbs in embedding vocabulary, "
                f"need at least {config.umap.n_neighbors + 1} to project")
        projection, clusters = _project_and_cluster(
            runner, in_vocab, config.stage.verb_clusters)
        tsv = f"verbs_projection_{party}.tsv"
        svg = f"verbs_projection_{party}.svg"
        report.write_projection_tsv(projection, out_dir / tsv, clusters)
        report.emit_scatter_svg(projection, out_dir / svg, clusters,
                                title=f"Top verbs ({party})")
        emitted[tsv] = "verb_clusters"
        emitted[svg] = "verb_clusters"
    return emitted


def emit_roles(runner: PipelineRunner, out_dir: Path) -> dict[str, str]:
    config = runner.config
    split = runner.triples_by_party()
    counts = {party: roles_mod.combination_frequencies(trips)
              for party, trips in split.items()}
    d_combos, r_combos = roles_mod.differential_combinations(
        counts["D"], counts["R"], config.stage.combinations_k)
    report.write_combinations_tsv(d_combos, r_combos, out_dir / "roles_combinations.tsv")
    per_party = {party: roles_mod.top_agents_patients(trips, config.stage.top_roles)
                 for party, trips in sorted(split.items())}
    report.write_top_roles_tsv(per_party, out_dir / "roles_top.tsv")
    tagged = runner.tagged_triples()
    rel_rows = []
    for set_name, verbs in config.verb_sets.items():
        for category in (roles_mod.MembershipCategory.US, roles_mod.MembershipCategory.THEM):
            ranked = roles_mod.patients_for_verbset(
                tagged, verbs, category, config.stage.verbset_patients, config.merge_map)
            for party in sorted(ranked):
                for patient, weight in ranked[party]:
                    rel_rows.append((category.value, set_name, patient, party, weight))
    report.write_relationships_tsv(rel_rows, out_dir / "roles_relationships.tsv")
    return {"roles_combinations.tsv": "roles", "roles_top.tsv": "roles",
            "roles_relationships.tsv": "roles"}


def run_pipeline(config: PipelineConfig) -> ReportBundle:
    """Execute every stage in order and write all report files plus manifest.json."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    runner = PipelineRunner(config)
    emitted: dict[str, str] = {}

    def prepare_corpus() -> dict[str, str]:
        runner.full_corpus()
        return {}

    def prepare_model() -> dict[str, str]:
        runner.model()
        return {}

    stages = [
        ("ingest", prepare_corpus),
        ("logodds", lambda: emit_logodds(runner, out_dir)),
        ("embed", prepare_model),
        ("project_terms", lambda: emit_terms_projection(runner, out_dir)),
        ("frames", lambda: emit_frames(runner, out_dir)),
        ("verb_clusters", lambda: emit_verb_clusters(runner, out_dir)),
        ("roles", lambda: emit_roles(runner, out_dir)),
    ]
    for name, body in stages:
        log.info("stage %s: start", name)
        try:
            emitted.update(body())
        except Exception as exc:
            _write_manifest(out_dir, config, emitted, failed_stage=name, error=str(exc))
            raise StageError(name, exc) from exc
    manifest = _write_manifest(out_dir, config, emitted)
    return ReportBundle(out_dir=out_dir, manifest=manifest)


def _write_manifest(out_dir: Path, config: PipelineConfig, emitted: dict[str, str],
                    failed_stage: str | None = None, error: str | None = None) -> dict:
    manifest = {
        "config_hash": config.config_hash(),
        "status": "failed" if failed_stage else "ok",
        "files": {
            name: {"stage": stage, "sha256": _sha256_file(out_dir / name)}
            for name, stage in sorted(emitted.items())
        },
    }
    if failed_stage:
        manifest["failed_stage"] = failed_stage
        manifest["error"] = error
    with open(out_dir / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def validate_manifest(out_dir: str | Path) -> dict:
    """Check manifest/directory agreement; returns the parsed manifest or raises ValueError."""
    out_dir = Path(out_dir)
    manifest_path = out_dir / "manifest.json"
    if not manifest_path.is_file():
        raise ValueError(f"missing manifest: {manifest_path}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    listed = set(manifest["files"])
    present = {p.name for p in out_dir.iterdir()
               if p.is_file() and p.name != "manifest.json" and not p.name.startswith(".")}
    if listed != present:
        raise ValueError(
            f"manifest mismatch: missing={sorted(listed - present)} "
            f"extra={sorted(present - listed)}")
    for name, entry in manifest["files"].items():
        if _sha256_file(out_dir / name) != entry["sha256"]:
            raise ValueError(f"checksum mismatch for {name}")
    return manifest
