"""Command-line entry points: `narraframe run --config ...` plus per-stage subcommands."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from . import __version__
from . import embedding as emb_mod
from .pipeline import (ConfigError, PipelineConfig, PipelineRunner, StageError,
                       emit_frames, emit_logodds, emit_roles, emit_terms_projection,
                       emit_verb_clusters, run_pipeline)

EXIT_CONFIG_ERROR = 2
EXIT_STAGE_FAILURE = 3


def _validate_config_option(ctx, param, value):
    if not value or ctx.resilient_parsing:
        return
    try:
        PipelineConfig.from_file(value)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        ctx.exit(EXIT_CONFIG_ERROR)
    click.echo(f"config ok: {value}")
    ctx.exit(0)


@click.group(invoke_without_command=False)
@click.version_option(version=__version__, prog_name="narraframe")
@click.option("--validate-config", type=click.Path(), callback=_validate_config_option,
              expose_value=False, is_eager=True,
              help="Validate a config file and exit (0 ok, 2 error).")
@click.option("-v", "--verbose", is_flag=True, help="Enable info logging.")
def main(verbose: bool) -> None:
    """Reconstruct partisan narrative frameworks from an archived tweet corpus."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


def _load_config(path: str) -> PipelineConfig:
    try:
        return PipelineConfig.from_file(path)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)


def _run_stage(name: str, body) -> None:
    try:
        body()
    except StageError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_STAGE_FAILURE)
    except Exception as exc:
        click.echo(f"error: stage {name!r} failed: {exc}", err=True)
        sys.exit(EXIT_STAGE_FAILURE)


def _out_dir(config: PipelineConfig, override: str | None) -> Path:
    out = Path(override) if override else Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


config_option = click.option("--config", "config_path", required=True,
                             type=click.Path(), help="Pipeline config JSON.")
out_option = click.option("--out", "out_override", default=None,
                          type=click.Path(), help="Override the output directory.")
seed_option = click.option("--seed", default=None, type=int,
                           help="Override the stage seed.")


@main.command()
@config_option
def run(config_path: str) -> None:
    """Run the full pipeline and write every report plus manifest.json."""
    config = _load_config(config_path)

    def body():
        bundle = run_pipeline(config)
        click.echo(f"wrote {len(bundle.files)} report files to {bundle.out_dir}")
        for name in bundle.files:
            click.echo(f"  {name}")

    _run_stage("run", body)


@main.command()
@config_option
def ingest(config_path: str) -> None:
    """Ingest tweets and print per-party topical/background counts."""
    config = _load_config(config_path)

    def body():
        runner = PipelineRunner(config)
        topical, background = runner.topical_background()
        by_party = runner.topical_by_party()
        summary = {
            "documents": len(runner.full_corpus()),
            "topical": len(topical),
            "background": len(background),
            "topical_by_party": {p: len(part) for p, part in sorted(by_party.items())},
            "skipped": {k: v for k, v in sorted(runner.full_corpus().meta.items())
                        if k != "lines"},
        }
        click.echo(json.dumps(summary, indent=2, sort_keys=True))

    _run_stage("ingest", body)


@main.command()
@config_option
@out_option
@click.option("--top-k", default=None, type=int, help="Override the top-terms cutoff.")
def logodds(config_path: str, out_override: str | None, top_k: int | None) -> None:
    """Write the per-party log-odds tables and the shared-terms table."""
    config = _load_config(config_path)
    if top_k is not None:
        config.stage.logodds_top_k = top_k

    def body():
        runner = PipelineRunner(config)
        emitted = emit_logodds(runner, _out_dir(config, out_override))
        for name in sorted(emitted):
            click.echo(name)

    _run_stage("logodds", body)


@main.command()
@config_option
@out_option
@seed_option
def embed(config_path: str, out_override: str | None, seed: int | None) -> None:
    """Train (or load cached) embeddings and write vectors.txt."""
    config = _load_config(config_path)
    if seed is not None:
        config.embedding.seed = seed

    def body():
        runner = PipelineRunner(config)
        model = runner.model()
        out = _out_dir(config, out_override) / "vectors.txt"
        emb_mod.save_embeddings(model, out)
        click.echo(f"{len(model)} vectors of dimension {model.dimension} -> {out}")

    _run_stage("embed", body)


@main.command()
@config_option
@out_option
@seed_option
@click.option("--top-k", default=None, type=int, help="Override the differential-frame cutoff.")
@click.option("--scores/--no-scores", default=False,
              help="Also write per-document frame scores for the selected frames.")
def frames(config_path: str, out_override: str | None, seed: int | None,
           top_k: int | None, scores: bool) -> None:
    """Write the differential microframe table and strongest tweets per frame."""
    config = _load_config(config_path)
    if seed is not None:
        config.umap.seed = seed
    if top_k is not None:
        config.stage.frames_top_k = top_k

    def body():
        runner = PipelineRunner(config)
        emitted = emit_frames(runner, _out_dir(config, out_override), scores=scores)
        for name in sorted(emitted):
            click.echo(name)

    _run_stage("frames", body)


@main.command()
@config_option
@out_option
@seed_option
def project(config_path: str, out_override: str | None, seed: int | None) -> None:
    """Project the characteristic terms to 2-D and write the map (TSV + SVG)."""
    config = _load_config(config_path)
    if seed is not None:
        config.umap.seed = seed

    def body():
        runner = PipelineRunner(config)
        emitted = emit_terms_projection(runner, _out_dir(config, out_override))
        for name in sorted(emitted):
            click.echo(name)

    _run_stage("project", body)


@main.command()
@config_option
@out_option
@click.option("--verbs/--no-verbs", "with_verbs", default=True,
              help="Also project and cluster each party's top verbs.")
def roles(config_path: str, out_override: str | None, with_verbs: bool) -> None:
    """Write the role aggregation tables (and verb cluster maps)."""
    config = _load_config(config_path)

    def body():
        runner = PipelineRunner(config)
        out = _out_dir(config, out_override)
        emitted = emit_roles(runner, out)
        if with_verbs:
            emitted.update(emit_verb_clusters(runner, out))
        for name in sorted(emitted):
            click.echo(name)

    _run_stage("roles", body)


if __name__ == "__main__":
    main()
