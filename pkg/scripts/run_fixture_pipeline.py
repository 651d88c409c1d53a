#!/usr/bin/env python3
"""Run the full pipeline on the bundled fixture corpus and print the manifest."""

from __future__ import annotations

import argparse
import json
import logging
from pathlib import Path

from narraframe.pipeline import PipelineConfig, run_pipeline

FIXTURE_CONFIG = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "config.json"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("out"),
                        help="output directory (default ./out)")
    parser.add_argument("--config", type=Path, default=FIXTURE_CONFIG)
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    config = PipelineConfig.from_file(args.config)
    config.out_dir = str(args.out.resolve())
    bundle = run_pipeline(config)
    print(json.dumps({"out_dir": str(bundle.out_dir), "files": bundle.files}, indent=2))


if __name__ == "__main__":
    main()
