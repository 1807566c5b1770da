"""Shared plumbing for the experiment scripts: run a CLI command and save its CSV."""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from bcsvqd.cli import run_command
from bcsvqd.config import ExperimentConfig


def base_parser(description: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--out-dir", default="results", type=Path)
    parser.add_argument("--runs", type=int, default=None, help="override the per-point run count")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    return parser


def save(command: str, cfg: ExperimentConfig, out_dir: Path, name: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    text = run_command(command, cfg)
    path = out_dir / f"{name}.csv"
    path.write_text(text)
    print(f"{path}  ({time.perf_counter() - start:.0f}s)")
    return path
