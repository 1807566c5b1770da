"""Batch experiments: exact baselines, depth scans, coupling sweeps and per-run spectra.

Every command writes CSV with a fixed header.  The last column always holds the
config hash.  Run ``r`` of any grid point uses seed ``seed + r``.

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

import numpy as np

from .bcs import BcsParams, build_qubit_hamiltonian, gap_from_spectrum
from .circuit import build_hardware_efficient_ansatz
from .config import ConfigError, ExperimentConfig, load_config, parse_value
from .pauli import MAX_DENSE_QUBITS, eigenspectrum
from .vqd import DeflationError, RunRecord, gap_run, run_seed, solve_spectrum, summarize

HEADERS = {
    "exact": ["v"] + [f"level{i}" for i in range(6)] + ["gap"],
    "depth-scan": ["depth", "optimizer", "gap_mean", "gap_std", "runs", "gap_exact"],
    "v-sweep": ["v", "optimizer", "gap_mean", "gap_std", "gap_exact", "z_score"],
    "spectrum": ["seed", "level", "energy", "evals"],
}


def fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.10g}"
    return str(x)


def hamiltonian(cfg: ExperimentConfig, v: float):
    return build_qubit_hamiltonian(BcsParams(cfg.epsilons, v))


def exact_gap(cfg: ExperimentConfig, v: float) -> float:
    return gap_from_spectrum(eigenspectrum(hamiltonian(cfg, v)), cfg.gap)


def solver_kwargs(cfg: ExperimentConfig, depth: int, optimizer: str) -> dict:
    return dict(
        ansatz=build_hardware_efficient_ansatz(cfg.n, depth, cfg.graph()),
        optimizer=cfg.optimizer_config(optimizer),
        shots=cfg.shots,
        backend=cfg.make_backend(),
        overlap_method=cfg.overlap,
    )


def _gap_task(args) -> RunRecord | None:
    cfg, v, depth, optimizer, run = args
    try:
        rec = gap_run(
            hamiltonian(cfg, v), cfg.gap, run, cfg.seed, cfg.energy_offset(),
            **solver_kwargs(cfg, depth, optimizer),
        )
    except DeflationError:
        return None
    rec.config_hash = cfg.config_hash()
    return rec


def _map(fn: Callable, tasks: list, workers: int) -> list:
    if workers <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(fn, tasks))


def gap_statistics(cfg: ExperimentConfig, points: list[tuple[float, int, str]]) -> dict:
    """Run ``cfg.runs`` seeded runs at every (v, depth, optimizer) point."""
    tasks = [(cfg, v, d, opt, r) for v, d, opt in points for r in range(cfg.runs)]
    results = _map(_gap_task, tasks, cfg.workers)
    grouped: dict = {p: [] for p in points}
    for (_, v, d, opt, _), rec in zip(tasks, results):
        if rec is not None:
            grouped[(v, d, opt)].append(rec)
    return {p: summarize(recs) for p, recs in grouped.items()}


def cmd_exact(cfg: ExperimentConfig) -> list[list]:
    if cfg.n > MAX_DENSE_QUBITS:
        raise ConfigError(f"exact diagonalization limited to {MAX_DENSE_QUBITS} levels")
    rows = []
    for v in cfg.v:
        spec = eigenspectrum(hamiltonian(cfg, v))
        levels = [spec[i] if i < spec.size else "" for i in range(6)]
        rows.append([v, *levels, gap_from_spectrum(spec, cfg.gap)])
    return rows


def _single_v(cfg: ExperimentConfig, command: str) -> float:
    if len(cfg.v) != 1:
        raise ConfigError(f"{command} needs exactly one v value, got {len(cfg.v)}")
    return cfg.v[0]


def _single_depth(cfg: ExperimentConfig, command: str) -> int:
    if len(cfg.depth) != 1:
        raise ConfigError(f"{command} needs exactly one depth, got {len(cfg.depth)}")
    return cfg.depth[0]


def cmd_depth_scan(cfg: ExperimentConfig) -> list[list]:
    v = _single_v(cfg, "depth-scan")
    points = [(v, d, opt) for d in cfg.depth for opt in cfg.optimizer]
    stats = gap_statistics(cfg, points)
    truth = exact_gap(cfg, v)
    return [
        [d, opt, stats[(v, d, opt)].mean, stats[(v, d, opt)].std, len(stats[(v, d, opt)].records), truth]
        for _, d, opt in points
    ]


def cmd_v_sweep(cfg: ExperimentConfig) -> list[list]:
    depth = _single_depth(cfg, "v-sweep")
    points = [(v, depth, opt) for v in cfg.v for opt in cfg.optimizer]
    stats = gap_statistics(cfg, points)
    rows = []
    for v, _, opt in points:
        est = stats[(v, depth, opt)]
        truth = exact_gap(cfg, v)
        z = abs(est.mean - truth) / est.std if est.std > 0 else (0.0 if est.mean == truth else float("inf"))
        rows.append([v, opt, est.mean, est.std, truth, z])
    return rows


def _spectrum_task(args):
    cfg, run = args
    v, depth = cfg.v[0], cfg.depth[0]
    res = solve_spectrum(
        hamiltonian(cfg, v), k_states=cfg.levels, rng_seed=run_seed(cfg.seed, run),
        **solver_kwargs(cfg, depth, cfg.optimizer[0]),
    )
    return res


def cmd_spectrum(cfg: ExperimentConfig) -> list[list]:
    _single_v(cfg, "spectrum")
    _single_depth(cfg, "spectrum")
    if cfg.levels > 2**cfg.n:
        raise ConfigError(f"k_states={cfg.levels} exceeds the {2**cfg.n}-dimensional space")
    results = _map(_spectrum_task, [(cfg, r) for r in range(cfg.runs)], cfg.workers)
    rows = []
    for res in results:
        for level, (energy, evals) in enumerate(zip(res.energies, res.evaluations)):
            rows.append([res.seed, level, energy + cfg.energy_offset(), evals])
    return rows


COMMANDS = {
    "exact": cmd_exact,
    "depth-scan": cmd_depth_scan,
    "v-sweep": cmd_v_sweep,
    "spectrum": cmd_spectrum,
}


def render_csv(command: str, cfg: ExperimentConfig, rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADERS[command] + ["config_hash"])
    digest = cfg.config_hash()
    for row in rows:
        writer.writerow([fmt(x) for x in row] + [digest])
    return buf.getvalue()


def run_command(command: str, cfg: ExperimentConfig) -> str:
    return render_csv(command, cfg, COMMANDS[command](cfg))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bcsvqd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--out", help="write CSV here instead of stdout")
        for f in dataclasses.fields(ExperimentConfig):
            p.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = {
            f.name: parse_value(f.name, getattr(args, f.name))
            for f in dataclasses.fields(ExperimentConfig)
            if getattr(args, f.name) is not None
        }
        cfg = load_config(args.config, overrides)
    except (ConfigError, OSError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        text = run_command(args.command, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
