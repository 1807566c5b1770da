"""Plot gap-vs-V and gap-vs-depth CSVs written by the experiment scripts (needs matplotlib)."""

import argparse
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read(path: Path) -> list[dict]:
    with path.open() as fh:
        return list(csv.DictReader(fh))


def plot_sweep(path: Path) -> Path:
    rows = read(path)
    fig, ax = plt.subplots(figsize=(5, 4))
    by_opt = defaultdict(list)
    for r in rows:
        by_opt[r["optimizer"]].append(r)
    for opt, rs in by_opt.items():
        v = [float(r["v"]) for r in rs]
        ax.errorbar(v, [float(r["gap_mean"]) for r in rs], [float(r["gap_std"]) for r in rs], fmt="o", capsize=3, label=opt)
    exact = sorted({(float(r["v"]), float(r["gap_exact"])) for r in rows})
    ax.plot(*zip(*exact), "k--", label="exact")
    ax.set(xlabel="V", ylabel="gap", title=path.stem)
    ax.legend()
    return _save(fig, path)


def plot_depth(path: Path) -> Path:
    rows = read(path)
    fig, ax = plt.subplots(figsize=(5, 4))
    by_opt = defaultdict(list)
    for r in rows:
        by_opt[r["optimizer"]].append(r)
    for opt, rs in by_opt.items():
        d = [int(r["depth"]) for r in rs]
        ax.errorbar(d, [float(r["gap_mean"]) for r in rs], [float(r["gap_std"]) for r in rs], fmt="o", capsize=3, label=opt)
    ax.axhline(float(rows[0]["gap_exact"]), color="k", ls="--", label="exact")
    ax.set(xlabel="depth", ylabel="gap", title=path.stem)
    ax.legend()
    return _save(fig, path)


def _save(fig, path: Path) -> Path:
    out = path.with_suffix(".png")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("results", nargs="?", default="results", type=Path)
    args = parser.parse_args()
    for path in sorted(args.results.glob("*.csv")):
        header = path.read_text().splitlines()[0].split(",")
        if header[0] == "v" and "gap_mean" in header:
            print(plot_sweep(path))
        elif header[0] == "depth":
            print(plot_depth(path))


if __name__ == "__main__":
    main()
