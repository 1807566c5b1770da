"""Five-level (eps = 3,3,3,4,3) experiments on the n=0 gap: depth scan and coupling sweep."""

from _common import base_parser, save

from bcsvqd.config import ExperimentConfig

EPS = (3.0, 3.0, 3.0, 4.0, 3.0)
SWEEP = (0.25, 0.5, 0.75, 1.0)


def main() -> None:
    parser = base_parser(__doc__)
    parser.add_argument("--noisy", action="store_true", help="use the density-matrix backend (slow)")
    args = parser.parse_args()
    common = dict(
        epsilons=EPS, gap=0, shots=10_000, seed=args.seed, workers=args.workers,
        backend="noisy" if args.noisy else "ideal",
    )
    tag = "n5_noisy" if args.noisy else "n5"

    save("exact", ExperimentConfig(v=SWEEP, **common), args.out_dir, f"{tag}_exact")
    scan = ExperimentConfig(v=(0.5,), depth=(1, 2, 3, 4), runs=args.runs or 20, **common)
    save("depth-scan", scan, args.out_dir, f"{tag}_depth_scan")
    sweep = ExperimentConfig(v=SWEEP, depth=(3,), runs=args.runs or 20, **common)
    save("v-sweep", sweep, args.out_dir, f"{tag}_v_sweep")


if __name__ == "__main__":
    main()
