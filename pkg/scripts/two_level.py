"""Two-level (N=2, eps=3) experiments: ideal depth scan, ideal and noisy coupling sweeps."""

from _common import base_parser, save

from bcsvqd.config import ExperimentConfig

SWEEP = (0.2, 0.6, 1.0, 1.4)


def main() -> None:
    parser = base_parser(__doc__)
    parser.add_argument("--skip-noisy", action="store_true")
    args = parser.parse_args()
    common = dict(epsilons=(3.0, 3.0), gap=1, shots=10_000, seed=args.seed, workers=args.workers)

    save("exact", ExperimentConfig(v=tuple(round(0.1 * k, 1) for k in range(16)), **common), args.out_dir, "n2_exact")
    scan = ExperimentConfig(v=(1.0,), depth=(1, 2, 3, 4), runs=args.runs or 50, **common)
    save("depth-scan", scan, args.out_dir, "n2_depth_scan")
    sweep = ExperimentConfig(v=SWEEP, depth=(3,), optimizer=("cobyla", "spsa"), runs=args.runs or 10, **common)
    save("v-sweep", sweep, args.out_dir, "n2_v_sweep")
    if not args.skip_noisy:
        noisy = sweep.replace(backend="noisy")
        save("v-sweep", noisy, args.out_dir, "n2_v_sweep_noisy")
        save("depth-scan", scan.replace(backend="noisy", runs=args.runs or 10), args.out_dir, "n2_depth_scan_noisy")


if __name__ == "__main__":
    main()
