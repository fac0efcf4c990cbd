#!/usr/bin/env python3
"""Run the full experiment battery and write reports + trial tables.

Usage: python scripts/run_experiments.py [--seed N] [--out-dir reports]

Sizes follow the acceptance settings; everything is reproducible from the
seed, which is echoed and embedded in every report.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from mealy.experiments import (  # noqa: E402
    exp_bireversible,
    exp_bounded,
    exp_finitary_fraction,
    exp_reset,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20260810)
    parser.add_argument("--out-dir", default="reports")
    args = parser.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(exist_ok=True)
    print(f"seed: {args.seed}")

    runs = [
        ("reset_k2_exact", lambda: exp_reset(2, mode="exact")),
        ("reset_k3_exact", lambda: exp_reset(3, mode="exact")),
        ("reset_k8_sampled", lambda: exp_reset(8, trials=50_000, seed=args.seed)),
        ("bireversible_33_exact", lambda: exp_bireversible(3, 3, mode="exact")),
        ("bireversible_58_sampled", lambda: exp_bireversible(5, 8, trials=10_000, seed=args.seed)),
        ("bounded_32_sampled", lambda: exp_bounded(3, 2, trials=5_000, seed=args.seed)),
        ("finitary_32_exact", lambda: exp_finitary_fraction(3, 2)),
        ("finitary_33_exact", lambda: exp_finitary_fraction(3, 3)),
    ]
    for name, run in runs:
        report = run()
        report.save(out / f"{name}.json")
        report.save_trial_table(out / f"{name}.trials.csv")
        exact = f" = {report.frequency_exact}" if report.frequency_exact else ""
        print(
            f"{name}: frequency {report.frequency:.6f}{exact}, "
            f"CI {report.ci[0]:.6f}..{report.ci[1]:.6f}, "
            f"bound {report.bound_direction} {report.bound_value:.6f}, "
            f"pass={report.passes_bound}, {report.wall_clock_s:.1f}s"
        )


if __name__ == "__main__":
    main()
