#!/usr/bin/env python3
"""
Benchmark Solver: Birkhoff solve time and residual along the convergents.

Solves the (p_m, q_m) periodic minimizer for a range of convergent indices m
and reports wall time, accepted steps, Euler-Lagrange residual and the
largest step increment against its bound.

Usage:
    python benchmark_solver.py --preset golden_small --indices 10 14 18 21
"""

import argparse
import csv
import os
import sys

# Add src to path for local development
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import numpy as np

from kam_criteria.config import PRESETS, preset_config
from kam_criteria.variational import BirkhoffSolver, el_residual, ordering_check


def parse_args() -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        description="Benchmark the Birkhoff periodic-minimizer solver",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "--preset",
        choices=sorted(PRESETS),
        default="golden_small",
        help="Map and rotation number to solve",
    )
    parser.add_argument(
        "-m",
        "--indices",
        nargs="+",
        type=int,
        default=[8, 10, 12, 14, 16, 18, 21],
        help="Convergent indices m (period q_m)",
    )
    parser.add_argument(
        "-a",
        "--amplitudes",
        nargs="+",
        type=float,
        default=[1e-3, 1.0],
        help="Potential amplitude scales",
    )
    parser.add_argument(
        "-r",
        "--repeats",
        type=int,
        default=3,
        help="Solves per (m, amplitude) for the timing average",
    )
    parser.add_argument(
        "-o",
        "--output",
        type=str,
        default="solver_benchmark.csv",
        help="Output CSV file path",
    )
    return parser.parse_args()


def main() -> None:
    """Run the solver benchmark."""
    args = parse_args()

    print("=" * 60)
    print("kam-criteria Solver Benchmark")
    print("=" * 60)
    print(f"Preset: {args.preset}")
    print(f"Indices: {args.indices}")
    print(f"Amplitudes: {args.amplitudes}")
    print(f"Repeats: {args.repeats}")
    print(f"Output: {args.output}")
    print("=" * 60)

    rows = []
    for amplitude in args.amplitudes:
        config = preset_config(args.preset, amplitude_scale=amplitude)
        alpha = config.build_alpha()
        twist = config.build_twist(alpha)
        solver = BirkhoffSolver(twist, config.tolerance)
        for m in args.indices:
            p, q = alpha.convergents[m]
            solver.reset_timings()
            for repeat in range(args.repeats):
                solved = solver.solve(p, q, seed=repeat)
            rows.append(
                {
                    "amplitude": amplitude,
                    "m": m,
                    "q": q,
                    "mean_seconds": solver.get_average_time(),
                    "iterations": solved.iterations,
                    "residual": el_residual(solved),
                    "ordered": ordering_check(solved),
                    "max_step_increment": float(np.max(np.abs(solved.step_increments()))),
                    "step_bound": twist.step_bound(),
                }
            )

    with open(args.output, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)

    print("\n" + "=" * 60)
    print("Results Summary")
    print("=" * 60)
    print(f"{'Amp':<8} {'m':<4} {'q':<10} {'Time (s)':<10} {'Iter':<6} {'Residual':<12} {'Ordered':<8}")
    print("-" * 60)
    for row in rows:
        print(
            f"{row['amplitude']:<8.0e} {row['m']:<4} {row['q']:<10} {row['mean_seconds']:<10.3f} "
            f"{row['iterations']:<6} {row['residual']:<12.3e} {str(row['ordered']):<8}"
        )
    print("=" * 60)
    print(f"Results saved to: {args.output}")


if __name__ == "__main__":
    main()
