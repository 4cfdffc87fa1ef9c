#!/usr/bin/env python3
"""
Acceptance Run: The golden-mean acceptance and control experiments.

Runs the acceptance preset (weak potential, kappa 6..10, window q_27 = 317811)
next to the full-amplitude control and stores both records, so verdicts and
envelope constants can be compared side by side.

Usage:
    python acceptance_run.py --full        # golden_acceptance + golden_control
    python acceptance_run.py --quick       # golden_small + silver_small
"""

import argparse
import os
import sys
import time

# Add src to path for local development
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from kam_criteria.config import preset_config
from kam_criteria.pipeline import run_sweep
from kam_criteria.report import emit_report, summary_lines
from kam_criteria.store import RecordStore


def parse_args() -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        description="Run the acceptance and control experiments",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "--full",
        action="store_true",
        help="Run golden_acceptance and golden_control (q_M = 317811)",
    )
    parser.add_argument(
        "--quick",
        action="store_true",
        help="Run the small golden and silver presets",
    )
    parser.add_argument(
        "--seeds",
        nargs="+",
        type=int,
        default=None,
        help="Override the preset seeds",
    )
    parser.add_argument(
        "-w",
        "--workers",
        type=int,
        default=4,
        help="Worker processes for kappa cells",
    )
    parser.add_argument(
        "-s",
        "--store",
        type=str,
        default="runs/acceptance",
        help="Record store path (without suffix)",
    )
    parser.add_argument(
        "-o",
        "--report-dir",
        type=str,
        default="reports/acceptance",
        help="Directory for CSV / JSON reports",
    )
    return parser.parse_args()


def main() -> None:
    """Run the acceptance experiments."""
    args = parse_args()

    names = ["golden_acceptance", "golden_control"] if args.full else ["golden_small", "silver_small"]
    overrides: dict = {"workers": args.workers}
    if args.seeds:
        overrides["seeds"] = args.seeds

    print("=" * 70)
    print("kam-criteria Acceptance Run")
    print("=" * 70)
    print(f"Mode: {'FULL' if args.full else 'QUICK'}")
    print(f"Presets: {names}")
    print(f"Workers: {args.workers}")
    print(f"Store: {args.store}")
    print("=" * 70)

    grid = [preset_config(name, **overrides) for name in names]
    start_time = time.time()
    records = run_sweep(grid, RecordStore(args.store))
    elapsed = time.time() - start_time

    for name, record in zip(names, records):
        print(f"\n[{name}]")
        print("\n".join(summary_lines(record)))
        for fmt in ("json", "csv"):
            emit_report(record, fmt, args.report_dir)

    print("\n" + "=" * 70)
    print(f"Total time: {elapsed:.1f}s")
    print(f"Exit codes: {dict(zip(names, (r.exit_code for r in records)))}")
    print(f"Reports saved to: {args.report_dir}")
    print("=" * 70)


if __name__ == "__main__":
    main()
