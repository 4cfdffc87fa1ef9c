#!/usr/bin/env python3
"""
Run Sweep: Amplitude and level sweeps through the record store.

Runs every config of the chosen grid through run_criteria, appending records
to the store; configs already stored are loaded, so an interrupted sweep
resumes where it stopped. Reports are emitted for every record.

Usage:
    python run_sweep.py --preset golden_small --grid amplitude --values 0 0.25 1
    python run_sweep.py --preset golden_small --grid level --values 6 7 --workers 2
"""

import argparse
import os
import sys

# Add src to path for local development
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from kam_criteria.config import PRESETS, preset_config
from kam_criteria.pipeline import run_sweep
from kam_criteria.report import emit_report
from kam_criteria.store import RecordStore
from kam_criteria.sweeps import GRIDS


def parse_args() -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        description="Run a resumable kam-criteria sweep",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "--preset",
        choices=sorted(PRESETS),
        default="golden_small",
        help="Base config of the grid",
    )
    parser.add_argument(
        "-g",
        "--grid",
        choices=sorted(GRIDS),
        default="amplitude",
        help="Which config key the grid varies",
    )
    parser.add_argument(
        "-v",
        "--values",
        nargs="+",
        type=float,
        default=[0.0, 0.25, 1.0],
        help="Grid values (amplitude scales, kappas, levels or seeds)",
    )
    parser.add_argument(
        "-w",
        "--workers",
        type=int,
        default=1,
        help="Configs run in parallel",
    )
    parser.add_argument(
        "-s",
        "--store",
        type=str,
        default="runs/sweep",
        help="Record store path (without suffix)",
    )
    parser.add_argument(
        "-o",
        "--report-dir",
        type=str,
        default="reports",
        help="Directory for CSV / JSON reports",
    )
    return parser.parse_args()


def main() -> None:
    """Run the sweep."""
    args = parse_args()

    print("=" * 60)
    print("kam-criteria Sweep")
    print("=" * 60)
    print(f"Preset: {args.preset}")
    print(f"Grid: {args.grid} {args.values}")
    print(f"Workers: {args.workers}")
    print(f"Store: {args.store}")
    print("=" * 60)

    base = preset_config(args.preset)
    if args.grid == "amplitude":
        grid = GRIDS["amplitude"](base, list(args.values))
    else:
        grid = GRIDS[args.grid](base, [int(v) for v in args.values])
    store = RecordStore(args.store)
    print(f"Created {len(grid)} configs, {sum(c in store for c in grid)} already stored")

    records = run_sweep(grid, store, workers=args.workers)
    for record in records:
        for fmt in ("json", "csv"):
            emit_report(record, fmt, args.report_dir)

    print("\n" + "=" * 60)
    print("Results Summary")
    print("=" * 60)
    print(f"{'Run':<14} {'Value':<8} {'Status':<10} {'Exit':<5} {'C1':<13} {'C2':<13} {'C3':<13}")
    print("-" * 60)
    for value, record in zip(args.values, records):
        criteria = (record.report or {}).get("criteria", {})
        verdicts = [criteria.get(str(i), "n/a") for i in (1, 2, 3)]
        print(
            f"{record.run_id:<14} {value:<8g} {record.status:<10} {record.exit_code:<5} "
            f"{verdicts[0]:<13} {verdicts[1]:<13} {verdicts[2]:<13}"
        )
    print("=" * 60)
    print(f"Reports saved to: {args.report_dir}")


if __name__ == "__main__":
    main()
