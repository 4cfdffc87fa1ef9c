"""
CLI: Command-Line Entry Point

Subcommands:
    cf          Continued-fraction and kappa tables of a rotation number
    map-check   Symplectic and generating-function consistency suite
    minconfig   Solve a Birkhoff configuration and extract its graph
    criteria    Full criterion pipeline for one config
    sweep       Run a grid of configs through the record store (resumable)
    report      Emit JSON / CSV reports of stored records

Usage:
    kam-criteria criteria --preset golden_small --report-format json csv
    kam-criteria sweep --preset golden_small --grid amplitude --values 0 0.25 1
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from typing import Any

from .config import PRESETS, ExperimentConfig, load_config, preset_config
from .errors import InfeasibleConfigError, KamCriteriaError
from .number_theory import cf_table, from_partial_quotients, kappa_machinery, preset
from .pipeline import EXIT_INFEASIBLE, EXIT_INTERNAL, run_criteria, run_sweep
from .report import FORMATS, emit_report, summary_lines
from .store import RecordStore
from .sweeps import GRIDS
from .twist_map import map_check
from .variational import birkhoff_minimize, graph_extract, ordering_check

logger = logging.getLogger(__name__)

# Config keys with a scalar command-line flag of the same name
_SCALAR_KEYS = {
    "alpha": str,
    "depth": int,
    "n": int,
    "eps": float,
    "amplitude_scale": float,
    "kappa_min": int,
    "kappa_max": int,
    "M": int,
    "chord_budget": int,
    "pair_budget": int,
    "quad_budget": int,
    "mixed_fraction": float,
    "scale_safety": int,
    "flag_factor": int,
    "growth_limit": float,
    "stability_band": float,
    "tolerance": float,
    "workers": int,
    "store_path": str,
    "report_dir": str,
}


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("experiment config (flags override --config and --preset)")
    group.add_argument("--config", type=str, default=None, help="JSON config file")
    group.add_argument("--preset", choices=sorted(PRESETS), default=None, help="Named preset")
    for key, kind in _SCALAR_KEYS.items():
        flag = "--" + key.replace("_", "-") if key != "M" else "-M"
        group.add_argument(flag, dest=key, type=kind, default=None, help=f"Config key {key}")
    group.add_argument("--quotients", nargs="+", type=int, default=None, help="Partial quotient period")
    group.add_argument("--seeds", nargs="+", type=int, default=None, help="Sampling seeds")
    group.add_argument(
        "--potential",
        type=str,
        default=None,
        help='Fourier pairs as JSON, e.g. "[[1, 0.025]]"',
    )


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Resolve --config, --preset and per-key flags into one ExperimentConfig."""
    overrides: dict[str, Any] = {}
    for key in (*_SCALAR_KEYS, "quotients", "seeds"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "potential", None) is not None:
        overrides["potential"] = json.loads(args.potential)
    if overrides.get("quotients") is not None and "alpha" not in overrides:
        overrides["alpha"] = None
    if args.config:
        base = load_config(args.config)
        return ExperimentConfig.from_dict({**base.to_dict(), **overrides})
    if args.preset:
        return preset_config(args.preset, **overrides)
    return ExperimentConfig.from_dict(overrides)


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog="kam-criteria",
        description="Numerical invariant-circle criteria for twist maps with constant-type rotation number",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings only")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    cf = sub.add_parser("cf", help="Continued-fraction tables", formatter_class=fmt)
    cf.add_argument("--alpha", default="golden", help="Preset name")
    cf.add_argument("--quotients", nargs="+", type=int, default=None, help="Partial quotient period")
    cf.add_argument("--depth", type=int, default=24, help="Stored partial quotients")

    mc = sub.add_parser("map-check", help="Symplectic consistency suite", formatter_class=fmt)
    _add_config_flags(mc)
    mc.add_argument("--points", type=int, default=10_000, help="Random sample points")
    mc.add_argument("--seed", type=int, default=0, help="Sampling seed")

    mn = sub.add_parser("minconfig", help="Solve a Birkhoff configuration", formatter_class=fmt)
    _add_config_flags(mn)
    mn.add_argument("--index", type=int, default=None, help="Convergent index (default: M)")
    mn.add_argument("--output", type=str, default=None, help="Write the configuration as JSON")

    cr = sub.add_parser("criteria", help="Full criterion pipeline", formatter_class=fmt)
    _add_config_flags(cr)
    cr.add_argument("--report-format", nargs="+", choices=FORMATS, default=["json"], help="Report formats")
    cr.add_argument("--no-store", action="store_true", help="Do not append to the record store")

    sw = sub.add_parser("sweep", help="Run a config grid", formatter_class=fmt)
    _add_config_flags(sw)
    sw.add_argument("--grid", choices=sorted(GRIDS), default="amplitude", help="Grid kind")
    sw.add_argument("--values", nargs="+", type=float, required=True, help="Grid values")
    sw.add_argument("--sweep-workers", type=int, default=1, help="Configs run in parallel")

    rp = sub.add_parser("report", help="Emit reports of stored records", formatter_class=fmt)
    rp.add_argument("--store-path", default="runs/records", help="Record store path")
    rp.add_argument("--run-id", default=None, help="Only this run (default: all)")
    rp.add_argument("--format", nargs="+", choices=FORMATS, default=["json", "csv"], help="Formats")
    rp.add_argument("--report-dir", default="reports", help="Output directory")

    return parser.parse_args(argv)


def _cmd_cf(args: argparse.Namespace) -> int:
    if args.quotients:
        alpha = from_partial_quotients(args.quotients, args.depth)
    else:
        alpha = preset(args.alpha, args.depth)
    machinery = kappa_machinery(alpha)
    print(f"alpha = {alpha.value_float:.15f}  A = {alpha.bound}  gamma0 = {machinery.gamma0}")
    print(f"{'i':>3} {'a_i+1':>5} {'p_i':>10} {'q_i':>10} {'||q_i a||':>12} {'bracket':>25} {'phi':>8} {'[phi]':>5}")
    for row in cf_table(alpha):
        bracket = f"({row['lower']:.4e}, {row['upper']:.4e})"
        print(
            f"{row['i']:>3} {row['a_next']:>5} {row['p']:>10} {row['q']:>10} "
            f"{row['norm']:>12.5e} {bracket:>25} {row['phi']:>8.3f} {row['phi_floor']:>5}"
        )
    return 0


def _cmd_map_check(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    report = map_check(config.build_twist(), points=args.points, seed=args.seed)
    for key, value in report.to_dict().items():
        print(f"{key:>22}: {value}")
    return 0 if report.passed else 1


def _cmd_minconfig(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    alpha = config.build_alpha()
    index = args.index if args.index is not None else config.M
    p, q = alpha.convergents[index]
    solved = birkhoff_minimize(config.build_twist(alpha), p, q, config.seeds[0], config.tolerance)
    graph = graph_extract(solved)
    print(f"(p, q) = ({p}, {q})  residual = {solved.residual:.3e}  action = {solved.action:.12e}")
    print(f"ordered = {ordering_check(solved)}  graph variation = {graph.graph_variation:.6e}")
    print(f"Holder exponent (second differences) = {graph.holder.exponent:.3f}")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            json.dump(solved.to_record(), handle)
        print(f"Configuration written to {args.output}")
    return 0


def _emit(record, formats: list[str], out_dir: str) -> None:
    for fmt in formats:
        print(f"Report: {emit_report(record, fmt, out_dir)}")


def _cmd_criteria(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    record = run_criteria(config)
    if not args.no_store:
        RecordStore(config.store_path).append(record, config)
    print("\n".join(summary_lines(record)))
    _emit(record, args.report_format, config.report_dir)
    return record.exit_code


def _cmd_sweep(args: argparse.Namespace) -> int:
    base = config_from_args(args)
    if args.grid == "amplitude":
        grid = GRIDS["amplitude"](base, list(args.values))
    else:
        grid = GRIDS[args.grid](base, [int(v) for v in args.values])
    records = run_sweep(grid, RecordStore(base.store_path), workers=args.sweep_workers)
    print(f"{'run':>12} {'status':>10} {'exit':>4}  varied")
    for config, record in zip(grid, records):
        varied = {k: v for k, v in dataclasses.asdict(config).items() if v != getattr(base, k)}
        print(f"{record.run_id:>12} {record.status:>10} {record.exit_code:>4}  {varied}")
    return max(record.exit_code for record in records)


def _cmd_report(args: argparse.Namespace) -> int:
    store = RecordStore(args.store_path)
    emitted = 0
    for record in store.records():
        if args.run_id and record.run_id != args.run_id:
            continue
        _emit(record, args.format, args.report_dir)
        emitted += 1
    if emitted == 0:
        print("No matching records.")
    return 0


COMMANDS = {
    "cf": _cmd_cf,
    "map-check": _cmd_map_check,
    "minconfig": _cmd_minconfig,
    "criteria": _cmd_criteria,
    "sweep": _cmd_sweep,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    args = parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InfeasibleConfigError as exc:
        logger.error("%s", exc)
        return EXIT_INFEASIBLE
    except KamCriteriaError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
