"""
Pipeline: Criterion Runs and Sweeps

run_criteria takes one ExperimentConfig through the full chain: feasibility,
the (p_M, q_M) window solve, per-seed and per-kappa distortion tables, and the
condition evaluation. Each kappa cell draws its seed from
SeedSequence([seed, kappa]), so tables are identical for any worker count.
run_sweep drives a grid of configs through an append-only RecordStore and
skips configs whose records already exist.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .chords import ChordWindow
from .conditions import evaluate_conditions
from .config import ExperimentConfig, check_feasibility
from .distortion import Budgets, DistortionTable, tabulate_kappa
from .errors import EmptyFamilyError, InfeasibleConfigError, InvalidInputError, KamCriteriaError
from .store import RecordStore, RunRecord, utc_now
from .variational import Configuration, el_residual, graph_extract, minimal_window, ordering_check

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INFEASIBLE = 2
EXIT_INTERNAL = 3


def cell_seed(seed: int, kappa: int) -> int:
    """Seed of one (seed, kappa) cell, independent of scheduling."""
    return int(np.random.SeedSequence([seed, kappa]).generate_state(1)[0])


def _tabulate_cell(
    window_config: Configuration,
    kappa: int,
    seed: int,
    budgets: Budgets,
    scale_safety: int,
    flag_factor: int,
) -> tuple[DistortionTable | None, tuple[str, str] | None]:
    window = ChordWindow.for_config(window_config, scale_safety, flag_factor)
    try:
        return tabulate_kappa(window_config, kappa, budgets, cell_seed(seed, kappa), window), None
    except KamCriteriaError as exc:
        return None, (type(exc).__name__, str(exc))


def solver_diagnostics(config: Configuration) -> dict:
    diagnostics = {
        "p": config.p,
        "q": config.q,
        "residual": config.residual,
        "el_residual": el_residual(config),
        "action": config.action,
        "phase": config.phase,
        "iterations": config.iterations,
        "ordered": ordering_check(config),
        "step_bound": config.twist.step_bound(),
        "max_step_increment": float(np.max(np.abs(config.step_increments()))),
    }
    try:
        graph = graph_extract(config)
        diagnostics["graph_variation"] = graph.graph_variation
        diagnostics["orbit_variation"] = graph.orbit_variation
        diagnostics["holder_exponent"] = graph.holder.exponent
    except KamCriteriaError as exc:
        logger.warning("graph extraction failed: %s", exc)
    return diagnostics


def tabulate(
    window_config: Configuration,
    config: ExperimentConfig,
    kappas: list[int],
    record: RunRecord | None = None,
) -> dict[int, DistortionTable]:
    """
    Distortion tables for every seed in the config, one kappa cell at a time.

    Cells run in a process pool when ``config.workers > 1``; results are merged
    in (seed, kappa) order. Failed cells are logged and, if a record is given,
    captured in it with their stage.
    """
    tasks = [(seed, kappa) for seed in config.seeds for kappa in kappas]
    extra = (config.budgets, config.scale_safety, config.flag_factor)
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_tabulate_cell, window_config, kappa, seed, *extra) for seed, kappa in tasks]
            results = [future.result() for future in futures]
    else:
        results = [_tabulate_cell(window_config, kappa, seed, *extra) for seed, kappa in tasks]

    tables: dict[int, DistortionTable] = {seed: DistortionTable() for seed in config.seeds}
    for (seed, kappa), (table, failure) in zip(tasks, results):
        if table is not None:
            tables[seed] = tables[seed].merge(table)
            continue
        name, message = failure
        stage = f"tabulate[seed={seed},kappa={kappa}]"
        logger.warning("%s failed: %s: %s", stage, name, message)
        if record is not None:
            record.errors.append({"stage": stage, "error": name, "message": message})
    return tables


def _exit_code(record: RunRecord) -> int:
    if record.status == "rejected":
        return EXIT_INFEASIBLE
    if any(e["error"] != EmptyFamilyError.__name__ for e in record.errors):
        return EXIT_INTERNAL
    if record.report is not None and record.report.get("violated"):
        return EXIT_VIOLATED
    return EXIT_OK


def _finish(record: RunRecord) -> RunRecord:
    record.exit_code = _exit_code(record)
    record.finished = utc_now()
    return record


def run_criteria(config: ExperimentConfig) -> RunRecord:
    """
    Run the whole criterion pipeline for one config.

    Args:
        config: The experiment

    Returns:
        RunRecord with status "complete", "partial" (holes or failed cells),
        "rejected" (infeasible config, nothing solved) or "failed" (the window
        solve or evaluation raised). Errors are captured with their stage,
        never raised.

    Example:
        >>> from kam_criteria.config import preset_config
        >>> record = run_criteria(preset_config("golden_small"))
        >>> record.report["criteria"]
    """
    record = RunRecord.for_config(config)
    t0 = time.perf_counter()

    try:
        alpha, kappa_range, n_bar = check_feasibility(config)
    except InfeasibleConfigError as exc:
        logger.warning("config %s rejected: %s", record.run_id, exc)
        record.add_error("feasibility", exc)
        record.status = "rejected"
        record.solver["required_m"] = exc.required_m
        return _finish(record)

    try:
        twist = config.build_twist(alpha)
        window_config = minimal_window(
            twist,
            alpha,
            config.M,
            seed=config.seeds[0],
            n_bar_max=n_bar,
            scale_safety=config.scale_safety,
            tolerance=config.tolerance,
        )
        record.solver = solver_diagnostics(window_config)
    except KamCriteriaError as exc:
        logger.error("window solve failed: %s", exc)
        record.add_error("solve", exc)
        record.status = "failed"
        return _finish(record)
    logger.info("run %s: window solved in %.2fs", record.run_id, time.perf_counter() - t0)

    kappas = list(range(kappa_range[0], kappa_range[1] + 1))
    tables = tabulate(window_config, config, kappas, record)
    record.tables = {seed: table.to_rows() for seed, table in tables.items()}
    logger.info(
        "run %s: %d kappa cells tabulated in %.2fs",
        record.run_id,
        len(kappas) * len(config.seeds),
        time.perf_counter() - t0,
    )

    try:
        report = evaluate_conditions(
            tables,
            config.eps,
            alpha,
            kappa_range=kappa_range,
            growth_limit=config.growth_limit,
            stability_band=config.stability_band,
            kappa0=config.kappa0(alpha),
        )
        record.report = report.to_dict()
        record.status = "partial" if (report.partial or record.errors) else "complete"
    except KamCriteriaError as exc:
        logger.error("condition evaluation failed: %s", exc)
        record.add_error("evaluate", exc)
        record.status = "failed"
    _finish(record)
    logger.info("run %s: %s, exit code %d", record.run_id, record.status, record.exit_code)
    return record


def _run_isolated(config: ExperimentConfig) -> RunRecord:
    try:
        return run_criteria(config)
    except Exception as exc:  # noqa: BLE001
        record = RunRecord.for_config(config)
        record.add_error("pipeline", exc)
        record.status = "failed"
        return _finish(record)


def run_sweep(
    grid: list[ExperimentConfig],
    store: RecordStore | None = None,
    workers: int = 1,
) -> list[RunRecord]:
    """
    Run a grid of configs, appending each new record to the store in grid order.

    Configs already in the store (same hash and canonical JSON) are loaded
    instead of recomputed. With ``workers > 1`` pending configs run in a
    process pool, each with a single cell worker.

    Args:
        grid: Configs to run; must be nonempty
        store: Record store for resume and persistence (None keeps records in memory)
        workers: Parallel configs

    Returns:
        One record per grid entry, in grid order
    """
    if not grid:
        raise InvalidInputError("sweep grid is empty")

    records: list[RunRecord | None] = [None] * len(grid)
    pending: list[int] = []
    for i, config in enumerate(grid):
        existing = store.lookup(config) if store is not None else None
        if existing is not None:
            logger.info("resume: %s already stored, skipping", existing.run_id)
            records[i] = existing
        else:
            pending.append(i)
    logger.info("sweep: %d configs, %d to compute", len(grid), len(pending))

    if workers > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {i: pool.submit(_run_isolated, grid[i].replace(workers=1)) for i in pending}
            computed = {i: future.result() for i, future in futures.items()}
    else:
        computed = {i: _run_isolated(grid[i]) for i in pending}

    for i in pending:
        record = computed[i]
        # pool runs used workers=1; keep the requested runtime keys in the record
        record.config = grid[i].to_dict()
        if store is not None and grid[i] not in store:
            store.append(record, grid[i])
        records[i] = record
    return [r for r in records if r is not None]
