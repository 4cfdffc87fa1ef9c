"""
Sweeps: Experiment Grid Generators

Builds lists of ExperimentConfig for run_sweep: potential-amplitude sweeps,
kappa-range sweeps, map-level sweeps and seed replicas around a base config.
"""

from __future__ import annotations

from .config import ExperimentConfig, preset_config
from .errors import InvalidInputError


def amplitude_grid(
    base: ExperimentConfig | None = None,
    amplitudes: list[float] | None = None,
) -> list[ExperimentConfig]:
    """
    Generate configs that differ only in the potential amplitude.

    Useful for tracking how the Lambda_II and K0-tilde envelopes respond as the
    perturbation is switched on.

    Args:
        base: Config to vary (default: the golden_small preset)
        amplitudes: Amplitude scale factors (default: [0, 0.25, 1])

    Returns:
        One config per amplitude, in the given order

    Example:
        >>> grid = amplitude_grid(preset_config("golden_small"), [0.0, 0.25, 1.0])
        >>> [c.amplitude_scale for c in grid]
        [0.0, 0.25, 1.0]
    """
    if base is None:
        base = preset_config("golden_small")
    if amplitudes is None:
        amplitudes = [0.0, 0.25, 1.0]
    return [base.replace(amplitude_scale=float(a)) for a in amplitudes]


def kappa_grid(
    base: ExperimentConfig,
    kappas: list[int],
) -> list[ExperimentConfig]:
    """
    One config per single kappa, so each kappa cell is stored as its own record.

    Args:
        base: Config to vary
        kappas: Kappas to probe

    Returns:
        Configs with kappa_min = kappa_max = kappa
    """
    if not kappas:
        raise InvalidInputError("kappa grid is empty")
    return [base.replace(kappa_min=k, kappa_max=k) for k in kappas]


def level_grid(
    base: ExperimentConfig,
    levels: list[int],
) -> list[ExperimentConfig]:
    """
    Configs at several map levels n, each probing its own default kappa-range.

    Larger n shrinks the perturbation q_n^-(4+eps) V(q_n x); the window index M
    of the base config must be feasible for every level.
    """
    if not levels:
        raise InvalidInputError("level grid is empty")
    return [base.replace(n=n, kappa_min=None, kappa_max=None) for n in levels]


def seed_grid(base: ExperimentConfig, seeds: list[int]) -> list[ExperimentConfig]:
    """Independent single-seed replicas of a config."""
    if not seeds:
        raise InvalidInputError("seed grid is empty")
    return [base.replace(seeds=(int(s),)) for s in seeds]


GRIDS = {
    "amplitude": amplitude_grid,
    "kappa": kappa_grid,
    "level": level_grid,
    "seed": seed_grid,
}
