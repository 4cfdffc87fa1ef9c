"""
Config: Experiment Configuration, Presets and Feasibility

An ExperimentConfig names everything a run depends on: the rotation number,
the map level, the potential, the probed kappa-range, the window convergent,
the sampling budgets and the seeds. Configs load from JSON objects of the same
keys, hash canonically for resume, and are checked for feasibility before any
solve.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .distortion import Budgets
from .errors import DepthError, InfeasibleConfigError, InvalidInputError
from .number_theory import (
    ConstantTypeIrrational,
    from_partial_quotients,
    kappa_of_n,
    kappa_windows,
    preset,
)
from .twist_map import Potential, TwistMap, default_potential
from .variational import required_window_index

logger = logging.getLogger(__name__)

# Keys that never change a result and are left out of the config hash.
RUNTIME_KEYS = frozenset({"workers", "store_path", "report_dir"})
KAPPA_SPAN = 4


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One run of the criterion pipeline.

    Attributes:
        alpha: Preset name ("golden", "silver") or None to use ``quotients``
        quotients: One period of partial quotients when ``alpha`` is None
        depth: Number of stored partial quotients
        n: Map level, fixing q_n in the generating function
        eps: Regularity exponent in (0, 1)
        potential: Fourier pairs [k, c_k]; None selects (2 pi)^-2 cos(2 pi x)
        amplitude_scale: Factor applied to the potential
        kappa_min, kappa_max: Probed kappa-range; None selects kappa_0 and kappa_0 + 4
        M: Window convergent index, the solved orbit has period q_M
        chord_budget, pair_budget, quad_budget: Samples per kappa cell
        seeds: One DistortionTable is tabulated per seed
        mixed_fraction: Share of mixed-step pairs in pair samples
        scale_safety: Chord scales below scale_safety / q_M are not trusted
        flag_factor: Quantities within flag_factor cutoffs are flagged
        growth_limit: Envelope growth that counts as unbounded
        stability_band: Seed spread of fitted constants that counts as unstable
        tolerance: Euler-Lagrange residual target
        workers: Worker processes for kappa cells
        store_path: Record store path (without suffix)
        report_dir: Directory for emitted reports
    """

    alpha: str | None = "golden"
    quotients: tuple[int, ...] | None = None
    depth: int = 30
    n: int = 10
    eps: float = 0.5
    potential: tuple[tuple[int, float], ...] | None = None
    amplitude_scale: float = 1.0
    kappa_min: int | None = None
    kappa_max: int | None = None
    M: int = 27
    chord_budget: int = 256
    pair_budget: int = 128
    quad_budget: int = 64
    seeds: tuple[int, ...] = (0, 1, 2)
    mixed_fraction: float = 0.25
    scale_safety: int = 8
    flag_factor: int = 64
    growth_limit: float = 4.0
    stability_band: float = 2.0
    tolerance: float = 1e-10
    workers: int = 1
    store_path: str = "runs/records"
    report_dir: str = "reports"

    def __post_init__(self) -> None:
        if self.alpha is None and not self.quotients:
            raise InvalidInputError("either alpha or quotients must be given")
        if not 0.0 < self.eps < 1.0:
            raise InvalidInputError(f"eps must lie in (0, 1), got {self.eps}")
        if self.kappa_min is not None and self.kappa_max is not None and self.kappa_min > self.kappa_max:
            raise InvalidInputError(f"kappa_min={self.kappa_min} exceeds kappa_max={self.kappa_max}")
        for name in ("chord_budget", "pair_budget", "quad_budget", "workers", "scale_safety", "flag_factor"):
            if getattr(self, name) < 1:
                raise InvalidInputError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.seeds:
            raise InvalidInputError("at least one seed is required")
        if not 0.0 <= self.mixed_fraction <= 1.0:
            raise InvalidInputError(f"mixed_fraction must lie in [0, 1], got {self.mixed_fraction}")
        if self.growth_limit <= 1.0 or self.stability_band < 1.0:
            raise InvalidInputError("growth_limit must exceed 1 and stability_band must be at least 1")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExperimentConfig:
        """
        Build a config from a JSON-style mapping.

        Raises:
            InvalidInputError: Unknown keys or values of the wrong shape
        """
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidInputError(f"unknown config keys: {', '.join(unknown)}")
        values = dict(data)
        try:
            if values.get("quotients") is not None:
                values["quotients"] = tuple(int(a) for a in values["quotients"])
            if values.get("potential") is not None:
                values["potential"] = tuple((int(k), float(c)) for k, c in values["potential"])
            if "seeds" in values:
                values["seeds"] = tuple(int(s) for s in values["seeds"])
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed config value: {exc}") from exc
        return cls(**values)

    def to_dict(self) -> dict[str, Any]:
        data = dataclasses.asdict(self)
        data["quotients"] = None if self.quotients is None else list(self.quotients)
        data["potential"] = None if self.potential is None else [list(t) for t in self.potential]
        data["seeds"] = list(self.seeds)
        return data

    def canonical_json(self) -> str:
        """Sorted, compact JSON of every result-relevant key."""
        data = {k: v for k, v in self.to_dict().items() if k not in RUNTIME_KEYS}
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    def replace(self, **changes: Any) -> ExperimentConfig:
        return dataclasses.replace(self, **changes)

    def build_alpha(self) -> ConstantTypeIrrational:
        if self.alpha is not None:
            return preset(self.alpha, self.depth)
        return from_partial_quotients(list(self.quotients or ()), self.depth)

    def build_potential(self) -> Potential:
        base = default_potential() if self.potential is None else Potential.from_pairs(list(self.potential))
        return base.scaled(self.amplitude_scale)

    def build_twist(self, alpha: ConstantTypeIrrational | None = None) -> TwistMap:
        return TwistMap(alpha or self.build_alpha(), self.n, self.eps, self.build_potential())

    @property
    def budgets(self) -> Budgets:
        return Budgets(self.chord_budget, self.pair_budget, self.quad_budget, self.mixed_fraction)

    def kappa0(self, alpha: ConstantTypeIrrational | None = None) -> int:
        return kappa_of_n(alpha or self.build_alpha(), self.n)

    def kappa_range(self, alpha: ConstantTypeIrrational | None = None) -> tuple[int, int]:
        """Probed (kappa_min, kappa_max) with defaults kappa_0 and kappa_0 + 4 filled in."""
        if self.kappa_min is not None and self.kappa_max is not None:
            return self.kappa_min, self.kappa_max
        alpha = alpha or self.build_alpha()
        lo = self.kappa_min if self.kappa_min is not None else self.kappa0(alpha)
        hi = self.kappa_max if self.kappa_max is not None else lo + KAPPA_SPAN
        if lo > hi:
            raise InvalidInputError(f"kappa range [{lo}, {hi}] is empty")
        return lo, hi


def check_feasibility(config: ExperimentConfig) -> tuple[ConstantTypeIrrational, tuple[int, int], int]:
    """
    Check that the window resolves every probed kappa before anything is solved.

    Requires q_M >= scale_safety * q_{N-bar(kappa_max)} and M within depth.

    Returns:
        (alpha, kappa range, N-bar at kappa_max)

    Raises:
        InfeasibleConfigError: The window is too short; carries the smallest feasible M
    """
    try:
        alpha = config.build_alpha()
        lo, hi = config.kappa_range(alpha)
        n_bar = kappa_windows(alpha, hi).n_bar
    except DepthError as exc:
        raise InfeasibleConfigError(f"kappa range cannot be indexed at depth {config.depth}: {exc}") from exc
    if not 1 <= config.M <= alpha.depth:
        raise InfeasibleConfigError(f"M={config.M} outside [1, {alpha.depth}]")
    required = required_window_index(alpha, n_bar, config.scale_safety)
    if required is None or config.M < required:
        needed = config.scale_safety * alpha.q[n_bar]
        raise InfeasibleConfigError(
            f"q_M={alpha.q[config.M]} is below {config.scale_safety} * q_{n_bar} = {needed}; "
            f"need M >= {required if required is not None else 'beyond depth ' + str(alpha.depth)}",
            required,
        )
    logger.debug("feasible: kappa [%d, %d], N-bar %d, q_M %d", lo, hi, n_bar, alpha.q[config.M])
    return alpha, (lo, hi), n_bar


PRESETS: dict[str, dict[str, Any]] = {
    "golden_acceptance": {
        "alpha": "golden",
        "depth": 30,
        "n": 10,
        "eps": 0.5,
        "amplitude_scale": 1e-3,
        "M": 27,
        "chord_budget": 256,
        "pair_budget": 128,
        "quad_budget": 64,
        "seeds": [0, 1, 2],
    },
    "golden_control": {
        "alpha": "golden",
        "depth": 30,
        "n": 10,
        "eps": 0.5,
        "amplitude_scale": 1e3,
        "M": 27,
        "chord_budget": 256,
        "pair_budget": 128,
        "quad_budget": 64,
        "seeds": [0, 1, 2],
    },
    "golden_small": {
        "alpha": "golden",
        "depth": 24,
        "n": 6,
        "eps": 0.5,
        "amplitude_scale": 1e-3,
        "kappa_min": 5,
        "kappa_max": 6,
        "M": 21,
        "chord_budget": 32,
        "pair_budget": 16,
        "quad_budget": 8,
        "seeds": [0],
    },
    "golden_small_control": {
        "alpha": "golden",
        "depth": 24,
        "n": 6,
        "eps": 0.5,
        "amplitude_scale": 1.0,
        "kappa_min": 5,
        "kappa_max": 6,
        "M": 21,
        "chord_budget": 32,
        "pair_budget": 16,
        "quad_budget": 8,
        "seeds": [0],
    },
    "silver_small": {
        "alpha": "silver",
        "depth": 20,
        "n": 2,
        "eps": 0.5,
        "amplitude_scale": 1e-3,
        "kappa_min": 3,
        "kappa_max": 3,
        "M": 13,
        "chord_budget": 32,
        "pair_budget": 16,
        "quad_budget": 8,
        "seeds": [0],
    },
}


def preset_config(name: str, **overrides: Any) -> ExperimentConfig:
    """Named preset with optional key overrides."""
    if name not in PRESETS:
        raise InvalidInputError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return ExperimentConfig.from_dict({**PRESETS[name], **overrides})


def load_config(path: str | Path, **overrides: Any) -> ExperimentConfig:
    """
    Read a JSON config file; keyword overrides (e.g. CLI flags) win over file values.

    A ``preset`` key selects a named preset as the base for the remaining keys.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InvalidInputError(f"{path}: config must be a JSON object")
    base: dict[str, Any] = {}
    if "preset" in data:
        name = data.pop("preset")
        if name not in PRESETS:
            raise InvalidInputError(f"{path}: unknown preset {name!r}")
        base = PRESETS[name]
    return ExperimentConfig.from_dict({**base, **data, **overrides})
