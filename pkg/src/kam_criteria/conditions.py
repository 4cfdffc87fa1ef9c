"""
Conditions: Criterion Verdicts and the R / S / T Monitors

Reads per-seed DistortionTables and decides, over the probed kappa range,
whether the sampled envelopes of Lambda_I, Lambda_II and K0-tilde stay
bounded, whether conditions R_kappa, S_kappa and T_kappa hold, and whether
the implication pattern R => S => T is respected on the run. Constants the
theory leaves implicit are fitted as the largest observed ratio and reported
with their spread across seeds. Every threshold used is embedded in the report.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from .distortion import DistortionTable
from .errors import DepthError, InvalidInputError
from .number_theory import ConstantTypeIrrational, KappaWindow, kappa_windows

logger = logging.getLogger(__name__)

BOUNDED = "bounded-with-margin"
INCONCLUSIVE = "inconclusive"
VIOLATED = "violated"

ZERO_FLOOR = 1e-12
IDENTITY_TOLERANCE = 1e-12
ANCHOR_TOLERANCE = 1e-9
E1_TOLERANCE = 1e-10
_COUNT_MONITORS = (
    "step_ratio_violations",
    "averaging_violations",
    "ratio_bracket_violations",
    "comparison_violations",
    "denjoy_violations",
    "empty_families",
    "bound_failures",
    "slope_violations",
    "reduction_violations",
)
# summed without a warning; pair lambdas in the band may reach past 1/q_{r - 2 gamma0}
_INFO_COUNTS = ("bound_upper_misses",)
_DEFECT_MONITORS = {
    "cocycle_defect": IDENTITY_TOLERANCE,
    "antisymmetry_defect": IDENTITY_TOLERANCE,
    "k2_route_defect": IDENTITY_TOLERANCE,
    "E1_defect": E1_TOLERANCE,
}


def _json_float(value: float | None) -> float | None:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


@dataclass(frozen=True)
class Thresholds:
    """
    Thresholds a report was judged against.

    Attributes:
        eps: Regularity exponent of the map family
        bound: A_alpha, the largest partial quotient
        r_threshold: eps / (960 A_alpha), the literal grad1 bound of R_kappa
        growth_limit: Largest admissible ratio e(kappa_max) / e(kappa_min)
        stability_band: Largest admissible max/min spread of a fitted constant across seeds
        recursion_step: Factor on grad2 in the one-step recursion monitor
        recursion_jump: 100 (A + 1)^3, factor on grad2 in the window-change monitor
    """

    eps: float
    bound: int
    growth_limit: float = 4.0
    stability_band: float = 2.0

    @property
    def r_threshold(self) -> float:
        return self.eps / (960.0 * self.bound)

    @property
    def recursion_step(self) -> float:
        return 10.0

    @property
    def recursion_jump(self) -> float:
        return 100.0 * (self.bound + 1) ** 3

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "bound": self.bound,
            "r_threshold": self.r_threshold,
            "growth_limit": self.growth_limit,
            "stability_band": self.stability_band,
            "recursion_step": self.recursion_step,
            "recursion_jump": self.recursion_jump,
            "zero_floor": ZERO_FLOOR,
            "identity_tolerance": IDENTITY_TOLERANCE,
            "e1_tolerance": E1_TOLERANCE,
            "anchor_tolerance": ANCHOR_TOLERANCE,
        }


@dataclass(frozen=True)
class Envelope:
    """
    A per-kappa sampled envelope and the constant fitted to it.

    Attributes:
        name: Constant name (C0, C1, C2, ...)
        quantity: What the envelope tracks
        values: kappa -> value, maximum over seeds
        constant: Fitted constant, the maximum of values
        anchor: Constant fitted at the smallest kappa, the threshold of R, S and T
        seed_constants: seed -> constant fitted on that seed alone
        growth: values[kappa_max] / values[kappa_min] with the zero floor applied
        band: max / min of seed_constants
        verdict: BOUNDED, INCONCLUSIVE or VIOLATED
        reason: Why the verdict was reached
    """

    name: str
    quantity: str
    values: dict[int, float]
    constant: float
    seed_constants: dict[int, float]
    growth: float
    band: float
    verdict: str
    reason: str

    @property
    def anchor(self) -> float:
        """The constant fitted at the smallest kappa with a value, nan without samples."""
        if not self.values:
            return math.nan
        return self.values[min(self.values)]

    def within_anchor(self, kappa: int) -> bool | None:
        """values[kappa] <= anchor up to ANCHOR_TOLERANCE; None when kappa has no value."""
        value = self.values.get(kappa)
        if value is None:
            return None
        anchor = self.anchor
        if not (math.isfinite(value) and math.isfinite(anchor)):
            return False
        return value <= max(anchor, ZERO_FLOOR) * (1.0 + ANCHOR_TOLERANCE)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "quantity": self.quantity,
            "values": {str(k): _json_float(v) for k, v in sorted(self.values.items())},
            "constant": _json_float(self.constant),
            "anchor": _json_float(self.anchor),
            "seed_constants": {str(k): _json_float(v) for k, v in sorted(self.seed_constants.items())},
            "growth": _json_float(self.growth),
            "band": _json_float(self.band),
            "verdict": self.verdict,
            "reason": self.reason,
        }


def _ratio(top: float, bottom: float) -> float:
    """Ratio with values below ZERO_FLOOR treated as zero; 0/0 counts as 1."""
    top = 0.0 if abs(top) < ZERO_FLOOR else top
    bottom = 0.0 if abs(bottom) < ZERO_FLOOR else bottom
    if top == 0.0:
        return 1.0
    if bottom == 0.0:
        return math.inf
    return top / bottom


def fit_envelope(
    name: str,
    quantity: str,
    per_seed: Mapping[int, Mapping[int, float]],
    growth_limit: float = 4.0,
    stability_band: float = 2.0,
) -> Envelope:
    """
    Fit a constant to a per-kappa envelope and judge it.

    Args:
        name: Name of the fitted constant
        quantity: Description of the tracked quantity
        per_seed: seed -> {kappa -> value}
        growth_limit: Admissible growth from the smallest to the largest kappa
        stability_band: Admissible spread of the constant across seeds

    Returns:
        Envelope whose verdict is VIOLATED for non-finite values or growth
        beyond the limit, INCONCLUSIVE when the seed band is too wide or no
        value was sampled, and BOUNDED otherwise.

    Example:
        >>> env = fit_envelope("C2", "Lambda_II", {0: {6: 1.2, 7: 1.3}})
        >>> env.constant, env.verdict
        (1.3, 'bounded-with-margin')
    """
    values: dict[int, float] = {}
    for series in per_seed.values():
        for kappa, value in series.items():
            values[kappa] = max(values.get(kappa, -math.inf), value)
    seed_constants = {seed: max(series.values()) for seed, series in per_seed.items() if series}

    if not values:
        return Envelope(name, quantity, {}, math.nan, {}, math.nan, math.nan, INCONCLUSIVE, "no samples")

    constant = max(values.values())
    kappas = sorted(values)
    growth = _ratio(values[kappas[-1]], values[kappas[0]]) if len(kappas) > 1 else 1.0
    band = _ratio(max(seed_constants.values()), min(seed_constants.values()))

    if not all(math.isfinite(v) for v in values.values()):
        verdict, reason = VIOLATED, "non-finite value"
    elif growth > growth_limit:
        verdict, reason = VIOLATED, f"growth {growth:.3g} exceeds {growth_limit:g}"
    elif band > stability_band:
        verdict, reason = INCONCLUSIVE, f"seed band {band:.3g} exceeds {stability_band:g}"
    else:
        verdict, reason = BOUNDED, f"growth {growth:.3g}, seed band {band:.3g}"
    return Envelope(name, quantity, values, constant, seed_constants, growth, band, verdict, reason)


@dataclass(frozen=True)
class ConditionRow:
    """
    Conditions at one kappa. None marks a condition that could not be decided.

    Attributes:
        kappa: Probed kappa
        windows: (n_kappa, N-tilde, N-bar)
        grad1: grad1(kappa, N-tilde), max over seeds
        grad2_scaled: grad2(kappa, N-tilde, N-tilde) * q_{N-tilde}^{eps/3}
        R: grad1 within eps / (960 A) and grad2 within C0 q_{N-tilde}^{-eps/3}
        S: K1-tilde_r(kappa, r) within C1 q_r^{-eps/3} for every sampled r
        T: Lambda_II(kappa) within C2

    C0, C1 and C2 are the envelope anchors, fitted at the smallest kappa.
    """

    kappa: int
    windows: KappaWindow
    grad1: float | None
    grad2_scaled: float | None
    R: bool | None
    S: bool | None
    T: bool | None

    @property
    def implication_holds(self) -> bool:
        if not self.R:
            return True
        return self.S is not False and self.T is not False

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "n_kappa": self.windows.n_kappa,
            "n_tilde": self.windows.n_tilde,
            "n_bar": self.windows.n_bar,
            "grad1": _json_float(self.grad1),
            "grad2_scaled": _json_float(self.grad2_scaled),
            "R": self.R,
            "S": self.S,
            "T": self.T,
            "implication_holds": self.implication_holds,
        }


@dataclass(frozen=True)
class Kappa0Diagnostic:
    """
    Size of kappa_0 that the induction would need for the fitted C0.

    Attributes:
        beta: eps / 3
        eta: 2^-10 beta
        c5: 100 (A + 1)^3 C0
        c6: c5 log2(2A) / (1 - sqrt(2)^-(beta + eta))
        required: 2 log2(2 c6 / eps1) / (beta + eta); None when C0 vanishes
        actual: The run's kappa_0, if known
    """

    beta: float
    eta: float
    c5: float
    c6: float
    required: float | None
    actual: int | None

    @property
    def satisfied(self) -> bool | None:
        if self.required is None:
            return True
        if self.actual is None:
            return None
        return self.actual >= self.required

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "eta": self.eta,
            "c5": _json_float(self.c5),
            "c6": _json_float(self.c6),
            "required": _json_float(self.required),
            "actual": self.actual,
            "satisfied": self.satisfied,
        }


def kappa0_requirement(thresholds: Thresholds, c0: float, actual: int | None = None) -> Kappa0Diagnostic:
    """Evaluate the kappa_0 requirement of the induction for a fitted C0."""
    beta = thresholds.eps / 3.0
    eta = beta / 1024.0
    exponent = beta + eta
    c5 = 100.0 * (thresholds.bound + 1) ** 3 * c0
    c6 = c5 * math.log2(2 * thresholds.bound) / (1.0 - math.sqrt(2.0) ** (-exponent))
    if not math.isfinite(c6):
        required = math.inf
    elif c6 <= 0.0:
        required = None
    else:
        required = 2.0 * math.log2(2.0 * c6 / thresholds.r_threshold) / exponent
    return Kappa0Diagnostic(beta, eta, c5, c6, required, actual)


@dataclass(frozen=True)
class Trend:
    """Least-squares slope of a log-quantity with the reference slope it is compared to."""

    quantity: str
    slope: float | None
    reference: float
    points: int

    @property
    def decays(self) -> bool | None:
        return None if self.slope is None else self.slope < 0.0

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "slope": _json_float(self.slope),
            "reference": self.reference,
            "points": self.points,
            "decays": self.decays,
        }


def _log_slope(xs: list[float], ys: list[float]) -> tuple[float | None, int]:
    pts = [(x, math.log(y)) for x, y in zip(xs, ys) if y is not None and y > ZERO_FLOOR and math.isfinite(y)]
    if len(pts) < 2:
        return None, len(pts)
    arr = np.array(pts)
    slope, _ = np.polyfit(arr[:, 0], arr[:, 1], 1)
    return float(slope), len(pts)


@dataclass
class CriterionReport:
    """
    Verdicts for Criteria 1-3 and conditions R / S / T over a kappa range.

    Attributes:
        kappa_range: Requested (kappa_min, kappa_max)
        kappas: Kappas for which data was present
        holes: Requested kappas with no data (partial report)
        thresholds: Thresholds used
        envelopes: Fitted envelopes keyed by constant name
        criteria: Criterion number -> verdict
        r_verdict: Verdict of the literal R_kappa threshold over the range
        rows: Per-kappa condition rows
        implication_violations: Kappas where R holds but S or T fails
        recursion_violations: (kappa, which) pairs failing a recursion monitor
        monotone_violations: (quantity, kappa, r, s, direction) cells where grad1 or grad2
            decreases from kappa to kappa + 1 ("kappa") or from r + 1 to r ("r")
        anchors: C0, C1 and C2 fitted at the smallest kappa, the R / S / T thresholds
        kappa0: The kappa_0 requirement diagnostic
        trends: Fitted decay trends
        reduction_ratios: kappa -> Lambda_II / (exp(K0-tilde) (1 + scaled averaging gap))
        monitors: Aggregated identity defects and violation counts
        flagged_cells: Number of unreliable or near-cutoff cells
    """

    kappa_range: tuple[int, int]
    kappas: list[int]
    holes: list[int]
    thresholds: Thresholds
    envelopes: dict[str, Envelope]
    criteria: dict[int, str]
    r_verdict: str
    rows: list[ConditionRow]
    implication_violations: list[int] = field(default_factory=list)
    recursion_violations: list[tuple[int, str]] = field(default_factory=list)
    monotone_violations: list[tuple[str, int, int, int | None, str]] = field(default_factory=list)
    anchors: dict[str, float] = field(default_factory=dict)
    kappa0: Kappa0Diagnostic | None = None
    trends: dict[str, Trend] = field(default_factory=dict)
    reduction_ratios: dict[int, float] = field(default_factory=dict)
    monitors: dict[str, float] = field(default_factory=dict)
    flagged_cells: int = 0

    @property
    def violated(self) -> bool:
        """Any criterion or the R threshold came out violated."""
        return self.r_verdict == VIOLATED or VIOLATED in self.criteria.values()

    @property
    def partial(self) -> bool:
        return bool(self.holes)

    @property
    def consistent(self) -> bool:
        return not self.implication_violations

    def row(self, kappa: int) -> ConditionRow | None:
        return next((row for row in self.rows if row.kappa == kappa), None)

    def to_dict(self) -> dict:
        return {
            "kappa_range": list(self.kappa_range),
            "kappas": self.kappas,
            "holes": self.holes,
            "thresholds": self.thresholds.to_dict(),
            "criteria": {str(k): v for k, v in sorted(self.criteria.items())},
            "r_verdict": self.r_verdict,
            "violated": self.violated,
            "envelopes": {k: v.to_dict() for k, v in sorted(self.envelopes.items())},
            "rows": [row.to_dict() for row in self.rows],
            "implication_violations": self.implication_violations,
            "recursion_violations": [list(item) for item in self.recursion_violations],
            "monotone_violations": [list(item) for item in self.monotone_violations],
            "anchors": {k: _json_float(v) for k, v in sorted(self.anchors.items())},
            "kappa0": None if self.kappa0 is None else self.kappa0.to_dict(),
            "trends": {k: v.to_dict() for k, v in sorted(self.trends.items())},
            "reduction_ratios": {str(k): _json_float(v) for k, v in sorted(self.reduction_ratios.items())},
            "monitors": {k: _json_float(v) for k, v in sorted(self.monitors.items())},
            "flagged_cells": self.flagged_cells,
        }


def _scaled(value: float | None, q: int, exponent: float) -> float | None:
    return None if value is None else value * q**exponent


def _per_seed(tables: Mapping[int, DistortionTable], extract) -> dict[int, dict[int, float]]:
    out: dict[int, dict[int, float]] = {}
    for seed, table in tables.items():
        series = {}
        for kappa in table.kappas():
            value = extract(table, kappa)
            if value is not None:
                series[kappa] = value
        out[seed] = series
    return out


def evaluate_conditions(
    tables: Mapping[int, DistortionTable] | DistortionTable,
    eps: float,
    alpha: ConstantTypeIrrational,
    kappa_range: tuple[int, int] | None = None,
    growth_limit: float = 4.0,
    stability_band: float = 2.0,
    kappa0: int | None = None,
) -> CriterionReport:
    """
    Judge Criteria 1-3 and conditions R / S / T on sampled distortion tables.

    Args:
        tables: seed -> DistortionTable, or a single (already merged) table
        eps: Regularity exponent of the map family
        alpha: The rotation number; supplies A_alpha and the convergent denominators
        kappa_range: Requested (kappa_min, kappa_max); defaults to the tabulated span
        growth_limit: Admissible envelope growth across the range
        stability_band: Admissible seed spread of fitted constants
        kappa0: The run's kappa_0, for the requirement diagnostic

    Returns:
        CriterionReport. Missing kappas are listed as holes, never filled in.

    Raises:
        InvalidInputError: eps outside (0, 1) or an empty table set
    """
    if not 0.0 < eps < 1.0:
        raise InvalidInputError(f"eps must lie in (0, 1), got {eps}")
    if isinstance(tables, DistortionTable):
        tables = {0: tables}
    if not tables:
        raise InvalidInputError("no distortion tables to evaluate")

    thresholds = Thresholds(eps=eps, bound=alpha.bound, growth_limit=growth_limit, stability_band=stability_band)
    merged = DistortionTable()
    for table in tables.values():
        merged = merged.merge(table)
    present = merged.kappas()
    if kappa_range is None:
        if not present:
            raise InvalidInputError("distortion tables hold no kappa cells")
        kappa_range = (present[0], present[-1])
    requested = list(range(kappa_range[0], kappa_range[1] + 1))

    windows: dict[int, KappaWindow] = {}
    for kappa in requested:
        try:
            windows[kappa] = kappa_windows(alpha, kappa)
        except DepthError as exc:
            logger.warning("kappa=%d has no window: %s", kappa, exc)
    kappas = [k for k in requested if k in present and k in windows]
    holes = [k for k in requested if k not in kappas]
    if holes:
        logger.warning("partial report, no data for kappa %s", holes)

    exponent = eps / 3.0
    q = alpha.q

    def in_range(extract):
        def wrapped(table: DistortionTable, kappa: int):
            return extract(table, kappa) if kappa in windows and kappa in kappas else None

        return wrapped

    def k1_scaled(table: DistortionTable, kappa: int) -> float | None:
        values = [
            value * q[r] ** exponent
            for (k, r, _), value in table.series("K1tilde").items()
            if k == kappa and r is not None
        ]
        return max(values) if values else None

    def c0_value(table: DistortionTable, kappa: int) -> float | None:
        nt = windows[kappa].n_tilde
        return _scaled(table.get("grad2", kappa, nt, nt), q[nt], exponent)

    def c4_value(table: DistortionTable, kappa: int) -> float | None:
        nt = windows[kappa].n_tilde
        return _scaled(table.get("G_modulus", kappa), q[nt], exponent)

    extractors = {
        "Lambda_I": ("Lambda_I(kappa)", lambda t, k: t.get("Lambda_I", k)),
        "C2": ("Lambda_II(kappa)", lambda t, k: t.get("Lambda_II", k)),
        "C3": ("K0-tilde_{N-bar}(kappa)", lambda t, k: t.get("K0tilde_Nbar", k)),
        "C0": ("grad2(kappa, N-tilde, N-tilde) q^{eps/3}", c0_value),
        "C1": ("max_r K1-tilde_r(kappa, r) q_r^{eps/3}", k1_scaled),
        "C4": ("G-modulus q_{N-tilde}^{eps/3}", c4_value),
        "K2_ratio": ("|K2| / (grad2 + Theta)", lambda t, k: t.get("k2_ratio", k)),
    }
    envelopes = {
        name: fit_envelope(name, label, _per_seed(tables, in_range(extract)), growth_limit, stability_band)
        for name, (label, extract) in extractors.items()
    }
    criteria = {1: envelopes["Lambda_I"].verdict, 2: envelopes["C2"].verdict, 3: envelopes["C3"].verdict}

    rows: list[ConditionRow] = []
    r_verdict = BOUNDED if kappas else INCONCLUSIVE
    for kappa in kappas:
        win = windows[kappa]
        grad1 = merged.get("grad1", kappa, win.n_tilde)
        grad2_scaled = envelopes["C0"].values.get(kappa)
        if grad1 is None:
            R = None
        elif not math.isfinite(grad1) or grad1 > thresholds.r_threshold:
            R = False
        else:
            R = envelopes["C0"].within_anchor(kappa)
        if grad1 is not None and (not math.isfinite(grad1) or grad1 > thresholds.r_threshold):
            r_verdict = VIOLATED
        elif grad1 is None and r_verdict == BOUNDED:
            r_verdict = INCONCLUSIVE
        S = envelopes["C1"].within_anchor(kappa)
        T = envelopes["C2"].within_anchor(kappa)
        rows.append(ConditionRow(kappa, win, grad1, grad2_scaled, R, S, T))

    implication = [row.kappa for row in rows if not row.implication_holds]
    for kappa in implication:
        logger.warning("kappa=%d: R holds but S or T fails; the run is internally inconsistent", kappa)

    report = CriterionReport(
        kappa_range=tuple(kappa_range),
        kappas=kappas,
        holes=holes,
        thresholds=thresholds,
        envelopes=envelopes,
        criteria=criteria,
        r_verdict=r_verdict,
        rows=rows,
        implication_violations=implication,
        recursion_violations=_recursion_monitors(merged, windows, kappas, thresholds),
        monotone_violations=_monotone_monitor(merged, kappas),
        anchors={name: envelopes[name].anchor for name in ("C0", "C1", "C2")},
        kappa0=kappa0_requirement(thresholds, envelopes["C0"].constant, kappa0)
        if math.isfinite(envelopes["C0"].constant)
        else None,
        trends=_trends(merged, windows, kappas, eps, alpha),
        reduction_ratios=_reduction_ratios(merged, kappas),
        monitors=_monitors(merged),
        flagged_cells=sum(1 for c in merged.cells.values() if c.unreliable or c.near_cutoff),
    )
    if report.flagged_cells:
        logger.warning("%d cells are unreliable or near the scale cutoff", report.flagged_cells)
    logger.info(
        "criteria %s, R %s over kappa %s",
        {k: v for k, v in criteria.items()},
        r_verdict,
        kappa_range,
    )
    return report


def _recursion_monitors(
    table: DistortionTable,
    windows: Mapping[int, KappaWindow],
    kappas: list[int],
    thresholds: Thresholds,
) -> list[tuple[int, str]]:
    """Check how grad1 at N-tilde may grow from kappa to kappa + 1."""
    failures = []
    present = set(kappas)
    for kappa in kappas:
        if kappa + 1 not in present:
            continue
        nt = windows[kappa].n_tilde
        nt_next = windows[kappa + 1].n_tilde
        base = table.get("grad1", kappa, nt)
        g2 = table.get("grad2", kappa, nt, nt)
        if base is None or g2 is None:
            continue
        same = table.get("grad1", kappa + 1, nt)
        if same is not None and same > base + thresholds.recursion_step * g2:
            failures.append((kappa, "step"))
        moved = table.get("grad1", kappa + 1, nt_next)
        if moved is not None and moved > base + thresholds.recursion_jump * g2:
            failures.append((kappa, "jump"))
    for kappa, which in failures:
        logger.warning("kappa=%d: recursion monitor '%s' exceeded", kappa, which)
    return failures


MonotoneCell = tuple[str, int, int, int | None, str]


def _decreases(value: float, upper: float | None) -> bool:
    return upper is not None and value > upper * (1.0 + 1e-12) + ZERO_FLOOR


def _monotone_monitor(table: DistortionTable, kappas: list[int]) -> list[MonotoneCell]:
    """
    Sampled grad1 and grad2 against the nesting of their families.

    grad(kappa, r, s) <= grad(kappa + 1, r, s) on every shared cell, and
    grad(kappa + 1, r, s) <= grad(kappa + 1, r + 1, s) for r <= kappa.
    """
    present = set(kappas)
    failures: list[MonotoneCell] = []
    for quantity in ("grad1", "grad2"):
        series = table.series(quantity)
        for (kappa, r, s), value in sorted(series.items(), key=lambda kv: (kv[0][0], kv[0][1] or -1, kv[0][2] or -1)):
            if kappa not in present or r is None:
                continue
            if _decreases(value, series.get((kappa + 1, r, s))):
                failures.append((quantity, kappa, r, s, "kappa"))
            if r < kappa and _decreases(value, series.get((kappa, r + 1, s))):
                failures.append((quantity, kappa, r, s, "r"))
    if failures:
        logger.warning("grad1 / grad2 not monotone at %s", failures)
    return failures


def _trends(
    table: DistortionTable,
    windows: Mapping[int, KappaWindow],
    kappas: list[int],
    eps: float,
    alpha: ConstantTypeIrrational,
) -> dict[str, Trend]:
    trends = {}
    kappa1 = table.series("kappa1")
    for kappa in kappas:
        nt = windows[kappa].n_tilde
        pts = sorted((r, v) for (k, r, s), v in kappa1.items() if k == kappa and s == nt and r is not None)
        slope, count = _log_slope([float(r) for r, _ in pts], [v for _, v in pts])
        trends[f"kappa1@{kappa}"] = Trend("log kappa1(r) against r", slope, 0.5 * eps * math.log(0.9), count)

    xs, ys = [], []
    for kappa in kappas:
        value = table.get("G_modulus", kappa)
        if value is not None:
            xs.append(math.log(alpha.q[windows[kappa].n_tilde]))
            ys.append(value)
    slope, count = _log_slope(xs, ys)
    trends["G_modulus"] = Trend("log G-modulus against log q_{N-tilde}", slope, -eps / 3.0, count)
    return trends


def _reduction_ratios(table: DistortionTable, kappas: list[int]) -> dict[int, float]:
    ratios = {}
    for kappa in kappas:
        lam = table.get("Lambda_II", kappa)
        k0 = table.get("K0tilde_Nbar", kappa)
        gap = table.get("averaging_gap_scaled", kappa)
        if lam is None or k0 is None or gap is None:
            continue
        ratios[kappa] = lam / (math.exp(k0) * (1.0 + gap))
        if ratios[kappa] > 1.0 + ANCHOR_TOLERANCE:
            logger.warning("kappa=%d: Lambda_II at %.3g of its reduction bound", kappa, ratios[kappa])
    return ratios


def _monitors(table: DistortionTable) -> dict[str, float]:
    monitors: dict[str, float] = {}
    for (quantity, _, _, _), cell in table.cells.items():
        if quantity in _COUNT_MONITORS or quantity in _INFO_COUNTS:
            monitors[quantity] = monitors.get(quantity, 0.0) + cell.value
        elif quantity in _DEFECT_MONITORS or quantity == "pair_coverage":
            monitors[quantity] = max(monitors.get(quantity, 0.0), cell.value)
    for quantity, tolerance in _DEFECT_MONITORS.items():
        if monitors.get(quantity, 0.0) > tolerance:
            logger.warning("%s = %.3g exceeds %.0e", quantity, monitors[quantity], tolerance)
    for quantity in _COUNT_MONITORS:
        if monitors.get(quantity, 0.0) > 0:
            logger.warning("%s: %d", quantity, int(monitors[quantity]))
    return monitors
