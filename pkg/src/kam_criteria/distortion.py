"""
Distortion: The K0 / K1 / K2 Hierarchy and Sup Estimators

Distortion cocycles of chords under the twist map, the difference quotients
grad1 / grad2, and seeded sample-sup estimators of Lambda_I, Lambda_II,
K0-tilde, K1-tilde, kappa1 and the G-modulus. Every sup is a sample maximum
(a lower bound on the true sup) recorded with its sample count and seed in a
DistortionTable, whose cells merge by maximum.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .chords import (
    Chord,
    ChordPair,
    ChordQuadruple,
    ChordWindow,
    classify_type1,
    comparison_check,
    enumerate_pairs,
    enumerate_quadruples,
    enumerate_type1,
    enumerate_type2,
    iterate_chord,
    kappa_context,
)
from .errors import DegeneracyError, DepthError, EmptyFamilyError, InvalidInputError, SlopeError
from .variational import Configuration

logger = logging.getLogger(__name__)

UNRELIABLE_DROP_FRACTION = 0.10
STEP_RATIO_LOW, STEP_RATIO_HIGH = 1.0 / 3.0, 3.0


@dataclass(frozen=True)
class SupEstimate:
    """
    A sample maximum with its provenance.

    Attributes:
        value: Largest observed value (0.0 for an empty sample)
        samples: Number of objects (chords, pairs, quadruples) sampled
        requested: Iterates requested across the sample
        dropped: Iterates dropped for leaving the window
        near_cutoff: Some sampled lambda lies below the flag threshold
    """

    value: float
    samples: int
    requested: int = 0
    dropped: int = 0
    near_cutoff: bool = False

    @property
    def unreliable(self) -> bool:
        return self.requested > 0 and self.dropped > UNRELIABLE_DROP_FRACTION * self.requested


def _window(config: Configuration, window: ChordWindow | None) -> ChordWindow:
    return window or ChordWindow.for_config(config)


def shifted_thetas(
    config: Configuration, i: int, j: int, shifts: np.ndarray, window: ChordWindow
) -> tuple[np.ndarray, np.ndarray]:
    """
    Theta(F^k (i, j)) for every k in shifts.

    Returns:
        (thetas, valid): thetas are nan where an endpoint leaves the window
    """
    shifts = np.asarray(shifts, dtype=np.int64)
    lo = np.minimum(i, j) + shifts
    hi = np.maximum(i, j) + shifts
    valid = (lo >= window.lo) & (hi < window.hi)
    thetas = np.abs(config.displacement(i + shifts, j + shifts)).astype(np.float64)
    thetas[~valid] = np.nan
    return thetas, valid


def K0(j: int, v: Chord, window: ChordWindow | None = None) -> float:
    """K0(j | v) = ln Theta(F^j v) / Theta(v)."""
    if j == 0:
        return 0.0
    window = _window(v.config, window)
    thetas, valid = shifted_thetas(v.config, v.i, v.j, np.array([j]), window)
    if not valid[0]:
        raise InvalidInputError(f"iterate F^{j} of chord ({v.i}, {v.j}) leaves the window")
    return float(math.log(thetas[0] / v.Theta))


def K0_series(v: Chord, shifts: np.ndarray, window: ChordWindow) -> tuple[np.ndarray, np.ndarray]:
    thetas, valid = shifted_thetas(v.config, v.i, v.j, shifts, window)
    return np.log(thetas) - math.log(v.Theta), valid


def K1(j: int, pair: ChordPair, window: ChordWindow | None = None) -> float:
    """K1(j | v1, v2) = K0(j | v2) - K0(j | v1)."""
    return K0(j, pair.v2, window) - K0(j, pair.v1, window)


def K2(j: int, quad: ChordQuadruple, window: ChordWindow | None = None) -> float:
    """K1(j | v3, v4) / Theta(v3, v4) - K1(j | v1, v2) / Theta(v1, v2)."""
    return K1(j, quad.pair34, window) / quad.pair34.Theta - K1(j, quad.pair12, window) / quad.pair12.Theta


def E1(j: int, pair: ChordPair, window: ChordWindow | None = None) -> float:
    """(Theta(F^j v2)/Theta(v2) - Theta(F^j v1)/Theta(v1)) / Theta(v1, v2)."""
    return (math.exp(K0(j, pair.v2, window)) - math.exp(K0(j, pair.v1, window))) / pair.Theta


def grad1(pair: ChordPair) -> float:
    """(s(v2) - s(v1)) / Theta(v1, v2)."""
    return (pair.v2.s - pair.v1.s) / pair.Theta


def grad2(quad: ChordQuadruple) -> float:
    return grad1(quad.pair34) - grad1(quad.pair12)


def _near(window: ChordWindow, lams) -> bool:
    return bool(np.min(np.asarray(lams, dtype=np.float64)) < window.flag_threshold)


def K0_sups(
    config: Configuration,
    kappa: int,
    N: int,
    budget: int,
    seed: int = 0,
    chords: list[Chord] | None = None,
    window: ChordWindow | None = None,
) -> tuple[SupEstimate, SupEstimate]:
    """
    (K0_N, K0-tilde_N) at kappa: sup |K0(q_N | v)| and sup |K0(j | v)| over |j| <= q_N.

    Raises:
        EmptyFamilyError: No Type-II chord at kappa
    """
    window = _window(config, window)
    chords = chords if chords is not None else enumerate_type2(config, kappa, budget, seed, window)
    q_N = config.twist.alpha.q[N]
    shifts = np.arange(-q_N, q_N + 1)
    k_value = 0.0
    tilde = 0.0
    dropped = 0
    for v in chords:
        series, valid = K0_series(v, shifts, window)
        dropped += int(np.count_nonzero(~valid))
        if valid.any():
            tilde = max(tilde, float(np.nanmax(np.abs(series))))
        if valid[-1]:
            k_value = max(k_value, abs(float(series[-1])))
    requested = len(chords) * len(shifts)
    near = _near(window, [v.lam for v in chords])
    return (
        SupEstimate(k_value, len(chords), near_cutoff=near),
        SupEstimate(tilde, len(chords), requested, dropped, near),
    )


def _pair_series(pair: ChordPair, shifts: np.ndarray, window: ChordWindow) -> tuple[np.ndarray, np.ndarray]:
    s2, valid2 = K0_series(pair.v2, shifts, window)
    s1, valid1 = K0_series(pair.v1, shifts, window)
    return s2 - s1, valid1 & valid2


def K1_sups(
    config: Configuration,
    kappa: int,
    r: int,
    N: int,
    budget: int,
    seed: int = 0,
    pairs: list[ChordPair] | None = None,
    window: ChordWindow | None = None,
) -> tuple[SupEstimate, SupEstimate]:
    """(K1_N(kappa, r), K1-tilde_N(kappa, r)) over sampled (kappa, r) pairs."""
    window = _window(config, window)
    pairs = pairs if pairs is not None else enumerate_pairs(config, kappa, r, budget, seed, window=window)
    q_N = config.twist.alpha.q[N]
    shifts = np.arange(-q_N, q_N + 1)
    k_value = 0.0
    tilde = 0.0
    dropped = 0
    for pair in pairs:
        series, valid = _pair_series(pair, shifts, window)
        dropped += int(np.count_nonzero(~valid))
        if valid.any():
            tilde = max(tilde, float(np.nanmax(np.abs(series))))
        if valid[-1]:
            k_value = max(k_value, abs(float(series[-1])))
    near = _near(window, [p.v1.lam for p in pairs] + [p.v2.lam for p in pairs])
    requested = len(pairs) * len(shifts)
    return (
        SupEstimate(k_value, len(pairs), near_cutoff=near),
        SupEstimate(tilde, len(pairs), requested, dropped, near),
    )


def grad1_sup(
    config: Configuration,
    kappa: int,
    r: int,
    budget: int,
    seed: int = 0,
    pairs: list[ChordPair] | None = None,
    window: ChordWindow | None = None,
) -> SupEstimate:
    """grad1(kappa, r), the sampled sup of |grad1| over (kappa, r) pairs."""
    window = _window(config, window)
    pairs = pairs if pairs is not None else enumerate_pairs(config, kappa, r, budget, seed, window=window)
    value = max(abs(grad1(pair)) for pair in pairs)
    near = _near(window, [p.v1.lam for p in pairs])
    return SupEstimate(value, len(pairs), near_cutoff=near)


def grad2_sup(
    config: Configuration,
    kappa: int,
    r: int,
    s: int,
    budget: int,
    seed: int = 0,
    quads: list[ChordQuadruple] | None = None,
    window: ChordWindow | None = None,
) -> SupEstimate:
    """grad2(kappa, r, s), the sampled sup of |grad2| over (kappa, r, s) quadruples."""
    window = _window(config, window)
    quads = quads if quads is not None else enumerate_quadruples(config, kappa, r, s, budget, seed, window=window)
    value = max(abs(grad2(quad)) for quad in quads)
    near = _near(window, [quad.pair12.v1.lam for quad in quads])
    return SupEstimate(value, len(quads), near_cutoff=near)


def pair_theta_sum(pair: ChordPair, count: int, window: ChordWindow) -> tuple[float, int]:
    """Sum over i < count of Theta(F^i (v1, v2)); returns (sum, dropped iterates)."""
    thetas, valid = shifted_thetas(pair.v1.config, pair.v1.i, pair.v2.i, np.arange(count), window)
    return float(np.nansum(thetas)), int(np.count_nonzero(~valid))


def kappa1(
    config: Configuration,
    r: int,
    R: int,
    kappa: int,
    budget: int,
    seed: int = 0,
    pairs: list[ChordPair] | None = None,
    window: ChordWindow | None = None,
) -> SupEstimate:
    """
    kappa1(r; R, kappa) = sup |K1(q_r | v1, v2)| / sum_{i < q_r} Theta(F^i (v1, v2)) over (kappa, R) pairs.

    Raises:
        InvalidInputError: Unless r <= R <= N-tilde(kappa)
    """
    window = _window(config, window)
    ctx = kappa_context(config.twist.alpha, kappa)
    if not 0 <= r <= R <= ctx.n_tilde:
        raise InvalidInputError(f"kappa1 needs 0 <= r <= R <= {ctx.n_tilde}, got r={r}, R={R}")
    pairs = pairs if pairs is not None else enumerate_pairs(config, kappa, R, budget, seed, window=window)
    q_r = config.twist.alpha.q[r]
    value = 0.0
    dropped = 0
    for pair in pairs:
        denom, lost = pair_theta_sum(pair, q_r, window)
        dropped += lost
        series, valid = _pair_series(pair, np.array([q_r]), window)
        if not valid[0] or denom <= 0.0:
            dropped += 1
            continue
        value = max(value, abs(float(series[0])) / denom)
    return SupEstimate(value, len(pairs), len(pairs) * (q_r + 1), dropped)


def _lambda_ratio(chords: list[Chord]) -> float:
    lam = np.array([v.lam for v in chords])
    theta = np.array([v.Theta for v in chords])
    return float(max(np.max(lam / theta), np.max(theta / lam)))


def lambda_sups(
    config: Configuration,
    kappa: int,
    budget: int,
    seed: int = 0,
    chords: list[Chord] | None = None,
    window: ChordWindow | None = None,
) -> tuple[SupEstimate, SupEstimate]:
    """
    (Lambda_I(kappa), Lambda_II(kappa)), sups of max(lambda/Theta, Theta/lambda).

    The Type-I sample contains the Type-II sample, so Lambda_II <= Lambda_I.
    """
    window = _window(config, window)
    type2 = chords if chords is not None else enumerate_type2(config, kappa, budget, seed, window)
    try:
        type1 = enumerate_type1(config, kappa, budget, seed, window)
    except EmptyFamilyError:
        type1 = []
    union = type2 + [v for v in type1 if classify_type1(v, kappa)]
    lam_ii = _lambda_ratio(type2)
    lam_i = max(_lambda_ratio(union), lam_ii)
    return (
        SupEstimate(lam_i, len(union), near_cutoff=_near(window, [v.lam for v in union])),
        SupEstimate(lam_ii, len(type2), near_cutoff=_near(window, [v.lam for v in type2])),
    )


@dataclass(frozen=True)
class AveragingResult:
    """
    Gap between the orbit average of Theta and lambda for one chord.

    Attributes:
        skipped: True when lambda < 2/q_N or q_N iterates leave the window
        gap: |(1/q_N) sum_{j < q_N} Theta(F^j v) - lambda(v)|
        bound: 1/q_N
    """

    skipped: bool
    reason: str = ""
    gap: float = math.nan
    bound: float = math.nan
    spread: float = math.nan

    @property
    def holds(self) -> bool:
        return self.skipped or self.gap <= self.bound


def averaging_check(config: Configuration, v: Chord, N: int, window: ChordWindow | None = None) -> AveragingResult:
    window = _window(config, window)
    q_N = config.twist.alpha.q[N]
    if v.lam < 2.0 / q_N:
        return AveragingResult(True, f"lambda={v.lam:.3e} below 2/q_{N}={2.0 / q_N:.3e}")
    thetas, valid = shifted_thetas(config, v.i, v.j, np.arange(q_N), window)
    if not valid.all():
        return AveragingResult(True, f"{int(np.count_nonzero(~valid))} of {q_N} iterates leave the window")
    gap = abs(float(np.mean(thetas)) - v.lam)
    spread = float(np.max(np.abs(np.log(thetas / v.Theta))))
    return AveragingResult(False, gap=gap, bound=1.0 / q_N, spread=spread)


def ratio_bracket_holds(v: Chord, averaging: AveragingResult) -> bool:
    """
    Theta/lambda <= e^C (1 + g/lambda) and lambda/Theta <= e^C / (1 - g/lambda), C the
    chord's max |K0| over the averaging window and g its averaging gap.
    """
    if averaging.skipped:
        return True
    c = averaging.spread
    g = averaging.gap / v.lam
    tol = 1e-12
    upper_ok = v.Theta / v.lam <= math.exp(c) * (1.0 + g) * (1 + tol)
    lower_ok = g >= 1.0 or v.lam / v.Theta <= math.exp(c) / (1.0 - g) * (1 + tol)
    return upper_ok and lower_ok


def _reduction_failures(chords: list[Chord], k0_tilde: float, gap_scaled: float) -> int:
    """
    Chords whose max(lambda/Theta, Theta/lambda) exceeds e^K0-tilde (1 + gap_scaled).

    Only chords with a complete averaging window belong in ``chords``; for them
    lambda >= 2/q_N-bar makes the bound a consequence of the ratio bracket.
    """
    limit = math.exp(k0_tilde) * (1.0 + gap_scaled) * (1 + 1e-9)
    return sum(1 for v in chords if max(v.lam / v.Theta, v.Theta / v.lam) > limit)


def g_modulus(
    config: Configuration,
    kappa: int,
    budget: int,
    seed: int = 0,
    pairs: list[ChordPair] | None = None,
    window: ChordWindow | None = None,
) -> SupEstimate:
    """sup |G(v2) - G(v1)| with G = Theta/lambda, over (kappa, N-tilde) pairs."""
    window = _window(config, window)
    ctx = kappa_context(config.twist.alpha, kappa)
    pairs = pairs if pairs is not None else enumerate_pairs(config, kappa, ctx.n_tilde, budget, seed, window=window)
    value = max(abs(p.v2.Theta / p.v2.lam - p.v1.Theta / p.v1.lam) for p in pairs)
    return SupEstimate(value, len(pairs), near_cutoff=_near(window, [p.v1.lam for p in pairs]))


CellKey = tuple[str, int, int | None, int | None]


@dataclass(frozen=True)
class Cell:
    value: float
    samples: int
    seed: int
    unreliable: bool = False
    near_cutoff: bool = False

    def merged(self, other: Cell) -> Cell:
        if (other.value, -other.seed) > (self.value, -self.seed):
            top = other
        else:
            top = self
        return Cell(
            value=top.value,
            samples=max(self.samples, other.samples),
            seed=top.seed,
            unreliable=self.unreliable or other.unreliable,
            near_cutoff=self.near_cutoff or other.near_cutoff,
        )


@dataclass
class DistortionTable:
    """
    Sup estimates keyed by (quantity, kappa, r, s).

    Quantities indexed by kappa alone use r = s = None; per-N checks put N in
    the r slot. Merging takes the cell-wise maximum, so it is associative and
    order-independent.
    """

    cells: dict[CellKey, Cell] = field(default_factory=dict)

    def put(
        self,
        quantity: str,
        kappa: int,
        estimate: SupEstimate | float,
        seed: int,
        r: int | None = None,
        s: int | None = None,
    ) -> None:
        if isinstance(estimate, SupEstimate):
            cell = Cell(estimate.value, estimate.samples, seed, estimate.unreliable, estimate.near_cutoff)
        else:
            cell = Cell(float(estimate), 0, seed)
        key = (quantity, kappa, r, s)
        existing = self.cells.get(key)
        self.cells[key] = cell if existing is None else existing.merged(cell)

    def get(self, quantity: str, kappa: int, r: int | None = None, s: int | None = None) -> float | None:
        cell = self.cells.get((quantity, kappa, r, s))
        return None if cell is None else cell.value

    def cell(self, quantity: str, kappa: int, r: int | None = None, s: int | None = None) -> Cell | None:
        return self.cells.get((quantity, kappa, r, s))

    def kappas(self) -> list[int]:
        return sorted({key[1] for key in self.cells})

    def series(self, quantity: str) -> dict[tuple[int, int | None, int | None], float]:
        return {(k, r, s): c.value for (q, k, r, s), c in self.cells.items() if q == quantity}

    def merge(self, other: DistortionTable) -> DistortionTable:
        merged = DistortionTable(dict(self.cells))
        for key, cell in other.cells.items():
            existing = merged.cells.get(key)
            merged.cells[key] = cell if existing is None else existing.merged(cell)
        return merged

    def to_rows(self) -> list[dict]:
        rows = []
        for (quantity, kappa, r, s), cell in sorted(
            self.cells.items(), key=lambda kv: (kv[0][1], kv[0][0], kv[0][2] or -1, kv[0][3] or -1)
        ):
            rows.append(
                {
                    "quantity": quantity,
                    "kappa": kappa,
                    "r": r,
                    "s": s,
                    "value": cell.value,
                    "samples": cell.samples,
                    "seed": cell.seed,
                    "unreliable": cell.unreliable,
                    "near_cutoff": cell.near_cutoff,
                }
            )
        return rows

    @classmethod
    def from_rows(cls, rows: list[dict]) -> DistortionTable:
        table = cls()
        for row in rows:
            table.cells[(row["quantity"], row["kappa"], row["r"], row["s"])] = Cell(
                value=float(row["value"]),
                samples=int(row["samples"]),
                seed=int(row["seed"]),
                unreliable=bool(row["unreliable"]),
                near_cutoff=bool(row["near_cutoff"]),
            )
        return table


@dataclass(frozen=True)
class Budgets:
    chords: int = 256
    pairs: int = 128
    quads: int = 64
    mixed_fraction: float = 0.25


def _identity_defects(
    chords: list[Chord], window: ChordWindow, rng: np.random.Generator, q_span: int
) -> tuple[float, float, int]:
    """Max cocycle and antisymmetry defects and one-step ratios outside [1/3, 3] over sampled chords."""
    cocycle = 0.0
    antisym = 0.0
    ratio_fail = 0
    for v in chords:
        thetas, valid = shifted_thetas(v.config, v.i, v.j, np.array([-1, 1]), window)
        if valid.all():
            ratios = np.array([thetas[1] / v.Theta, v.Theta / thetas[0]])
            ratio_fail += int(np.count_nonzero((ratios < STEP_RATIO_LOW) | (ratios > STEP_RATIO_HIGH)))
        j, k = (int(x) for x in rng.integers(-q_span, q_span + 1, size=2))
        try:
            shifted = v if j == 0 else _shift(v, j, window)
            lhs = K0(j + k, v, window)
            rhs = K0(k, shifted, window) + K0(j, v, window)
            cocycle = max(cocycle, abs(lhs - rhs))
            back = _shift(v, -j, window) if j else v
            antisym = max(antisym, abs(K0(-j, v, window) + K0(j, back, window)))
        except (InvalidInputError, DepthError, DegeneracyError, SlopeError):
            continue
    return cocycle, antisym, ratio_fail


def _shift(v: Chord, k: int, window: ChordWindow) -> Chord:
    return iterate_chord(v, k, window)


def grad2_indices(n_tilde: int, gamma0: int) -> list[tuple[int, int]]:
    """(r, s) cells where grad2 is tabulated: (N-tilde, N-tilde) and its two lower neighbours."""
    cells = [(n_tilde, n_tilde), (n_tilde, n_tilde - 1), (n_tilde - 1, n_tilde - 1)]
    return [(r, s) for r, s in cells if s >= 2 * gamma0]


def tabulate_kappa(
    config: Configuration,
    kappa: int,
    budgets: Budgets,
    seed: int,
    window: ChordWindow | None = None,
) -> DistortionTable:
    """
    Every sup estimate and monitor for one kappa cell on one seed.

    Chords whose slope breaks the ordering bound are left out of every sample
    and counted as slope_violations.

    Raises:
        EmptyFamilyError: No Type-II chord at kappa
    """
    window = _window(config, window)
    alpha = config.twist.alpha
    ctx = kappa_context(alpha, kappa)
    table = DistortionTable()
    rng = np.random.default_rng(seed)
    skipped: Counter[str] = Counter()

    chords = enumerate_type2(config, kappa, budgets.chords, seed, window, skipped)
    lam_i, lam_ii = lambda_sups(config, kappa, budgets.chords, seed, chords, window)
    table.put("Lambda_I", kappa, lam_i, seed)
    table.put("Lambda_II", kappa, lam_ii, seed)

    k0, k0_tilde = K0_sups(config, kappa, ctx.n_bar, budgets.chords, seed, chords, window)
    table.put("K0_Nbar", kappa, k0, seed)
    table.put("K0tilde_Nbar", kappa, k0_tilde, seed)

    cocycle, antisym, ratio_fail = _identity_defects(chords, window, rng, alpha.q[ctx.n_kappa])
    table.put("cocycle_defect", kappa, cocycle, seed)
    table.put("antisymmetry_defect", kappa, antisym, seed)
    table.put("step_ratio_violations", kappa, float(ratio_fail), seed)

    averaging_fail = 0
    bracket_fail = 0
    averaging_gap = 0.0
    checked: list[Chord] = []
    for v in chords:
        result = averaging_check(config, v, ctx.n_bar, window)
        if result.skipped:
            continue
        checked.append(v)
        averaging_gap = max(averaging_gap, result.gap * alpha.q[ctx.n_bar])
        averaging_fail += 0 if result.holds else 1
        bracket_fail += 0 if ratio_bracket_holds(v, result) else 1
    table.put("averaging_gap_scaled", kappa, averaging_gap, seed)
    table.put("averaging_violations", kappa, float(averaging_fail), seed)
    table.put("ratio_bracket_violations", kappa, float(bracket_fail), seed)
    table.put(
        "reduction_violations",
        kappa,
        float(_reduction_failures(checked, k0_tilde.value, averaging_gap)),
        seed,
    )

    comparison_fail = 0
    for v in chords:
        check = comparison_check(config, v, kappa, window)
        comparison_fail += 0 if check.holds else 1
    table.put("comparison_violations", kappa, float(comparison_fail), seed)

    pairs_by_r: dict[int, list[ChordPair]] = {}
    e1_defect = 0.0
    empty = 0
    for r in range(2 * ctx.gamma0, ctx.n_kappa + 1):
        try:
            pairs = enumerate_pairs(
                config, kappa, r, budgets.pairs, seed, budgets.mixed_fraction, chords, window, skipped
            )
        except EmptyFamilyError as exc:
            logger.warning("kappa=%d r=%d: %s", kappa, r, exc)
            empty += 1
            continue
        pairs_by_r[r] = pairs
        if r > ctx.n_tilde:
            continue
        _, k1_tilde = K1_sups(config, kappa, r, r, budgets.pairs, seed, pairs, window)
        table.put("K1tilde", kappa, k1_tilde, seed, r=r)
        table.put("grad1", kappa, grad1_sup(config, kappa, r, budgets.pairs, seed, pairs, window), seed, r=r)
        lower, upper = 2.0 / alpha.q[r], 1.0 / alpha.q[r - 2 * ctx.gamma0]
        table.put("bound_failures", kappa, float(sum(p.lam <= lower for p in pairs)), seed, r=r)
        table.put("bound_upper_misses", kappa, float(sum(p.lam >= upper for p in pairs)), seed, r=r)
        for pair in pairs:
            e1_defect = max(e1_defect, abs(E1(1, pair, window) - grad1(pair)))
    table.put("E1_defect", kappa, e1_defect, seed)
    table.put("empty_families", kappa, float(empty), seed)

    # Denjoy-type bound K0_N <= 2 K1-tilde_N(kappa, N) on shared samples
    denjoy_fail = 0
    for N, pairs in pairs_by_r.items():
        k0_n, _ = K0_sups(config, kappa, N, budgets.chords, seed, chords, window)
        _, k1_n = K1_sups(config, kappa, N, N, budgets.pairs, seed, pairs, window)
        table.put("K0_N", kappa, k0_n, seed, r=N)
        table.put("K1tilde_N", kappa, k1_n, seed, r=N)
        if k0_n.value > 2.0 * k1_n.value * (1 + 1e-12) + 1e-15:
            denjoy_fail += 1
    table.put("denjoy_violations", kappa, float(denjoy_fail), seed)

    tilde_pairs = pairs_by_r.get(ctx.n_tilde)
    if tilde_pairs:
        coverage = 0.0
        for r in range(0, ctx.n_tilde + 1):
            estimate = kappa1(config, r, ctx.n_tilde, kappa, budgets.pairs, seed, tilde_pairs, window)
            table.put("kappa1", kappa, estimate, seed, r=r, s=ctx.n_tilde)
        q_r = alpha.q[ctx.n_tilde]
        for pair in tilde_pairs:
            total, _ = pair_theta_sum(pair, q_r, window)
            coverage = max(coverage, total)
        table.put("pair_coverage", kappa, coverage, seed)
        table.put("G_modulus", kappa, g_modulus(config, kappa, budgets.pairs, seed, tilde_pairs, window), seed)

    for r, s in grad2_indices(ctx.n_tilde, ctx.gamma0):
        if r not in pairs_by_r:
            continue
        try:
            quads = enumerate_quadruples(config, kappa, r, s, budgets.quads, seed, chords, window, skipped)
        except EmptyFamilyError as exc:
            logger.warning("kappa=%d quadruples at (%d, %d): %s", kappa, r, s, exc)
            continue
        table.put("grad2", kappa, grad2_sup(config, kappa, r, s, budgets.quads, seed, quads, window), seed, r=r, s=s)
        if (r, s) != (ctx.n_tilde, ctx.n_tilde):
            continue
        route_defect = 0.0
        ratio = 0.0
        for quad in quads:
            k2 = K2(1, quad, window)
            route_a = quad.pair34.Theta * k2
            route_b = K1(1, quad.pair34, window) - quad.pair34.Theta / quad.pair12.Theta * K1(1, quad.pair12, window)
            route_defect = max(route_defect, abs(route_a - route_b))
            ratio = max(ratio, abs(k2) / (abs(grad2(quad)) + quad.Theta))
        table.put("k2_route_defect", kappa, route_defect, seed)
        table.put("k2_ratio", kappa, ratio, seed)
    table.put("slope_violations", kappa, float(skipped["slope"]), seed)
    logger.info("kappa=%d seed=%d: %d cells", kappa, seed, len(table.cells))
    return table
