"""
Chords: Chord Algebra over a Minimal Configuration

A chord is an index pair (i, j) of a Configuration together with its
arithmetic length lambda = ||(j - i) alpha|| (true alpha, extended precision)
and its geometric length Theta = ||x_j - x_i||. This module classifies chords
into the dyadic Type-I / Type-II families, builds the (kappa, r) pair and
(kappa, r, s) quadruple families, and enumerates seeded, prefix-nested
samples of all three for the sup estimators.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DegeneracyError,
    DepthError,
    EmptyFamilyError,
    InvalidInputError,
    InvariantViolation,
    SlopeError,
)
from .number_theory import ConstantTypeIrrational, kappa_machinery, kappa_windows
from .variational import DEGENERACY_FLOOR, Configuration

logger = logging.getLogger(__name__)

S_MAX = 2.0
BAND_WIDTH = 16.0
# Fractional part of the golden mean, drives the low-discrepancy base index sequence.
_WEYL_STEP = (math.sqrt(5.0) - 1.0) / 2.0
_ATTEMPT_FACTOR = 20
DEFAULT_POOL = 64
SPAN_REASON = "ordering: span exceeds 1/2"


@dataclass(frozen=True)
class ChordWindow:
    """
    Validated index window of a (p_M, q_M) configuration.

    Attributes:
        q: Period of the window configuration
        lo, hi: Admissible indices lie in [lo, hi) = [-q, 2q)
        cutoff: Smallest trusted scale, scale_safety / q
        flag_threshold: Quantities at lambda below flag_factor * cutoff are flagged
        max_step: Largest admissible index step, q // scale_safety
    """

    q: int
    lo: int
    hi: int
    cutoff: float
    flag_threshold: float
    max_step: int

    @classmethod
    def for_config(
        cls, config: Configuration, scale_safety: int = 8, flag_factor: int = 64
    ) -> ChordWindow:
        q = config.q
        cutoff = scale_safety / q
        return cls(
            q=q,
            lo=-q,
            hi=2 * q,
            cutoff=cutoff,
            flag_threshold=flag_factor * cutoff,
            max_step=q // scale_safety,
        )

    def contains(self, *indices: int) -> bool:
        return all(self.lo <= k < self.hi for k in indices)


@dataclass(frozen=True, eq=False)
class Chord:
    """
    A left-to-right chord v = (i, j) with cached lengths and slope.

    Attributes:
        config: Configuration the indices refer to
        i, j: Endpoint indices, oriented so that x_j lies to the right of x_i
        lam: lambda(v) = ||(j - i) alpha||
        theta: Reduced displacement x_j - x_i, in [0, 1/2]
        r: y_j - y_i
    """

    config: Configuration
    i: int
    j: int
    lam: float
    theta: float
    r: float

    @property
    def Theta(self) -> float:
        return abs(self.theta)

    @property
    def s(self) -> float:
        return self.r / self.Theta

    @property
    def step(self) -> int:
        return self.j - self.i

    def to_dict(self) -> dict[str, float | int]:
        return {"i": self.i, "j": self.j, "lam": self.lam, "Theta": self.Theta, "r": self.r, "s": self.s}


def _alpha(config: Configuration) -> ConstantTypeIrrational:
    return config.twist.alpha


def _tally(skipped: Counter[str] | None, exc: SlopeError) -> None:
    if skipped is not None:
        skipped["slope"] += 1
    logger.debug("skipped: %s", exc)


def make_chord(
    config: Configuration, i: int, j: int, window: ChordWindow | None = None
) -> Chord:
    """
    Build the chord joining orbit points i and j.

    The pair is reoriented so that the reduced displacement is non-negative.

    Raises:
        InvalidInputError: i == j
        DepthError: An index outside the window [-q, 2q)
        DegeneracyError: Theta below 1e-13
        SlopeError: |s| above S_MAX
    """
    if i == j:
        raise InvalidInputError("a chord needs two distinct indices")
    window = window or ChordWindow.for_config(config)
    if not window.contains(i, j):
        raise DepthError(f"chord indices ({i}, {j}) outside window [{window.lo}, {window.hi})", max(abs(i), abs(j)))
    theta = float(config.displacement(i, j))
    if theta < 0.0:
        i, j, theta = j, i, -theta
    if theta < DEGENERACY_FLOOR:
        raise DegeneracyError(f"chord ({i}, {j}) has Theta = {theta:.3e}")
    lam = _alpha(config).norm_multiple(j - i)
    r = float(config.y_at(j) - config.y_at(i))
    chord = Chord(config=config, i=int(i), j=int(j), lam=lam, theta=theta, r=r)
    if abs(chord.s) > S_MAX:
        raise SlopeError(f"chord ({i}, {j}) has slope {chord.s:.3e} beyond {S_MAX}", chord.s)
    return chord


def iterate_chord(v: Chord, k: int, window: ChordWindow | None = None) -> Chord:
    """F^k applied to v: the chord (i + k, j + k); lambda is unchanged."""
    if k == 0:
        return v
    return make_chord(v.config, v.i + k, v.j + k, window)


def classify_type1(v: Chord, kappa: int) -> bool:
    """lambda(v) in [2^-(kappa+4), 2^-kappa]."""
    return math.ldexp(1.0, -(kappa + 4)) <= v.lam <= math.ldexp(1.0, -kappa)


@dataclass(frozen=True)
class KappaContext:
    """
    Bands of the Type-II family at one kappa.

    Attributes:
        kappa: Requested dyadic scale
        kappa_check: kappa itself if in S, else the largest element of S below it
        n_kappa, n_tilde, n_bar: Index windows
        gamma0: Offset between pair and chord scales
        norm: ||q_{n_kappa} alpha||
        growth: (A + 1)^6, the step bracket factor
    """

    kappa: int
    kappa_check: int
    n_kappa: int
    n_tilde: int
    n_bar: int
    gamma0: int
    q_n: int
    norm: float
    growth: int

    def step_in_band(self, d: int) -> bool:
        d = abs(d)
        return d * self.growth >= self.q_n and d <= self.growth * self.q_n

    def lam_in_band(self, lam: float) -> bool:
        return self.norm <= lam <= BAND_WIDTH * self.norm


@lru_cache(maxsize=256)
def kappa_context(alpha: ConstantTypeIrrational, kappa: int) -> KappaContext:
    machinery = kappa_machinery(alpha)
    windows = kappa_windows(alpha, kappa)
    return KappaContext(
        kappa=kappa,
        kappa_check=machinery.kappa_check(kappa),
        n_kappa=windows.n_kappa,
        n_tilde=windows.n_tilde,
        n_bar=windows.n_bar,
        gamma0=machinery.gamma0,
        q_n=alpha.q[windows.n_kappa],
        norm=alpha.qalpha_norm(windows.n_kappa),
        growth=(alpha.bound + 1) ** 6,
    )


def classify_type2(v: Chord, kappa: int) -> bool:
    """
    Type-II membership: Type-I, step within (A+1)^+-6 q_{n_kappa} and
    lambda in [||q_{n_kappa} alpha||, 16 ||q_{n_kappa} alpha||].

    Raises:
        InvariantViolation: A member breaks 2/q_{N-bar} < lambda < 2/q_{N-tilde}
    """
    alpha = _alpha(v.config)
    ctx = kappa_context(alpha, kappa)
    member = classify_type1(v, kappa) and ctx.step_in_band(v.step) and ctx.lam_in_band(v.lam)
    if member and ctx.n_kappa >= 2:
        upper = 2.0 / alpha.q[ctx.n_tilde]
        lower = 2.0 / alpha.q[ctx.n_bar]
        if not lower < v.lam < upper:
            raise InvariantViolation(
                f"Type-II chord at kappa={kappa} has lambda {v.lam:.3e} outside ({lower:.3e}, {upper:.3e})"
            )
    return member


def _scan_steps(
    alpha: ConstantTypeIrrational,
    center: int,
    growth: int,
    norm: float,
    max_step: int,
    extra_band: tuple[float, float] | None = None,
) -> list[int]:
    """Steps d within (A+1)^+-6 of center whose ||d alpha|| lies in [norm, 16 norm]."""
    lo = max(1, -(-center // growth))
    hi = min(growth * center, max_step)
    if hi < lo:
        return []
    candidates = np.arange(lo, hi + 1, dtype=np.int64)
    approx = alpha.approx_norms(candidates)
    slack = 1e-9
    low_band, high_band = norm, BAND_WIDTH * norm
    if extra_band is not None:
        low_band = max(low_band, extra_band[0])
        high_band = min(high_band, extra_band[1])
    mask = (approx >= low_band * (1 - slack)) & (approx <= high_band * (1 + slack))
    steps = []
    for d in candidates[mask].tolist():
        lam = alpha.norm_multiple(d)
        if low_band <= lam <= high_band:
            steps.append(int(d))
    return steps


def type2_steps(alpha: ConstantTypeIrrational, kappa: int, max_step: int) -> list[int]:
    """Admissible Type-II steps at kappa, canonical q_{n_kappa} first when admissible."""
    ctx = kappa_context(alpha, kappa)
    band = (math.ldexp(1.0, -(kappa + 4)), math.ldexp(1.0, -kappa))
    steps = _scan_steps(alpha, ctx.q_n, ctx.growth, ctx.norm, max_step, band)
    if ctx.q_n in steps:
        steps.remove(ctx.q_n)
        steps.insert(0, ctx.q_n)
    return steps


def weyl_indices(q: int, count: int, seed: int) -> np.ndarray:
    """Base indices floor(frac(k phi + u0) q), k = 0..count-1; u0 is drawn from the seed."""
    u0 = np.random.default_rng(seed).random()
    k = np.arange(count, dtype=np.float64)
    return np.floor(np.mod(k * _WEYL_STEP + u0, 1.0) * q).astype(np.int64)


def _check_window_scale(config: Configuration, ctx: KappaContext, window: ChordWindow) -> None:
    alpha = _alpha(config)
    q_bar = alpha.q[ctx.n_bar]
    if q_bar > window.max_step:
        raise DepthError(
            f"kappa={ctx.kappa} needs steps up to q_{ctx.n_bar}={q_bar} but the window admits "
            f"only {window.max_step}; increase M",
            ctx.n_bar,
        )


def enumerate_type2(
    config: Configuration,
    kappa: int,
    budget: int,
    seed: int = 0,
    window: ChordWindow | None = None,
    skipped: Counter[str] | None = None,
) -> list[Chord]:
    """
    Seeded, prefix-nested sample of at most ``budget`` Type-II chords.

    Admissible steps are found by scanning the step bracket around q_{n_kappa}
    with a working-precision filter and an extended-precision recheck. The k-th
    candidate pairs the k-th low-discrepancy base index with the steps cycled,
    canonical step first, so the sample for budget B is a prefix of the
    sample for any larger budget. Candidates whose slope breaks S_MAX are left
    out and counted under "slope" in ``skipped``.

    Raises:
        DepthError: The window cannot host steps up to q_{N-bar}
        EmptyFamilyError: No Type-II chord found
    """
    if budget < 1:
        raise InvalidInputError(f"budget must be >= 1, got {budget}")
    window = window or ChordWindow.for_config(config)
    alpha = _alpha(config)
    ctx = kappa_context(alpha, kappa)
    _check_window_scale(config, ctx, window)
    steps = type2_steps(alpha, kappa, window.max_step)
    if not steps:
        raise EmptyFamilyError(f"no admissible Type-II step at kappa={kappa}")

    attempts = _ATTEMPT_FACTOR * budget
    bases = weyl_indices(config.q, attempts, seed)
    chords: list[Chord] = []
    for k in range(attempts):
        d = steps[k % len(steps)]
        i = int(bases[k])
        try:
            v = make_chord(config, i, i + d, window)
        except SlopeError as exc:
            _tally(skipped, exc)
            continue
        except DegeneracyError:
            continue
        if classify_type2(v, kappa):
            chords.append(v)
            if len(chords) == budget:
                break
    if not chords:
        raise EmptyFamilyError(f"Type-II enumeration at kappa={kappa} produced no chords")
    logger.debug("kappa=%d: %d Type-II chords over %d steps", kappa, len(chords), len(steps))
    return chords


def enumerate_type1(
    config: Configuration,
    kappa: int,
    budget: int,
    seed: int = 0,
    window: ChordWindow | None = None,
) -> list[Chord]:
    """Seeded sample of Type-I chords with steps up to the window's max step."""
    window = window or ChordWindow.for_config(config)
    alpha = _alpha(config)
    lo_band, hi_band = math.ldexp(1.0, -(kappa + 4)), math.ldexp(1.0, -kappa)
    candidates = np.arange(1, window.max_step + 1, dtype=np.int64)
    approx = alpha.approx_norms(candidates)
    mask = (approx >= lo_band * (1 - 1e-9)) & (approx <= hi_band * (1 + 1e-9))
    steps = [d for d in candidates[mask].tolist() if lo_band <= alpha.norm_multiple(d) <= hi_band]
    if not steps:
        raise EmptyFamilyError(f"no Type-I step at kappa={kappa} below {window.max_step}")
    # Spread the budget over the whole step range, shortest first.
    stride = max(1, len(steps) // max(budget, 1))
    steps = steps[::stride]
    attempts = _ATTEMPT_FACTOR * budget
    bases = weyl_indices(config.q, attempts, seed + 1)
    chords: list[Chord] = []
    for k in range(attempts):
        i = int(bases[k])
        try:
            v = make_chord(config, i, i + steps[k % len(steps)], window)
        except (SlopeError, DegeneracyError):
            continue
        if classify_type1(v, kappa):
            chords.append(v)
            if len(chords) == budget:
                break
    if not chords:
        raise EmptyFamilyError(f"Type-I enumeration at kappa={kappa} produced no chords")
    return chords


@dataclass(frozen=True, eq=False)
class ChordPair:
    """
    Two Type-II chords tested against the (kappa, r) pair family.

    Attributes:
        v1, v2: Constituent chords, v2 to the right of v1
        lam: lambda(v1, v2), mean of the endpoint-difference norms
        offset: Reduced displacement x_{i2} - x_{i1}; equals Theta(v1, v2) for members
        is_member: Whether every band and ordering condition holds
        reason: Why membership failed, empty for members
        bound_holds: Whether 2/q_r < lambda(v1, v2) < 1/q_{r - 2 gamma0}
    """

    v1: Chord
    v2: Chord
    kappa: int
    r: int
    lam: float
    offset: float
    is_member: bool
    reason: str = ""
    bound_holds: bool = False

    @property
    def Theta(self) -> float:
        return abs(self.offset)

    def shifted(self, k: int, window: ChordWindow | None = None) -> ChordPair:
        """F^k applied to both chords; membership is carried over unchanged."""
        v1 = iterate_chord(self.v1, k, window)
        v2 = iterate_chord(self.v2, k, window)
        offset = float(self.v1.config.displacement(v1.i, v2.i))
        return ChordPair(v1, v2, self.kappa, self.r, self.lam, offset, self.is_member, self.reason, self.bound_holds)


def pair_lambda(alpha: ConstantTypeIrrational, v1: Chord, v2: Chord) -> float:
    return 0.5 * (alpha.norm_multiple(v2.i - v1.i) + alpha.norm_multiple(v2.j - v1.j))


def _pair_index(alpha: ConstantTypeIrrational, r: int, gamma0: int) -> int:
    if r < 2 * gamma0:
        raise DepthError(f"pair index r={r} is below 2*gamma0={2 * gamma0}; the family is empty", 2 * gamma0)
    if r > alpha.depth - 1:
        raise DepthError(f"pair index r={r} needs depth >= {r + 1}", r + 1)
    return r - 2 * gamma0


def make_pair(v1: Chord, v2: Chord, kappa: int, r: int) -> ChordPair:
    """
    Classify (v1, v2) against the (kappa, r) pair family.

    Ordering failures and band misses are returned as non-members with a reason.

    Raises:
        InvalidInputError: v1 or v2 is not Type-II at kappa
        DepthError: r outside [2 gamma0, depth)
    """
    config = v1.config
    alpha = _alpha(config)
    ctx = kappa_context(alpha, kappa)
    m = _pair_index(alpha, r, ctx.gamma0)
    if not (classify_type2(v1, kappa) and classify_type2(v2, kappa)):
        raise InvalidInputError(f"both chords must be Type-II at kappa={kappa}")

    lam = pair_lambda(alpha, v1, v2)
    offset = float(config.displacement(v1.i, v2.i))
    bound_holds = 2.0 / alpha.q[r] < lam < 1.0 / alpha.q[m]

    def result(member: bool, reason: str = "") -> ChordPair:
        return ChordPair(v1, v2, kappa, r, lam, offset, member, reason, bound_holds)

    e = v2.i - v1.i
    if e == 0:
        return result(False, "degenerate: i2 == i1")
    growth = ctx.growth
    q_m = alpha.q[m]
    if not (abs(e) * growth >= q_m and abs(e) <= growth * q_m):
        return result(False, f"|i2 - i1| = {abs(e)} outside the bracket around q_{m} = {q_m}")
    norm_m = alpha.qalpha_norm(m)
    if not norm_m <= lam <= BAND_WIDTH * norm_m:
        return result(False, f"lambda(v1, v2) = {lam:.3e} outside the band at q_{m}")
    if offset < v1.Theta:
        return result(False, "ordering: x_{i2} precedes x_{j1}")
    if offset + v2.Theta > 0.5:
        return result(False, SPAN_REASON)
    return result(True)


@dataclass(frozen=True, eq=False)
class ChordQuadruple:
    """
    Two (kappa, r) pairs tested against the (kappa, r, s) quadruple family.

    Attributes:
        pair12, pair34: Constituent pairs, pair34 to the right of pair12
        lam: lambda(v1..v4) = (lambda(v1, v3) + lambda(v2, v4)) / 2
        theta: Signed quadruple displacement, Theta = |theta|
    """

    pair12: ChordPair
    pair34: ChordPair
    kappa: int
    r: int
    s: int
    lam: float
    theta: float
    is_member: bool
    reason: str = ""

    @property
    def Theta(self) -> float:
        return abs(self.theta)


def make_quadruple(pair12: ChordPair, pair34: ChordPair, kappa: int, r: int, s: int) -> ChordQuadruple:
    """
    Classify (v1, v2, v3, v4) against the (kappa, r, s) quadruple family.

    Raises:
        InvalidInputError: s > r, or a constituent pair is not a member
        DepthError: s below 2 gamma0
    """
    if s > r:
        raise InvalidInputError(f"quadruple needs s <= r, got s={s}, r={r}")
    if not (pair12.is_member and pair34.is_member):
        raise InvalidInputError("both constituent pairs must belong to the (kappa, r) family")
    v1, v2, v3, v4 = pair12.v1, pair12.v2, pair34.v1, pair34.v2
    config = v1.config
    alpha = _alpha(config)
    ctx = kappa_context(alpha, kappa)
    m = _pair_index(alpha, s, ctx.gamma0)

    lam = 0.5 * (pair_lambda(alpha, v1, v3) + pair_lambda(alpha, v2, v4))
    o2 = float(config.displacement(v1.i, v2.i))
    o3 = float(config.displacement(v1.i, v3.i))
    o4 = float(config.displacement(v1.i, v4.i))
    theta = (2 * o4 + v4.Theta + 2 * o3 + v3.Theta - 2 * o2 - v2.Theta - v1.Theta) / 4.0

    def result(member: bool, reason: str = "") -> ChordQuadruple:
        return ChordQuadruple(pair12, pair34, kappa, r, s, lam, theta, member, reason)

    f = v3.i - v1.i
    q_m = alpha.q[m]
    if not (abs(f) * ctx.growth >= q_m and abs(f) <= ctx.growth * q_m):
        return result(False, f"|i3 - i1| = {abs(f)} outside the bracket around q_{m} = {q_m}")
    norm_m = alpha.qalpha_norm(m)
    if not norm_m <= lam < BAND_WIDTH * norm_m:
        return result(False, f"lambda(v1..v4) = {lam:.3e} outside the band at q_{m}")
    chain = [0.0, v1.Theta, o2, o2 + v2.Theta, o3, o3 + v3.Theta, o4, o4 + v4.Theta]
    for left, right in zip(chain, chain[1:]):
        if right < left:
            return result(False, "ordering chain broken")
    if chain[-1] > 0.5:
        return result(False, SPAN_REASON)
    return result(True)


def shift_set(
    config: Configuration, kappa: int, r: int, window: ChordWindow | None = None
) -> list[int]:
    """
    Signed shifts e with |e| in the bracket around q_{r - 2 gamma0}, ||e alpha|| in its band
    and e alpha reducing to a positive displacement, ordered by |e| with q_{r - 2 gamma0} first.
    """
    window = window or ChordWindow.for_config(config)
    alpha = _alpha(config)
    ctx = kappa_context(alpha, kappa)
    m = _pair_index(alpha, r, ctx.gamma0)
    steps = _scan_steps(alpha, alpha.q[m], ctx.growth, alpha.qalpha_norm(m), window.max_step)
    signed = [d if alpha.signed_multiple(d) > 0 else -d for d in steps]
    canonical = alpha.q[m] if alpha.signed_multiple(alpha.q[m]) > 0 else -alpha.q[m]
    if canonical in signed:
        signed.remove(canonical)
        signed.insert(0, canonical)
    return signed


def _is_mixed(k: int, mixed_fraction: float) -> bool:
    return math.floor((k + 1) * mixed_fraction) > math.floor(k * mixed_fraction)


def enumerate_pairs(
    config: Configuration,
    kappa: int,
    r: int,
    budget: int,
    seed: int = 0,
    mixed_fraction: float = 0.25,
    chords: list[Chord] | None = None,
    window: ChordWindow | None = None,
    skipped: Counter[str] | None = None,
) -> list[ChordPair]:
    """
    Seeded, prefix-nested sample of (kappa, r) pair-family members.

    Same-step pairs (v, F^e v) dominate; a ``mixed_fraction`` share of candidates
    pairs v with a Type-II chord of another step based at i + e. Slope breaks are
    counted in ``skipped`` as in enumerate_type2.

    Raises:
        DepthError: r below 2 gamma0 or beyond depth
        EmptyFamilyError: No member found
    """
    window = window or ChordWindow.for_config(config)
    alpha = _alpha(config)
    if chords is None:
        chords = enumerate_type2(config, kappa, DEFAULT_POOL, seed, window)
    shifts = shift_set(config, kappa, r, window)
    if not shifts:
        raise EmptyFamilyError(f"no admissible pair shift at (kappa, r) = ({kappa}, {r})")
    steps = type2_steps(alpha, kappa, window.max_step)

    attempts = _ATTEMPT_FACTOR * budget
    pairs: list[ChordPair] = []
    span_rejections = 0
    for k in range(attempts):
        v1 = chords[k % len(chords)]
        e = shifts[(k // len(chords) + k) % len(shifts)]
        try:
            if _is_mixed(k, mixed_fraction) and len(steps) > 1:
                d2 = steps[(k + 1) % len(steps)]
                base = v1.i + e
                v2 = make_chord(config, base, base + d2, window)
                if v2.i != base or not classify_type2(v2, kappa):
                    continue
            else:
                v2 = iterate_chord(v1, e, window)
        except SlopeError as exc:
            _tally(skipped, exc)
            continue
        except (DegeneracyError, DepthError):
            continue
        pair = make_pair(v1, v2, kappa, r)
        if pair.is_member:
            pairs.append(pair)
            if len(pairs) == budget:
                break
        elif pair.reason == SPAN_REASON:
            span_rejections += 1
    if span_rejections:
        logger.warning(
            "(kappa, r) = (%d, %d): %d candidate pairs rejected only for spanning more than 1/2",
            kappa,
            r,
            span_rejections,
        )
    if not pairs:
        raise EmptyFamilyError(f"pair enumeration at (kappa, r) = ({kappa}, {r}) produced nothing")
    return pairs


def enumerate_quadruples(
    config: Configuration,
    kappa: int,
    r: int,
    s: int,
    budget: int,
    seed: int = 0,
    chords: list[Chord] | None = None,
    window: ChordWindow | None = None,
    skipped: Counter[str] | None = None,
) -> list[ChordQuadruple]:
    """
    Seeded sample of nested same-step quadruples v, F^e v, F^f v, F^(f+e) v.

    Raises:
        InvalidInputError: s > r
        EmptyFamilyError: No member found
    """
    if s > r:
        raise InvalidInputError(f"quadruple needs s <= r, got s={s}, r={r}")
    window = window or ChordWindow.for_config(config)
    if chords is None:
        chords = enumerate_type2(config, kappa, DEFAULT_POOL, seed, window)
    inner = shift_set(config, kappa, r, window)
    outer = shift_set(config, kappa, s, window)
    if not inner or not outer:
        raise EmptyFamilyError(f"no admissible shifts at (kappa, r, s) = ({kappa}, {r}, {s})")
    alpha = _alpha(config)
    inner = sorted(inner, key=lambda e: alpha.signed_multiple(e))
    outer = sorted(outer, key=lambda f: -alpha.signed_multiple(f))

    attempts = _ATTEMPT_FACTOR * budget
    quads: list[ChordQuadruple] = []
    span_rejections = 0
    for k in range(attempts):
        v1 = chords[k % len(chords)]
        e = inner[k % len(inner)]
        f = outer[(k // len(inner)) % len(outer)]
        try:
            v2 = iterate_chord(v1, e, window)
            v3 = iterate_chord(v1, f, window)
            v4 = iterate_chord(v1, f + e, window)
        except SlopeError as exc:
            _tally(skipped, exc)
            continue
        except (DegeneracyError, DepthError):
            continue
        pair12 = make_pair(v1, v2, kappa, r)
        pair34 = make_pair(v3, v4, kappa, r)
        if not (pair12.is_member and pair34.is_member):
            continue
        quad = make_quadruple(pair12, pair34, kappa, r, s)
        if quad.is_member:
            quads.append(quad)
            if len(quads) == budget:
                break
        elif quad.reason == SPAN_REASON:
            span_rejections += 1
    if span_rejections:
        logger.warning(
            "(kappa, r, s) = (%d, %d, %d): %d candidate quadruples rejected only for spanning more than 1/2",
            kappa,
            r,
            s,
            span_rejections,
        )
    if not quads:
        raise EmptyFamilyError(f"quadruple enumeration at (kappa, r, s) = ({kappa}, {r}, {s}) produced nothing")
    return quads


@dataclass(frozen=True)
class ComparisonCheck:
    """
    Finite-sample comparison of lambda/Theta across scales for one Type-I chord.

    Attributes:
        skipped: True when a comparison chord would exceed depth or window
        reason: Why the check was skipped
        ratio: lambda(v) / Theta(v)
        ratio_long: lambda(v') / Theta(v') for the longer-step comparison chord
        ratio_short: lambda(v'') / Theta(v'') for the shorter-step comparison chord
        constant: 2^4 (A + 1)^8
    """

    skipped: bool
    reason: str = ""
    ratio: float = math.nan
    ratio_long: float = math.nan
    ratio_short: float = math.nan
    constant: float = math.nan

    @property
    def holds(self) -> bool:
        if self.skipped:
            return True
        return (
            self.ratio_short / self.constant <= self.ratio
            and self.ratio <= self.constant * self.ratio_long
        )


def comparison_check(
    config: Configuration, v: Chord, kappa: int, window: ChordWindow | None = None
) -> ComparisonCheck:
    """
    Compare lambda/Theta of v with chords from its left endpoint of steps q_{n_kappa}
    and q_{n_kappa - 16}.
    """
    window = window or ChordWindow.for_config(config)
    alpha = _alpha(config)
    constant = 16.0 * (alpha.bound + 1) ** 8
    if not classify_type1(v, kappa):
        return ComparisonCheck(True, "chord is not Type-I at this kappa")
    n = kappa_context(alpha, kappa).n_kappa
    if n < 16:
        return ComparisonCheck(True, f"n_kappa={n} leaves no index 16 below")
    long_step = alpha.q[n]
    short_step = alpha.q[n - 16]
    if long_step > window.max_step:
        return ComparisonCheck(True, f"q_{n}={long_step} exceeds the window step limit")
    try:
        v_long = make_chord(config, v.i, v.i + long_step, window)
        v_short = make_chord(config, v.i, v.i + short_step, window)
    except (DepthError, DegeneracyError, SlopeError) as exc:
        return ComparisonCheck(True, str(exc))
    return ComparisonCheck(
        skipped=False,
        ratio=v.lam / v.Theta,
        ratio_long=v_long.lam / v_long.Theta,
        ratio_short=v_short.lam / v_short.Theta,
        constant=constant,
    )
