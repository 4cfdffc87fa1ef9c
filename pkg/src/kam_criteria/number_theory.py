"""
Number Theory: Constant-Type Irrationals and Kappa Indexing

Continued-fraction arithmetic for rotation numbers with bounded partial
quotients, computed in extended precision with mpmath, together with the
dyadic kappa machinery (phi, S, kappa-check, psi, gamma0) that indexes the
chord scales probed by the distortion estimates.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np
from mpmath import mp

from .errors import DepthError, InvalidInputError, InvariantViolation

logger = logging.getLogger(__name__)

EXTENDED_DPS = 50
MIN_DEPTH = 4
# Tail length used to saturate EXTENDED_DPS digits: each quotient halves the error at least.
_TAIL_TERMS = 200

PRESETS: dict[str, tuple[int, ...]] = {
    "golden": (1,),
    "silver": (2,),
}


@lru_cache(maxsize=1 << 16)
def _norm_multiple(value: mp.mpf, d: int) -> float:
    """||d value|| in extended precision, keyed by the value so equal irrationals share entries."""
    with mp.workdps(EXTENDED_DPS):
        x = d * value
        return float(abs(x - mp.nint(x)))


@dataclass(frozen=True)
class ConstantTypeIrrational:
    """
    A rotation number alpha = [0; a_1, a_2, ...] with bounded partial quotients.

    Attributes:
        partial_quotients: Stored quotients a_1..a_D
        convergents: Pairs (p_i, q_i) for i = 0..D, starting at 0/1
        value: alpha as an mpmath mpf carrying EXTENDED_DPS digits
        name: Preset name, empty for custom quotient lists
    """

    partial_quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    value: mp.mpf
    name: str = ""

    @property
    def depth(self) -> int:
        return len(self.partial_quotients)

    @property
    def bound(self) -> int:
        """A_alpha, the largest stored partial quotient."""
        return max(self.partial_quotients)

    @cached_property
    def q(self) -> tuple[int, ...]:
        return tuple(qi for _, qi in self.convergents)

    @cached_property
    def p(self) -> tuple[int, ...]:
        return tuple(pi for pi, _ in self.convergents)

    @cached_property
    def value_float(self) -> float:
        return float(self.value)

    def a(self, i: int) -> int:
        """Partial quotient a_i (1-based, as in the continued fraction)."""
        if not 1 <= i <= self.depth:
            raise DepthError(f"partial quotient a_{i} needs depth >= {i}, have {self.depth}", i)
        return self.partial_quotients[i - 1]

    def qalpha_norm_mp(self, n: int) -> mp.mpf:
        """||q_n alpha|| in extended precision."""
        if not 0 <= n < self.depth:
            raise DepthError(
                f"||q_{n} alpha|| needs a_{n + 1}, i.e. depth >= {n + 2}; have {self.depth}",
                n + 2,
            )
        with mp.workdps(EXTENDED_DPS):
            x = self.q[n] * self.value
            return +abs(x - mp.nint(x))

    def qalpha_norm(self, n: int) -> float:
        return float(self.qalpha_norm_mp(n))

    def norm_multiple(self, d: int) -> float:
        """||d alpha|| for any integer d, computed in extended precision and cached."""
        return _norm_multiple(self.value, abs(int(d)))

    def signed_multiple(self, d: int) -> float:
        """d alpha reduced to [-1/2, 1/2), in extended precision."""
        with mp.workdps(EXTENDED_DPS):
            x = int(d) * self.value
            return float(x - mp.nint(x))

    def rational_gap(self, d: int, p: int, q: int) -> float:
        """|d| * |alpha - p/q|, the drift between the true and the approximant rotation."""
        with mp.workdps(EXTENDED_DPS):
            return float(abs(int(d)) * abs(self.value - mp.mpf(p) / q))

    def approx_norms(self, steps: np.ndarray) -> np.ndarray:
        """
        Working-precision ||d alpha|| for an array of steps.

        Used only to filter candidate steps; admitted steps are re-evaluated with
        norm_multiple.
        """
        x = np.asarray(steps, dtype=np.float64) * self.value_float
        return np.abs(x - np.rint(x))

    def check_invariants(self) -> list[str]:
        """Re-check recurrence, growth and Dirichlet bounds; return violation messages."""
        problems: list[str] = []
        q = self.q
        p = self.p
        for i in range(1, self.depth):
            if q[i + 1] != self.a(i + 1) * q[i] + q[i - 1]:
                problems.append(f"q recurrence fails at i={i}")
            if p[i + 1] != self.a(i + 1) * p[i] + p[i - 1]:
                problems.append(f"p recurrence fails at i={i}")
        for n in range(self.depth - 1):
            if q[n + 2] < 2 * q[n]:
                problems.append(f"q_{n + 2} < 2 q_{n}")
        for n in range(2, self.depth + 1):
            if q[n] * q[n] < 2**n:
                problems.append(f"q_{n} < sqrt(2)^{n}")
        if q[1] < 1:
            problems.append("q_1 < 1")
        with mp.workdps(EXTENDED_DPS):
            if not 0 < self.value < 1:
                problems.append("alpha outside (0, 1)")
            for n in range(self.depth):
                a_next = self.a(n + 1)
                norm = self.qalpha_norm_mp(n)
                lower = mp.mpf(1) / ((a_next + 2) * q[n])
                upper = mp.mpf(1) / (a_next * q[n])
                if not lower < norm < upper:
                    problems.append(f"Dirichlet bracket fails at n={n}")
        return problems

    def verify(self) -> None:
        problems = self.check_invariants()
        if problems:
            raise InvariantViolation("; ".join(problems))


def _periodic_value(pattern: tuple[int, ...], terms: int) -> mp.mpf:
    seq = [pattern[i % len(pattern)] for i in range(terms)]
    with mp.workdps(EXTENDED_DPS + 10):
        x = mp.mpf(0)
        for a in reversed(seq):
            x = 1 / (a + x)
        return +x


def from_partial_quotients(
    quotients: list[int] | tuple[int, ...], depth: int, name: str = ""
) -> ConstantTypeIrrational:
    """
    Build a constant-type irrational from a period of partial quotients.

    The quotient list is cycled to length ``depth``; ``value`` is the purely
    periodic continued fraction it generates, so ``[1]`` is the golden mean
    (sqrt(5) - 1) / 2 and ``[2]`` is sqrt(2) - 1.

    Args:
        quotients: One period a_1..a_k of positive integers
        depth: Number of stored quotients D (at least 4)
        name: Optional preset label

    Returns:
        ConstantTypeIrrational with convergents p_i/q_i for i = 0..D

    Raises:
        InvalidInputError: Empty list, a non-positive quotient, or depth < 4

    Example:
        >>> alpha = from_partial_quotients([1], depth=10)
        >>> alpha.q
        (1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89)
    """
    pattern = tuple(int(a) for a in quotients)
    if not pattern:
        raise InvalidInputError("partial quotient list is empty")
    if any(a < 1 for a in pattern):
        raise InvalidInputError(f"partial quotients must be positive integers, got {pattern}")
    if depth < MIN_DEPTH:
        raise InvalidInputError(f"depth must be >= {MIN_DEPTH}, got {depth}")

    stored = tuple(pattern[i % len(pattern)] for i in range(depth))
    convergents = [(0, 1)]
    p_prev, q_prev = 1, 0
    p_cur, q_cur = 0, 1
    for a in stored:
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        convergents.append((p_cur, q_cur))

    value = _periodic_value(pattern, depth + _TAIL_TERMS)
    alpha = ConstantTypeIrrational(
        partial_quotients=stored,
        convergents=tuple(convergents),
        value=value,
        name=name,
    )
    alpha.verify()
    logger.debug("Built alpha %s to depth %d (q_D = %d)", name or pattern, depth, q_cur)
    return alpha


def preset(name: str, depth: int) -> ConstantTypeIrrational:
    """Named presets: ``golden`` (all ones) and ``silver`` (all twos)."""
    if name not in PRESETS:
        raise InvalidInputError(f"unknown alpha preset {name!r}; choose from {sorted(PRESETS)}")
    return from_partial_quotients(PRESETS[name], depth, name=name)


def circle_norm(x: float | np.ndarray) -> float | np.ndarray:
    """Flat distance to the nearest integer, in [0, 1/2]."""
    arr = np.asarray(x, dtype=np.float64)
    norm = np.abs(arr - np.rint(arr))
    if norm.ndim == 0:
        return float(norm)
    return norm


def qalpha_norm(alpha: ConstantTypeIrrational, n: int) -> float:
    """||q_n alpha|| computed in extended precision (strictly inside the Dirichlet bracket)."""
    return alpha.qalpha_norm(n)


def kappa_of_n(alpha: ConstantTypeIrrational, n0: int) -> int:
    """
    Dyadic scale kappa_0 = floor(log2 a_{n0+1} + log2 q_{n0}).

    Guarantees ||q_{n0} alpha|| in [2^(-kappa_0-4), 2^(-kappa_0)].
    """
    if not 0 <= n0 < alpha.depth - 1:
        raise DepthError(
            f"kappa_of_n({n0}) needs depth >= {n0 + 2}; have {alpha.depth}", n0 + 2
        )
    return (alpha.a(n0 + 1) * alpha.q[n0]).bit_length() - 1


class KappaWindow(NamedTuple):
    n_kappa: int
    n_tilde: int
    n_bar: int


@dataclass(frozen=True)
class KappaMachinery:
    """
    Tables phi(m), its floor, the image set S and gamma0 for one irrational.

    phi(m) = log2 a_{m+1} + log2 q_m is tabulated for m = 0..D-1; beyond that
    a_{m+1} is unknown and lookups fail with DepthError.
    """

    alpha: ConstantTypeIrrational
    phi: tuple[float, ...]
    phi_floor: tuple[int, ...]
    gamma0: int

    @classmethod
    def from_irrational(cls, alpha: ConstantTypeIrrational) -> KappaMachinery:
        products = [alpha.a(m + 1) * alpha.q[m] for m in range(alpha.depth)]
        phi = tuple(math.log2(v) for v in products)
        phi_floor = tuple(v.bit_length() - 1 for v in products)
        gamma0 = (2 * (alpha.bound + 2)).bit_length()
        machinery = cls(alpha=alpha, phi=phi, phi_floor=phi_floor, gamma0=gamma0)
        machinery.verify()
        return machinery

    @cached_property
    def image(self) -> frozenset[int]:
        """S, the set of values of floor(phi) over stored m."""
        return frozenset(self.phi_floor)

    def check_invariants(self) -> list[str]:
        problems: list[str] = []
        alpha = self.alpha
        top = alpha.depth - 1
        growth = 2 * alpha.bound
        for m in range(1, top):
            low = alpha.a(m + 1) * alpha.q[m]
            high = alpha.a(m + 2) * alpha.q[m + 1]
            if not low < high <= growth * low:
                problems.append(f"phi increment out of (0, log2 A + 1] at m={m}")
        for m in range(1, top - 2):
            if self.phi_floor[m + 3] <= self.phi_floor[m]:
                problems.append(f"floor(phi) does not advance over three steps at m={m}")
        return problems

    def verify(self) -> None:
        problems = self.check_invariants()
        if problems:
            raise InvariantViolation("; ".join(problems))

    def kappa_check(self, kappa: int) -> int:
        """kappa itself if it lies in S, else the largest element of S at most two below."""
        s = self.image
        if kappa < min(s):
            raise DepthError(f"kappa={kappa} lies below min(S)={min(s)}")
        if kappa > max(s):
            raise DepthError(
                f"kappa={kappa} exceeds the largest tabulated scale {max(s)}; "
                f"depth {self.alpha.depth} is insufficient",
                self.alpha.depth + 1,
            )
        for candidate in (kappa, kappa - 1, kappa - 2):
            if candidate in s:
                return candidate
        raise InvariantViolation(f"no element of S within two steps below kappa={kappa}")

    def psi(self, kappa: int) -> int:
        """n_kappa = min{m : floor(phi(m)) = kappa-check}."""
        target = self.kappa_check(kappa)
        return self.phi_floor.index(target)


@lru_cache(maxsize=32)
def kappa_machinery(alpha: ConstantTypeIrrational) -> KappaMachinery:
    return KappaMachinery.from_irrational(alpha)


def kappa_windows(alpha: ConstantTypeIrrational, kappa: int) -> KappaWindow:
    """
    Index windows (n_kappa, N-tilde, N-bar) for a dyadic scale kappa.

    Raises:
        DepthError: kappa below min(S), or n_kappa + 2*gamma0 not below the depth
    """
    machinery = kappa_machinery(alpha)
    n_kappa = machinery.psi(kappa)
    n_bar = n_kappa + 2 * machinery.gamma0
    if n_bar >= alpha.depth:
        raise DepthError(
            f"kappa={kappa} needs N-bar={n_bar} < depth; raise depth to at least {n_bar + 1}",
            n_bar + 1,
        )
    return KappaWindow(n_kappa=n_kappa, n_tilde=n_kappa - 1, n_bar=n_bar)


def check_arithmetic_growth(alpha: ConstantTypeIrrational, m: int, M: int, delta: float) -> bool:
    """
    Whether q_M <= q_m^(1+delta) implies M <= m + floor(m/2) at this (m, M).

    Raises:
        InvalidInputError: delta outside (0, ln 2 / (5 ln(1 + A))) or m, M out of order
        DepthError: M beyond stored depth
    """
    delta_max = math.log(2) / (5 * math.log(1 + alpha.bound))
    if not 0 < delta < delta_max:
        raise InvalidInputError(f"delta must lie in (0, {delta_max:.6f}), got {delta}")
    if not M >= m >= 20:
        raise InvalidInputError(f"need M >= m >= 20, got m={m}, M={M}")
    if M > alpha.depth:
        raise DepthError(f"q_{M} needs depth >= {M}; have {alpha.depth}", M)
    premise = math.log(alpha.q[M]) <= (1 + delta) * math.log(alpha.q[m])
    return (not premise) or M <= m + m // 2


def cf_table(alpha: ConstantTypeIrrational) -> list[dict[str, float | int]]:
    """Rows of i, a_i, p_i, q_i, ||q_i alpha||, Dirichlet bracket and phi for reporting."""
    machinery = kappa_machinery(alpha)
    rows: list[dict[str, float | int]] = []
    for i in range(alpha.depth):
        a_next = alpha.a(i + 1)
        p_i, q_i = alpha.convergents[i]
        rows.append(
            {
                "i": i,
                "a_next": a_next,
                "p": p_i,
                "q": q_i,
                "norm": alpha.qalpha_norm(i),
                "lower": 1.0 / ((a_next + 2) * q_i),
                "upper": 1.0 / (a_next * q_i),
                "phi": machinery.phi[i],
                "phi_floor": machinery.phi_floor[i],
            }
        )
    return rows
