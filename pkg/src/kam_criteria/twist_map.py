"""
Twist Map: Generating-Function Family and Exact Symplectic Steps

The map induced by G_n(x, x') = (x - x')^2 / 2 + q_n^-(4+eps) V(q_n x'), with a
finite cosine-series potential V. Provides the forward and inverse step, the
Jacobian, the action and the closed-form partial derivatives used by the
variational solver, plus a sampled symplectic check suite.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidInputError
from .number_theory import ConstantTypeIrrational

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
DEFAULT_AMPLITUDE = 1.0 / TWO_PI**2
MAX_ORDER = 5


@dataclass(frozen=True)
class Potential:
    """
    Period-one potential V(x) = sum_k c_k cos(2 pi k x).

    Attributes:
        terms: Pairs (k, c_k) with k a positive integer harmonic
    """

    terms: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        for k, c in self.terms:
            if int(k) != k or k < 1:
                raise InvalidInputError(f"harmonic index must be a positive integer, got {k}")
            if not math.isfinite(c):
                raise InvalidInputError(f"coefficient for k={k} is not finite")

    @classmethod
    def from_pairs(cls, pairs: list[list[float]] | list[tuple[int, float]]) -> Potential:
        return cls(tuple((int(k), float(c)) for k, c in pairs))

    @classmethod
    def zero(cls) -> Potential:
        return cls(())

    @property
    def is_zero(self) -> bool:
        return all(c == 0.0 for _, c in self.terms)

    def scaled(self, factor: float) -> Potential:
        return Potential(tuple((k, c * factor) for k, c in self.terms))

    def derivative(self, x: float | np.ndarray, order: int = 0) -> float | np.ndarray:
        """
        The order-th derivative of V at x (orders 0..5), vectorised over x.
        """
        if not 0 <= order <= MAX_ORDER:
            raise InvalidInputError(f"derivative order must lie in [0, {MAX_ORDER}], got {order}")
        arr = np.asarray(x, dtype=np.float64)
        total = np.zeros_like(arr)
        for k, c in self.terms:
            w = TWO_PI * k
            theta = w * arr
            # d^m/dx^m cos(wx) cycles cos, -sin, -cos, sin
            phase = order % 4
            if phase == 0:
                wave = np.cos(theta)
            elif phase == 1:
                wave = -np.sin(theta)
            elif phase == 2:
                wave = -np.cos(theta)
            else:
                wave = np.sin(theta)
            total = total + c * w**order * wave
        if total.ndim == 0:
            return float(total)
        return total

    def max_abs(self, order: int) -> float:
        """Upper bound sum |c_k| (2 pi k)^order on sup |V^(order)|, exact for one harmonic."""
        return float(sum(abs(c) * (TWO_PI * k) ** order for k, c in self.terms))

    def c_norm(self, order: int = MAX_ORDER) -> float:
        """C^order norm bound, max over m <= order of sup |V^(m)|."""
        return max((self.max_abs(m) for m in range(order + 1)), default=0.0)


def default_potential(amplitude_scale: float = 1.0) -> Potential:
    """Single harmonic (2 pi)^-2 cos(2 pi x), the standard-map convention."""
    return Potential(((1, DEFAULT_AMPLITUDE * amplitude_scale),))


@dataclass(frozen=True)
class TwistMap:
    """
    Exact area-preserving twist map generated by G_n.

    Attributes:
        alpha: Irrational whose convergent denominators fix q_n
        n: Level index
        eps: Regularity exponent in (0, 1)
        potential: Periodic potential V

    Example:
        >>> F = TwistMap(preset("golden", 12), n=4, eps=0.5, potential=default_potential())
        >>> F.step(0.0, 0.05)
    """

    alpha: ConstantTypeIrrational
    n: int
    eps: float
    potential: Potential

    def __post_init__(self) -> None:
        if not 0.0 < self.eps < 1.0:
            raise InvalidInputError(f"eps must lie in (0, 1), got {self.eps}")
        if not 0 <= self.n <= self.alpha.depth:
            raise InvalidInputError(f"level n={self.n} outside stored depth {self.alpha.depth}")

    @property
    def q_n(self) -> int:
        return self.alpha.q[self.n]

    @cached_property
    def coeff(self) -> float:
        """q_n^-(3+eps), the momentum kick scale."""
        return float(self.q_n) ** (-(3.0 + self.eps))

    @cached_property
    def generating_coeff(self) -> float:
        """q_n^-(4+eps), the potential weight inside G_n."""
        return float(self.q_n) ** (-(4.0 + self.eps))

    def action(self, x, xp):
        """G_n(x, xp); invariant under (x, xp) -> (x + 1, xp + 1)."""
        diff = np.subtract(x, xp)
        value = 0.5 * diff * diff + self.generating_coeff * self.potential.derivative(
            np.multiply(self.q_n, xp)
        )
        return value

    def d1_action(self, x, xp):
        """Partial derivative of G_n in its first argument."""
        return np.subtract(x, xp)

    def d2_action(self, x, xp):
        """Partial derivative of G_n in its second argument."""
        return np.subtract(xp, x) + self.coeff * self.potential.derivative(
            np.multiply(self.q_n, xp), 1
        )

    def kick(self, phase):
        """coeff * V'(phase); phase is q_n times the position."""
        return self.coeff * self.potential.derivative(phase, 1)

    def step(self, x, y):
        xp = np.add(x, y)
        yp = np.add(y, self.kick(np.multiply(self.q_n, xp)))
        return xp, yp

    def inverse_step(self, xp, yp):
        y = np.subtract(yp, self.kick(np.multiply(self.q_n, xp)))
        x = np.subtract(xp, y)
        return x, y

    def jacobian(self, x, y) -> np.ndarray:
        """
        Jacobian of one step, shape (..., 2, 2).

        Rows are (dxp/dx, dxp/dy) and (dyp/dx, dyp/dy).
        """
        u = np.multiply(self.q_n, np.add(x, y))
        shear = self.coeff * self.q_n * np.asarray(self.potential.derivative(u, 2))
        jac = np.empty(shear.shape + (2, 2))
        jac[..., 0, 0] = 1.0
        jac[..., 0, 1] = 1.0
        jac[..., 1, 0] = shear
        jac[..., 1, 1] = 1.0 + shear
        return jac

    def orbit(self, x: float, y: float, steps: int) -> tuple[np.ndarray, np.ndarray]:
        """Forward orbit of (x, y), arrays of length steps + 1."""
        xs = np.empty(steps + 1)
        ys = np.empty(steps + 1)
        xs[0], ys[0] = x, y
        for i in range(steps):
            xs[i + 1], ys[i + 1] = self.step(xs[i], ys[i])
        return xs, ys

    def step_bound(self) -> float:
        """coeff * max |V'|, the explicit one-step bound on |yp - y|."""
        return self.coeff * self.potential.max_abs(1)


def action(twist: TwistMap, x, xp):
    return twist.action(x, xp)


def step(twist: TwistMap, x, y):
    return twist.step(x, y)


def inverse_step(twist: TwistMap, xp, yp):
    return twist.inverse_step(xp, yp)


def jacobian(twist: TwistMap, x, y) -> np.ndarray:
    return twist.jacobian(x, y)


def _sample_points(rng: np.random.Generator, samples: int) -> tuple[np.ndarray, np.ndarray]:
    x = rng.uniform(0.0, 1.0, samples)
    y = rng.uniform(-0.5, 0.5, samples)
    return x, y


@dataclass(frozen=True)
class ConsistencyReport:
    samples: int
    momentum_deviation: float
    image_deviation: float

    @property
    def max_deviation(self) -> float:
        return max(self.momentum_deviation, self.image_deviation)


def generating_consistency(twist: TwistMap, samples: int, seed: int = 0) -> ConsistencyReport:
    """
    Check y = -d1 G(x, xp) and yp = d2 G(x, xp) on random points.

    Args:
        twist: Map under test
        samples: Number of random (x, y) points, at least 1
        seed: Seed for numpy's default generator

    Returns:
        ConsistencyReport with the max absolute deviation of each identity
    """
    if samples < 1:
        raise InvalidInputError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    x, y = _sample_points(rng, samples)
    xp, yp = twist.step(x, y)
    momentum = np.max(np.abs(y + twist.d1_action(x, xp)))
    image = np.max(np.abs(yp - twist.d2_action(x, xp)))
    return ConsistencyReport(samples, float(momentum), float(image))


@dataclass(frozen=True)
class MapCheckReport:
    """Maximal defects of the sampled symplectic suite."""

    samples: int
    det_deviation: float
    roundtrip_error: float
    generating_deviation: float
    equivariance_error: float
    jacobian_fd_error: float
    max_increment: float
    step_bound: float

    @property
    def passed(self) -> bool:
        return (
            self.det_deviation <= 1e-12
            and self.roundtrip_error <= 1e-12
            and self.generating_deviation <= 1e-10
            and self.equivariance_error <= 1e-10
            and self.jacobian_fd_error <= 1e-6
            and self.max_increment <= self.step_bound * (1 + 1e-12) + 1e-15
        )

    def to_dict(self) -> dict[str, float | int | bool]:
        return {
            "samples": self.samples,
            "det_deviation": self.det_deviation,
            "roundtrip_error": self.roundtrip_error,
            "generating_deviation": self.generating_deviation,
            "equivariance_error": self.equivariance_error,
            "jacobian_fd_error": self.jacobian_fd_error,
            "max_increment": self.max_increment,
            "step_bound": self.step_bound,
            "passed": self.passed,
        }


def map_check(twist: TwistMap, points: int = 10_000, seed: int = 0) -> MapCheckReport:
    """Run determinant, round-trip, generating, equivariance, Jacobian and step-bound checks."""
    rng = np.random.default_rng(seed)
    x, y = _sample_points(rng, points)
    xp, yp = twist.step(x, y)

    jac = twist.jacobian(x, y)
    det = np.linalg.det(jac)
    det_deviation = float(np.max(np.abs(det - 1.0)))

    xr, yr = twist.inverse_step(xp, yp)
    roundtrip = float(max(np.max(np.abs(xr - x)), np.max(np.abs(yr - y))))

    consistency = generating_consistency(twist, points, seed)

    xs, ys = twist.step(x + 1.0, y)
    equivariance = float(max(np.max(np.abs(xs - (xp + 1.0))), np.max(np.abs(ys - yp))))

    h = 1e-6
    _, y_plus = twist.step(x + h, y)
    _, y_minus = twist.step(x - h, y)
    fd = (y_plus - y_minus) / (2 * h)
    fd_error = float(np.max(np.abs(fd - jac[:, 1, 0]) / np.maximum(1.0, np.abs(jac[:, 1, 0]))))

    report = MapCheckReport(
        samples=points,
        det_deviation=det_deviation,
        roundtrip_error=roundtrip,
        generating_deviation=consistency.max_deviation,
        equivariance_error=equivariance,
        jacobian_fd_error=fd_error,
        max_increment=float(np.max(np.abs(yp - y))),
        step_bound=twist.step_bound(),
    )
    logger.info("map check on %d points: passed=%s", points, report.passed)
    return report
