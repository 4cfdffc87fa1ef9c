"""
Variational: Birkhoff Periodic Minimal Configurations

Computes (p, q)-periodic action-minimizing configurations of a TwistMap as a
finite stand-in for the Aubry-Mather set of rotation number alpha, checks
stationarity and cyclic ordering, and extracts the invariant-circle graph.

A configuration is stored as the rigid rotation plus a periodic deviation,
x_i = i p / q + u_i with u_{i+q} = u_i. Chord quantities are formed from the
exact residues (d p mod q) / q plus deviation differences, so lifted values of
size ~p never cancel against each other.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize
import scipy.sparse.linalg

from .errors import (
    ConvergenceError,
    DegeneracyError,
    DepthError,
    InvalidInputError,
    InvariantViolation,
)
from .hessian import bordered_hessian, periodic_hessian, second_difference
from .number_theory import ConstantTypeIrrational
from .twist_map import TwistMap

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
DEGENERACY_FLOOR = 1e-13
NUM_PHASES = 8
TIE_RELATIVE = 1e-13
ACTION_SLACK = 1e-12
_ARMIJO = 1e-4
_MAX_HALVINGS = 40
_EXTRA_ITERATIONS = 3


@dataclass(frozen=True, eq=False)
class Configuration:
    """
    A (p, q)-periodic stationary configuration of a twist map.

    Attributes:
        p: Rotation numerator, coprime to q
        q: Period
        u: Periodic deviation from the rigid rotation, length q
        twist: The TwistMap whose action the configuration makes stationary
        residual: Max discrete Euler-Lagrange defect
        action: Periodic action over one period
        phase: Mean deviation (gauge) of the selected solution
        seed: Seed recorded with the solve
        action_history: Excess action after each accepted solver step
    """

    p: int
    q: int
    u: np.ndarray
    twist: TwistMap
    residual: float
    action: float
    phase: float = 0.0
    seed: int = 0
    iterations: int = 0
    action_history: tuple[float, ...] = field(default=(), repr=False)

    @property
    def rotation(self) -> float:
        return self.p / self.q

    @property
    def x(self) -> np.ndarray:
        """Lifted positions x_0..x_{q-1}."""
        return np.arange(self.q) * (self.p / self.q) + self.u

    @property
    def y(self) -> np.ndarray:
        """Momenta y_i = x_{i+1} - x_i."""
        return self.p / self.q + np.roll(self.u, -1) - self.u

    def y_at(self, index):
        """y at any integer index (periodic extension)."""
        return self.y[np.mod(index, self.q)]

    def residue(self, index):
        """(index * p mod q) / q, the exact rigid position of index modulo one."""
        idx = np.asarray(index, dtype=np.int64)
        return np.mod(idx * self.p, self.q) / self.q

    def displacement(self, i, j):
        """
        Signed circle displacement from x_i to x_j, reduced to [-1/2, 1/2).

        Works for any integer indices (periodic extension); vectorised.
        """
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        raw = np.mod((j - i) * self.p, self.q) / self.q + (
            self.u[np.mod(j, self.q)] - self.u[np.mod(i, self.q)]
        )
        return raw - np.floor(raw + 0.5)

    def phases(self) -> np.ndarray:
        """q_n * x_i modulo one, from exact integer residues."""
        return potential_phases(self.p, self.q, self.twist.q_n, self.u)

    def step_increments(self) -> np.ndarray:
        """y_{i+1} - y_i along the orbit."""
        y = self.y
        return np.roll(y, -1) - y

    def orbit_variation(self) -> float:
        """Total variation of y in orbit order over one period."""
        return float(np.sum(np.abs(self.step_increments())))

    def to_record(self) -> dict:
        """Structured record of the configuration (arrays as lists) for persistence."""
        return {
            "p": self.p,
            "q": self.q,
            "n": self.twist.n,
            "eps": self.twist.eps,
            "residual": self.residual,
            "action": self.action,
            "phase": self.phase,
            "seed": self.seed,
            "iterations": self.iterations,
            "x": self.x.tolist(),
            "y": self.y.tolist(),
        }


def potential_phases(p: int, q: int, q_n: int, u: np.ndarray) -> np.ndarray:
    idx = np.arange(q, dtype=np.int64)
    base = np.mod(q_n * np.mod(idx * p, q), q) / q
    return base + q_n * u


def _excess_action(twist: TwistMap, p: int, q: int, u: np.ndarray) -> float:
    """Action minus the rigid kinetic term q (p/q)^2 / 2."""
    diff = np.roll(u, -1) - u
    phase = potential_phases(p, q, twist.q_n, u)
    return float(
        0.5 * np.dot(diff, diff)
        + twist.generating_coeff * np.sum(twist.potential.derivative(phase))
    )


def _rigid_kinetic(p: int, q: int) -> float:
    return q * 0.5 * (p / q) ** 2


def _gradient(twist: TwistMap, p: int, q: int, u: np.ndarray) -> np.ndarray:
    phase = potential_phases(p, q, twist.q_n, u)
    return -second_difference(u) + twist.kick(phase)


def _curvature(twist: TwistMap, p: int, q: int, u: np.ndarray) -> np.ndarray:
    phase = potential_phases(p, q, twist.q_n, u)
    return twist.coeff * twist.q_n * np.asarray(twist.potential.derivative(phase, 2))


def periodic_action(twist: TwistMap, p: int, q: int, u: np.ndarray) -> float:
    """Sum over one period of G_n(x_s, x_{s+1}), evaluated without lifted cancellation."""
    return _rigid_kinetic(p, q) + _excess_action(twist, p, q, u)


def _validate_rotation(p: int, q: int) -> None:
    if not 0 < p < q:
        raise InvalidInputError(f"need 0 < p < q, got p={p}, q={q}")
    if math.gcd(p, q) != 1:
        raise InvalidInputError(f"p={p} and q={q} are not coprime")


class BirkhoffSolver:
    """
    Damped Newton solver for Birkhoff periodic minimizers.

    For each of the phases c_k = k P / 8 (P = 1 / lcm(q, q_n), the symmetry
    period of the problem) the Euler-Lagrange system is solved with the gauge
    mean(u) = c_k by a bordered Newton iteration from the rigid rotation. The
    least-action phase is kept and, if its residual is still above tolerance,
    polished without the gauge. Steps that are not descent directions fall
    back to (projected) gradient steps; every step passes a backtracking
    line search on the action.

    Attributes:
        twist: Map whose action is minimized
        tolerance: Required max Euler-Lagrange defect
        timings: Wall-clock seconds per solve (for profiling)
        iteration_counts: Accepted steps per solve
    """

    def __init__(
        self,
        twist: TwistMap,
        tolerance: float = DEFAULT_TOLERANCE,
        phases: int = NUM_PHASES,
        max_newton: int = 60,
        max_polish: int = 400,
    ):
        self.twist = twist
        self.tolerance = tolerance
        self.phases = phases
        self.max_newton = max_newton
        self.max_polish = max_polish
        self.timings: list[float] = []
        self.iteration_counts: list[int] = []

    def _line_search(
        self,
        p: int,
        q: int,
        u: np.ndarray,
        direction: np.ndarray,
        grad: np.ndarray,
        value: float,
        t0: float = 1.0,
        project: bool = False,
    ) -> tuple[np.ndarray, float] | None:
        slope = float(np.dot(grad, direction))
        t = t0
        slack = ACTION_SLACK * max(abs(value), 1e-300)
        for _ in range(_MAX_HALVINGS):
            trial = u + t * direction
            trial_value = _excess_action(self.twist, p, q, trial)
            if trial_value <= value + _ARMIJO * t * slope:
                return trial, trial_value
            if trial_value <= value + slack:
                # Armijo is below roundoff here; accept if the defect still shrinks.
                old_res = np.max(np.abs(grad))
                new_grad = _gradient(self.twist, p, q, trial)
                if project:
                    new_grad = new_grad - new_grad.mean()
                new_res = np.max(np.abs(new_grad))
                if new_res < old_res:
                    return trial, trial_value
            t *= 0.5
        return None

    def _solve_phase(self, p: int, q: int, c: float) -> tuple[np.ndarray, float, list[float]]:
        """Gauge-constrained Newton from u = c; returns (u, projected residual, history)."""
        u = np.full(q, c)
        value = _excess_action(self.twist, p, q, u)
        history = [value]
        best_res = math.inf
        extra = 0
        for _ in range(self.max_newton):
            grad = _gradient(self.twist, p, q, u)
            projected = grad - grad.mean()
            res = float(np.max(np.abs(projected)))
            if res <= self.tolerance:
                if res > 0.5 * best_res or extra >= _EXTRA_ITERATIONS:
                    best_res = min(best_res, res)
                    break
                extra += 1
            best_res = min(best_res, res)
            if res == 0.0:
                break

            system = bordered_hessian(_curvature(self.twist, p, q, u))
            rhs = np.concatenate([-grad, [q * c - u.sum()]])
            solution = scipy.sparse.linalg.spsolve(system, rhs)
            direction = solution[:q]
            t0 = 1.0
            if not np.all(np.isfinite(direction)) or np.dot(projected, direction) >= 0:
                direction = -projected
                t0 = 0.25
            accepted = self._line_search(p, q, u, direction, projected, value, t0, project=True)
            if accepted is None:
                break
            u, value = accepted
            history.append(value)
        grad = _gradient(self.twist, p, q, u)
        return u, float(np.max(np.abs(grad - grad.mean()))), history

    def _polish(self, p: int, q: int, u: np.ndarray, history: list[float]) -> np.ndarray:
        """Unconstrained damped Newton with gradient fallback."""
        value = history[-1] if history else _excess_action(self.twist, p, q, u)
        best_res = math.inf
        extra = 0
        for _ in range(self.max_polish):
            grad = _gradient(self.twist, p, q, u)
            res = float(np.max(np.abs(grad)))
            if res <= self.tolerance:
                if res > 0.5 * best_res or extra >= _EXTRA_ITERATIONS:
                    break
                extra += 1
            best_res = min(best_res, res)
            if res == 0.0:
                break

            system = periodic_hessian(_curvature(self.twist, p, q, u))
            direction = scipy.sparse.linalg.spsolve(system, -grad)
            t0 = 1.0
            if not np.all(np.isfinite(direction)) or np.dot(grad, direction) >= 0:
                direction = -grad
                t0 = 0.25
            accepted = self._line_search(p, q, u, direction, grad, value, t0)
            if accepted is None:
                logger.debug("polish stalled at residual %.3e", res)
                break
            u, value = accepted
            history.append(value)
            logger.debug("polish step: residual %.3e, excess action %.6e", res, value)
        return u

    def solve(self, p: int, q: int, seed: int = 0) -> Configuration:
        """
        Compute the (p, q) Birkhoff minimizer.

        Args:
            p: Rotation numerator
            q: Period, coprime to p with 0 < p < q
            seed: Recorded with the result; the phase scan itself is deterministic

        Returns:
            Configuration with residual <= tolerance and verified ordering

        Raises:
            InvalidInputError: (p, q) not coprime or out of order
            ConvergenceError: Residual tolerance not reached
            DegeneracyError: Two orbit points within 1e-13
            InvariantViolation: Solved configuration not cyclically ordered
        """
        _validate_rotation(p, q)
        t0 = time.perf_counter()
        twist = self.twist
        period = 1.0 / math.lcm(q, twist.q_n)

        best: tuple[float, float, np.ndarray, list[float]] | None = None
        for k in range(self.phases):
            c = k * period / self.phases
            u, res, history = self._solve_phase(p, q, c)
            value = history[-1]
            logger.debug("phase %d/%d: residual %.3e, excess action %.12e", k, self.phases, res, value)
            if best is None:
                best = (value, c, u, history)
                continue
            scale = max(abs(best[0]), abs(value), 1e-300)
            if value < best[0] - TIE_RELATIVE * scale:
                best = (value, c, u, history)

        assert best is not None
        _, c, u, history = best
        grad = _gradient(twist, p, q, u)
        if float(np.max(np.abs(grad))) > self.tolerance:
            u = self._polish(p, q, u, history)
            grad = _gradient(twist, p, q, u)
        residual = float(np.max(np.abs(grad)))
        if not residual <= self.tolerance:
            raise ConvergenceError(f"Birkhoff solve ({p}, {q}) did not converge", residual)

        for earlier, later in zip(history, history[1:]):
            if later > earlier + ACTION_SLACK * max(abs(earlier), 1e-300):
                logger.warning("action increased beyond roundoff: %.6e -> %.6e", earlier, later)

        config = Configuration(
            p=p,
            q=q,
            u=u,
            twist=twist,
            residual=residual,
            action=_rigid_kinetic(p, q) + _excess_action(twist, p, q, u),
            phase=float(np.mean(u)),
            seed=seed,
            iterations=len(history) - 1,
            action_history=tuple(history),
        )
        u.setflags(write=False)
        gap = minimal_gap(config)
        if gap < DEGENERACY_FLOOR:
            if gap <= 0.0:
                raise InvariantViolation(f"solved ({p}, {q}) configuration is not cyclically ordered")
            raise DegeneracyError(f"orbit points collided (gap {gap:.3e}) in ({p}, {q}) solve")

        elapsed = time.perf_counter() - t0
        self.timings.append(elapsed)
        self.iteration_counts.append(config.iterations)
        logger.info(
            "solved (%d, %d): residual %.3e, %d steps, %.2fs", p, q, residual, config.iterations, elapsed
        )
        return config

    def get_average_time(self) -> float:
        """Average solve time in seconds."""
        if not self.timings:
            return 0.0
        return sum(self.timings) / len(self.timings)

    def reset_timings(self) -> None:
        self.timings.clear()
        self.iteration_counts.clear()


def birkhoff_minimize(
    twist: TwistMap, p: int, q: int, seed: int = 0, tolerance: float = DEFAULT_TOLERANCE
) -> Configuration:
    """Least-action (p, q) Birkhoff configuration; see BirkhoffSolver."""
    return BirkhoffSolver(twist, tolerance=tolerance).solve(p, q, seed)


def required_window_index(alpha: ConstantTypeIrrational, n_bar: int, scale_safety: int = 8) -> int | None:
    """Smallest stored M with q_M >= scale_safety * q_{n_bar}, or None."""
    target = scale_safety * alpha.q[n_bar]
    for m, qm in enumerate(alpha.q):
        if qm >= target:
            return m
    return None


def minimal_window(
    twist: TwistMap,
    alpha: ConstantTypeIrrational,
    M: int,
    seed: int = 0,
    n_bar_max: int | None = None,
    scale_safety: int = 8,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Configuration:
    """
    Solve the (p_M, q_M) window that stands in for the alpha-minimal configuration.

    Args:
        twist: Map built on the same alpha
        alpha: Rotation number supplying the convergent p_M / q_M
        M: Convergent index, 1 <= M <= depth
        seed: Recorded with the solve
        n_bar_max: Largest N-bar of the probed kappa-range; enforces q_M >= scale_safety * q_{N-bar}
        scale_safety: Scale safety factor

    Raises:
        DepthError: M beyond depth, or q_M too small for n_bar_max (names the required M)
        InvalidInputError: Map and analysis use different rotation numbers
    """
    if twist.alpha.partial_quotients[: alpha.depth] != alpha.partial_quotients[: twist.alpha.depth]:
        raise InvalidInputError("twist map and window must be built on the same alpha")
    if not 1 <= M <= alpha.depth:
        raise DepthError(f"convergent index M={M} outside [1, {alpha.depth}]", M)
    p, q = alpha.convergents[M]
    if n_bar_max is not None:
        if n_bar_max > alpha.depth:
            raise DepthError(f"N-bar={n_bar_max} beyond depth {alpha.depth}", n_bar_max + 1)
        needed = scale_safety * alpha.q[n_bar_max]
        if q < needed:
            required = required_window_index(alpha, n_bar_max, scale_safety)
            raise DepthError(
                f"q_M={q} (M={M}) is below {scale_safety} * q_{n_bar_max} = {needed}; "
                f"need M >= {required if required is not None else alpha.depth + 1}",
                required if required is not None else alpha.depth + 1,
            )
    config = birkhoff_minimize(twist, p, q, seed, tolerance)
    logger.info(
        "window M=%d: (p, q) = (%d, %d), chord scales valid above %.3e",
        M,
        p,
        q,
        scale_safety / q,
    )
    return config


def el_residual(config: Configuration) -> float:
    """Max |d1 G(x_i, x_{i+1}) + d2 G(x_{i-1}, x_i)| recomputed from the stored deviation."""
    grad = _gradient(config.twist, config.p, config.q, np.asarray(config.u, dtype=np.float64))
    return float(np.max(np.abs(grad)))


def spatial_order(config: Configuration) -> np.ndarray:
    """Indices i(k) = k p^-1 mod q, the orbit points in rigid-rotation spatial order."""
    inverse = pow(config.p, -1, config.q)
    return np.mod(np.arange(config.q, dtype=np.int64) * inverse, config.q)


def minimal_gap(config: Configuration) -> float:
    """Smallest cyclic gap between spatially consecutive orbit points."""
    order = spatial_order(config)
    u = config.u[order]
    gaps = 1.0 / config.q + np.roll(u, -1) - u
    return float(np.min(gaps))


def ordering_check(config: Configuration) -> bool:
    """
    Whether the points x_i mod 1 are cyclically ordered as the rotation by p/q orders them.

    Equivalent to the order-preservation of n (p/q) + m against x_n + m over the window.
    """
    return minimal_gap(config) > 0.0


@dataclass(frozen=True)
class HolderDiagnostic:
    """
    Finite-difference regularity estimate of the graph.

    Attributes:
        strides: Index strides h (spacing h / q)
        second_differences: sup |y(t + h) - 2 y(t) + y(t - h)| per stride
        exponent: Fitted log-log slope, nan when the second differences vanish
    """

    strides: tuple[int, ...]
    second_differences: tuple[float, ...]
    exponent: float


@dataclass(frozen=True, eq=False)
class CircleGraph:
    """
    Orbit points of a configuration sorted along the circle.

    Attributes:
        theta: x mod 1, strictly increasing
        y: Momentum above each theta
        orbit_variation: Total variation of y in orbit order
        graph_variation: Total variation of y in spatial order
        holder: Second-difference regularity diagnostic
    """

    theta: np.ndarray
    y: np.ndarray
    orbit_variation: float
    graph_variation: float
    holder: HolderDiagnostic

    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.theta.tolist(), self.y.tolist()))


def holder_diagnostic(values: np.ndarray) -> HolderDiagnostic:
    size = len(values)
    strides: list[int] = []
    sups: list[float] = []
    h = 1
    while 2 * h < size:
        second = np.roll(values, -h) - 2.0 * values + np.roll(values, h)
        strides.append(h)
        sups.append(float(np.max(np.abs(second))))
        h *= 2
    exponent = math.nan
    positive = [(s, d) for s, d in zip(strides, sups) if d > 0.0]
    if len(positive) >= 2 and len(positive) == len(strides):
        xs = np.log([s / size for s, _ in positive])
        ys = np.log([d for _, d in positive])
        exponent = float(np.polyfit(xs, ys, 1)[0])
    return HolderDiagnostic(tuple(strides), tuple(sups), exponent)


def graph_extract(config: Configuration) -> CircleGraph:
    """
    Sample of the candidate invariant circle: (x mod 1, y) sorted by x.

    Raises:
        DegeneracyError: Two first coordinates coincide
    """
    order = spatial_order(config)
    positions = np.arange(config.q) / config.q + config.u[order]
    theta = np.mod(positions, 1.0)
    y = config.y[order]
    sort = np.argsort(theta, kind="stable")
    theta = theta[sort]
    y = y[sort]
    gaps = np.diff(theta)
    if len(gaps) and np.min(gaps) < DEGENERACY_FLOOR:
        raise DegeneracyError(f"duplicate circle coordinates (gap {np.min(gaps):.3e})")
    graph_variation = float(np.sum(np.abs(np.roll(y, -1) - y)))
    return CircleGraph(
        theta=theta,
        y=y,
        orbit_variation=config.orbit_variation(),
        graph_variation=graph_variation,
        holder=holder_diagnostic(y),
    )


@dataclass(frozen=True, eq=False)
class OracleResult:
    action: float
    u: np.ndarray
    y_sorted: np.ndarray
    restarts: int


def brute_force_minimize(
    twist: TwistMap, p: int, q: int, restarts: int = 100, seed: int = 0
) -> OracleResult:
    """
    Multi-start L-BFGS-B minimization of the periodic action, the solver's oracle.

    Starts are random perturbations of the rigid rotation of size up to 1/(2q).
    """
    _validate_rotation(p, q)
    rng = np.random.default_rng(seed)

    def objective(u: np.ndarray) -> tuple[float, np.ndarray]:
        return _excess_action(twist, p, q, u), _gradient(twist, p, q, u)

    best_value = math.inf
    best_u = np.zeros(q)
    for _ in range(restarts):
        u0 = rng.uniform(-0.5 / q, 0.5 / q, q)
        result = scipy.optimize.minimize(
            objective,
            u0,
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": 20_000, "gtol": 1e-13, "ftol": 1e-16},
        )
        if result.fun < best_value:
            best_value = float(result.fun)
            best_u = np.asarray(result.x)
    y = p / q + np.roll(best_u, -1) - best_u
    return OracleResult(
        action=_rigid_kinetic(p, q) + best_value,
        u=best_u,
        y_sorted=np.sort(y),
        restarts=restarts,
    )
