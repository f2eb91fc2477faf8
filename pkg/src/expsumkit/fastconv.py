"""Fast Volterra convolution with a power-law kernel.

The operator is (K u)(t) = integral_0^t k(t-s) u(s) ds with kernel
k(t) = t^(alpha-1)/Gamma(alpha), applied to a piecewise-constant signal
on a time grid.  direct_convolve evaluates the exact quadrature weights
at O(N^2) cost and serves as the oracle.  fast_convolve replaces the
kernel over the history (t - s >= the current step) by an exponential
sum with beta = 1 - alpha, so each of its L terms carries a one-number
running history integral updated recursively: O(L) work and storage per
step.  The step containing the singularity is always handled by the
exact local weight, so the kernel approximation is only ever evaluated
inside its validity interval, provided every step is at least t_lo and
the horizon is at most t_hi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .expsum import ExpSum


class FastConvPreconditionError(ValueError):
    """The grid leaves the kernel approximation's validity window."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing points t_0 = 0 < t_1 < ... < t_Nt."""

    points: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float).reshape(-1)
        if points.size < 2:
            raise ValueError("grid needs at least t_0 and t_1")
        if points[0] != 0.0:
            raise ValueError(f"grid must start at t_0 = 0, got {points[0]}")
        if not (np.diff(points) > 0).all():
            raise ValueError("grid points must be strictly increasing")
        points.flags.writeable = False
        object.__setattr__(self, "points", points)

    @property
    def n_steps(self) -> int:
        return self.points.size - 1

    @property
    def min_step(self) -> float:
        return float(np.diff(self.points).min())

    @property
    def horizon(self) -> float:
        return float(self.points[-1])


def uniform_grid(T: float, n_steps: int) -> TimeGrid:
    return TimeGrid(np.linspace(0.0, T, n_steps + 1))


@dataclass(frozen=True)
class SignalHistory:
    """Piecewise-constant signal values U^1..U^Nt on (t_(n-1), t_n]."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).reshape(-1)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def direct_convolve(grid: TimeGrid, u: SignalHistory, alpha: float) -> np.ndarray:
    """O(N^2) evaluation with exact quadrature weights.

    omega_nj = ((t_n - t_(j-1))^alpha - (t_n - t_j)^alpha) / Gamma(alpha+1)
    is the exact integral of the kernel over interval j, so the only error
    is the piecewise-constant interpolation of the signal.
    """
    _check_alpha(alpha)
    t = grid.points
    vals = u.values
    if vals.size != grid.n_steps:
        raise ValueError(
            f"signal has {vals.size} values for {grid.n_steps} grid steps"
        )
    inv_g = 1.0 / specfun.gamma(alpha + 1.0)
    out = np.empty(grid.n_steps)
    for n in range(1, grid.n_steps + 1):
        omega = ((t[n] - t[:n]) ** alpha - (t[n] - t[1 : n + 1]) ** alpha) * inv_g
        out[n - 1] = omega @ vals[:n]
    return out


class FastConvolver:
    """Streaming evaluator: feed one (dt, U) pair per step.

    Keeps one running history integral per kernel term plus the previous
    step's width and signal value; storage is O(L) regardless of how many
    steps have been consumed.
    """

    def __init__(self, kernel: ExpSum, alpha: float):
        _check_alpha(alpha)
        if abs(alpha - (1.0 - kernel.beta)) > 1e-12:
            raise ValueError(
                f"kernel approximates t^-beta with beta={kernel.beta}; "
                f"alpha must equal 1-beta, got {alpha}"
            )
        self.kernel = kernel
        self.alpha = alpha
        self._inv_g1 = 1.0 / specfun.gamma(alpha + 1.0)
        # History kernel prefactor: k(t) ~ c * sum w exp(-a t) with
        # c = 1/(Gamma(alpha) Gamma(1-alpha)).
        c = 1.0 / (specfun.gamma(alpha) * specfun.gamma(1.0 - alpha))
        self._cw_over_a = c * kernel.w / kernel.a
        self._theta = np.zeros(kernel.n_terms)
        self._t = 0.0
        self._dt_prev = 0.0
        self._u_prev = 0.0
        self._n = 0

    def step(self, dt: float, u: float) -> float:
        """Advance by dt with signal value u; returns (K u)(t_n)."""
        if dt < self.kernel.t_lo:
            raise FastConvPreconditionError(
                "PRECONDITION_STEP",
                f"step {dt} is below the kernel's validity floor "
                f"t_lo={self.kernel.t_lo}",
            )
        t_next = self._t + dt
        if t_next > self.kernel.t_hi * (1.0 + 1e-12):
            raise FastConvPreconditionError(
                "PRECONDITION_HORIZON",
                f"time {t_next} exceeds the kernel's validity horizon "
                f"t_hi={self.kernel.t_hi}",
            )
        a = self.kernel.a
        if self._n >= 1:
            # kappa = c w/a * (e^(-a dt) - e^(-a (dt + dt_prev))), the exact
            # integral of the kernel term over the previous interval; expm1
            # keeps accuracy when a*dt_prev is far below 1.
            decay = np.exp(-a * dt)
            kappa = -self._cw_over_a * decay * np.expm1(-a * self._dt_prev)
            self._theta = kappa * self._u_prev + decay * self._theta
        local = dt**self.alpha * self._inv_g1 * u
        self._t = t_next
        self._dt_prev = dt
        self._u_prev = u
        self._n += 1
        return float(local + math.fsum(self._theta))


def fast_convolve(
    grid: TimeGrid, u: SignalHistory, kernel: ExpSum, alpha: float
) -> np.ndarray:
    """O(L*N) evaluation through the streaming recursion.

    Requires every grid step to be at least kernel.t_lo and the horizon to
    be at most kernel.t_hi, so the exponential sum is only used inside its
    certified interval.  Batch output is bit-identical to streaming the
    same steps through FastConvolver, because this is that loop.
    """
    vals = u.values
    if vals.size != grid.n_steps:
        raise ValueError(
            f"signal has {vals.size} values for {grid.n_steps} grid steps"
        )
    if grid.min_step < kernel.t_lo:
        raise FastConvPreconditionError(
            "PRECONDITION_STEP",
            f"smallest grid step {grid.min_step} is below the kernel's "
            f"validity floor t_lo={kernel.t_lo}",
        )
    if grid.horizon > kernel.t_hi * (1.0 + 1e-12):
        raise FastConvPreconditionError(
            "PRECONDITION_HORIZON",
            f"grid horizon {grid.horizon} exceeds the kernel's validity "
            f"horizon t_hi={kernel.t_hi}",
        )
    stepper = FastConvolver(kernel, alpha)
    dts = np.diff(grid.points)
    out = np.empty(grid.n_steps)
    for n in range(grid.n_steps):
        out[n] = stepper.step(float(dts[n]), float(vals[n]))
    return out


def error_bound(grid: TimeGrid, u: SignalHistory, alpha: float, eps: float) -> np.ndarray:
    """Certified bound eps * t_n^alpha / Gamma(alpha+1) * max_(j<=n) |U^j|."""
    _check_alpha(alpha)
    t = grid.points[1:]
    running_max = np.maximum.accumulate(np.abs(u.values))
    return eps * t**alpha / specfun.gamma(alpha + 1.0) * running_max
