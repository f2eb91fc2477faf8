"""Parameter selection for the trapezoidal exponential-sum generators.

Three strictly monotone scalar equations fix the construction: the step
size h is chosen so the aliasing series of Gamma-moduli meets the
discretization budget, and the two truncation cutoffs are chosen so the
incomplete-Gamma tails meet the truncation budget.  All three are solved
by a safeguarded bracketing solver (bisection with secant refinement);
the equations are monotone in their unknowns, so bracketing is robust.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from . import specfun

# Named tolerance splits (fractions of the overall target eps).
SPLIT_PRESETS = {
    "paper-ex1": (0.9, 0.05),
    "thirds": (1.0 / 3.0, 1.0 / 3.0),
}

_SOLVER_MAX_ITER = 200
_SOLVER_RTOL = 1e-11
# Aliasing series terms decay double-exponentially; stop well below budget.
_SERIES_CUT_FACTOR = 1e-4
_SERIES_MAX_TERMS = 200


class SolverError(RuntimeError):
    """Bracketing solver failed to converge; message carries diagnostics."""


class ProvisoError(ValueError):
    """The monotone-tail bound behind the cutoff equation does not apply.

    The upper cutoff requires delta*e^(x_delta) >= beta and the lower one
    T*e^(-X_T) <= beta at the solution; a truncation tolerance too large
    for the (beta, interval) at hand violates them.
    """


@dataclass(frozen=True)
class Tolerances:
    """Overall relative-error target and its discretization/truncation split."""

    eps: float
    eps_rd: float
    eps_rt: float

    def __post_init__(self):
        for name in ("eps", "eps_rd", "eps_rt"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        # eps_rd + 2*eps_rt <= eps guarantees the overall bound; allow 1 ulp slack.
        if self.eps_rd + 2.0 * self.eps_rt > self.eps * (1.0 + 1e-12):
            raise ValueError(
                f"eps_rd + 2*eps_rt = {self.eps_rd + 2.0 * self.eps_rt} "
                f"exceeds eps = {self.eps}"
            )


@dataclass(frozen=True)
class DesignParams:
    """Solved step size and cutoffs, plus the rounded term counts."""

    h: float
    x_delta: float
    X_T: float
    M: int
    N: int

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.M < 0 or self.N < 0:
            raise ValueError("M and N must be nonnegative")


def split_tolerances(eps: float, split="paper-ex1") -> Tolerances:
    """Build Tolerances from an overall eps and a split rule.

    split is a preset name from SPLIT_PRESETS or an explicit
    (rd_fraction, rt_fraction) pair.
    """
    if isinstance(split, str):
        try:
            frac_rd, frac_rt = SPLIT_PRESETS[split]
        except KeyError:
            raise ValueError(
                f"unknown split {split!r}; choose from {sorted(SPLIT_PRESETS)}"
            ) from None
    else:
        frac_rd, frac_rt = split
    return Tolerances(eps=eps, eps_rd=frac_rd * eps, eps_rt=frac_rt * eps)


def _solve_monotone(
    f: Callable[[float], float],
    x0: float,
    increasing: bool,
    rtol: float = _SOLVER_RTOL,
    what: str = "",
) -> float:
    """Root of a strictly monotone f, bracketing by doubling from x0 > 0.

    Bisection safeguarded with secant steps; converges on relative
    bracket width.
    """
    lo = hi = x0
    flo = fhi = f(x0)
    it = 0
    while flo > 0.0:
        lo *= 0.5 if increasing else 2.0
        flo = f(lo)
        it += 1
        if it > _SOLVER_MAX_ITER:
            raise SolverError(f"no lower bracket for {what}: x={lo}, f={flo}")
    it = 0
    while fhi < 0.0:
        hi *= 2.0 if increasing else 0.5
        fhi = f(hi)
        it += 1
        if it > _SOLVER_MAX_ITER:
            raise SolverError(f"no upper bracket for {what}: x={hi}, f={fhi}")
    # Both loops leave f(lo) <= 0 <= f(hi); lo/hi need not be ordered.

    for _ in range(_SOLVER_MAX_ITER):
        if flo == 0.0:
            return lo
        if fhi == 0.0:
            return hi
        if abs(hi - lo) <= rtol * max(abs(lo), abs(hi)):
            return 0.5 * (lo + hi)
        # Secant candidate, fall back to the midpoint when it leaves the bracket.
        x = lo - flo * (hi - lo) / (fhi - flo)
        span = abs(hi - lo)
        if not (min(lo, hi) + 0.01 * span < x < max(lo, hi) - 0.01 * span):
            x = 0.5 * (lo + hi)
        fx = f(x)
        if fx < 0.0:
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
    raise SolverError(
        f"solver for {what} did not converge in {_SOLVER_MAX_ITER} iterations: "
        f"bracket [{lo}, {hi}], residuals [{flo}, {fhi}]"
    )


def _alias_series(beta: float, h: float, cut: float) -> float:
    """2 * sum_{n>=1} |Gamma(beta + i*2*pi*n/h)|, truncated below cut."""
    total = 0.0
    for n in range(1, _SERIES_MAX_TERMS + 1):
        term = 2.0 * specfun.abs_gamma_complex(beta, 2.0 * math.pi * n / h)
        total += term
        if term < cut:
            break
    return total


def solve_step(beta: float, eps_rd: float) -> float:
    """Step size h with aliasing series equal to eps_rd * Gamma(beta).

    The series is increasing in h, so the equation has a unique root;
    it is solved in log space because the series varies over hundreds
    of orders of magnitude across reasonable h.
    """
    if not 0.0 < eps_rd < 1.0:
        raise ValueError(f"eps_rd must lie in (0, 1), got {eps_rd}")
    g = specfun.gamma(beta)
    target = eps_rd * g
    cut = _SERIES_CUT_FACTOR * target

    def residual(h: float) -> float:
        s = _alias_series(beta, h, cut)
        if s == 0.0:
            return -math.inf
        return math.log(s) - math.log(target)

    return _solve_monotone(residual, 1.0, increasing=True, what="step size h")


def solve_upper_cutoff(beta: float, delta: float, eps_rt: float) -> float:
    """Cutoff x_delta with Gamma(beta, delta*e^(x_delta)) = eps_rt * Gamma(beta).

    Solved in the variable u = delta*e^(x_delta); the tail is evaluated
    in log space so the bracket search may roam past the underflow point
    of the plain incomplete Gamma.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if not 0.0 < eps_rt < 1.0:
        raise ValueError(f"eps_rt must lie in (0, 1), got {eps_rt}")
    log_target = math.log(eps_rt) + math.log(specfun.gamma(beta))
    if specfun.log_upper_inc_gamma(beta, beta) <= log_target:
        raise ProvisoError(
            f"eps_rt={eps_rt} too large: the tail equation would put "
            f"delta*e^(x_delta) below beta={beta}, outside the bound's range"
        )

    def residual(u: float) -> float:
        return specfun.log_upper_inc_gamma(beta, u) - log_target

    u = _solve_monotone(residual, beta, increasing=False, what="upper cutoff u")
    x_delta = math.log(u / delta)
    if not x_delta > 0:
        raise ProvisoError(
            f"delta={delta} already exceeds the tail cutoff u={u}; "
            "no positive x_delta exists for this tolerance"
        )
    return x_delta


def solve_lower_cutoff(beta: float, T: float, eps_rt: float) -> float:
    """Cutoff X_T with Gamma(beta) - Gamma(beta, T*e^(-X_T)) = eps_rt * Gamma(beta).

    Solved in v = log(T*e^(-X_T)) through the cancellation-free lower
    incomplete Gamma; the solution u is tiny (u ~ (eps_rt*beta*Gamma(beta))^(1/beta)),
    so the log variable keeps the secant steps well scaled.
    """
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    if not 0.0 < eps_rt < 1.0:
        raise ValueError(f"eps_rt must lie in (0, 1), got {eps_rt}")
    g = specfun.gamma(beta)
    log_target = math.log(eps_rt) + math.log(g)
    if specfun.lower_inc_gamma(beta, beta) <= eps_rt * g:
        raise ProvisoError(
            f"eps_rt={eps_rt} too large: the head equation would put "
            f"T*e^(-X_T) above beta={beta}, outside the bound's range"
        )

    def residual(v: float) -> float:
        val = specfun.lower_inc_gamma(beta, math.exp(v))
        if val == 0.0:
            return -math.inf
        return math.log(val) - log_target

    # Bracket in the log variable by shifting, not doubling.
    v = math.log(beta)
    step = 1.0
    while residual(v) > 0.0:
        v -= step
        step *= 2.0
        if not math.isfinite(v) or step > 2.0**40:
            raise SolverError(f"no bracket for lower cutoff: v={v}")
    u = math.exp(_solve_monotone_bracketed(residual, v, math.log(beta)))
    X_T = math.log(T / u)
    if not X_T > 0:
        raise ProvisoError(
            f"T={T} already lies below the head cutoff u={u}; "
            "no positive X_T exists for this tolerance"
        )
    return X_T


def _solve_monotone_bracketed(
    f: Callable[[float], float], lo: float, hi: float
) -> float:
    """Same safeguarded secant-bisection, but with a bracket supplied."""
    flo, fhi = f(lo), f(hi)
    if flo > 0.0 or fhi < 0.0:
        raise SolverError(f"invalid bracket [{lo}, {hi}]: f = [{flo}, {fhi}]")
    for _ in range(_SOLVER_MAX_ITER):
        if flo == 0.0:
            return lo
        if fhi == 0.0:
            return hi
        if abs(hi - lo) <= _SOLVER_RTOL * max(1.0, abs(lo), abs(hi)):
            return 0.5 * (lo + hi)
        x = lo - flo * (hi - lo) / (fhi - flo) if math.isfinite(flo) else 0.5 * (lo + hi)
        span = abs(hi - lo)
        if not (min(lo, hi) + 0.01 * span < x < max(lo, hi) - 0.01 * span):
            x = 0.5 * (lo + hi)
        fx = f(x)
        if fx < 0.0:
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
    raise SolverError(f"bracketed solver stalled on [{lo}, {hi}]")


def design_params(beta: float, delta: float, T: float, tol: Tolerances) -> DesignParams:
    """Solve all three equations and round to term counts M, N."""
    if not 0.0 < delta < T:
        raise ValueError(f"need 0 < delta < T, got delta={delta}, T={T}")
    h = solve_step(beta, tol.eps_rd)
    x_delta = solve_upper_cutoff(beta, delta, tol.eps_rt)
    X_T = solve_lower_cutoff(beta, T, tol.eps_rt)
    return DesignParams(
        h=h,
        x_delta=x_delta,
        X_T=X_T,
        M=math.ceil(X_T / h),
        N=math.ceil(x_delta / h),
    )


@dataclass(frozen=True)
class SweepRow:
    eps: float
    h: float
    M: int
    N: int


def design_sweep(
    beta: float,
    delta: float,
    T: float,
    eps_list: Sequence[float],
    split="thirds",
) -> list[SweepRow]:
    """One design per overall tolerance; input must be sorted descending."""
    if not 0.0 < delta < T:
        raise ValueError(f"need 0 < delta < T, got delta={delta}, T={T}")
    eps_values = [float(e) for e in eps_list]
    if any(b >= a for a, b in zip(eps_values, eps_values[1:])):
        raise ValueError("eps_list must be sorted in descending order")
    rows = []
    for eps in eps_values:
        p = design_params(beta, delta, T, split_tolerances(eps, split))
        rows.append(SweepRow(eps=eps, h=p.h, M=p.M, N=p.N))
    return rows


def sweep_rows_csv(rows: Sequence[SweepRow]) -> str:
    """CSV body for a sweep: header eps,h,M,N, 17 significant digits."""
    lines = ["eps,h,M,N"]
    for r in rows:
        lines.append(f"{r.eps:.17g},{r.h:.17g},{r.M},{r.N}")
    return "\n".join(lines) + "\n"
