"""Exponential-sum generator from the double-exponential substitution.

Under p = exp(x - e^-x) the integrand of the Gamma-integral
representation decays double-exponentially on the left, so far fewer
negative-index nodes are needed than in the plain-substitution sum.
Node n carries

    a_n = exp(n h - e^(-n h)),
    w_n = h (1 + e^(-n h)) exp(beta (n h - e^(-n h))).

The left truncation count M has a computable certificate: with
C2 = 2e/Gamma(beta+1) the dropped left tail is below
C2 exp(-beta e^(M h)).  The step h and the right count N reuse the
plain-substitution design equations, whose constants are computable.
The sum is built on the normalized interval [delta/T', 1] and rescaled,
with T' = headroom * T; designing past T flattens the error ripple near
the right endpoint, at the cost of a few extra terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .design import Tolerances, solve_step, solve_upper_cutoff
from .expsum import ExpSum, rescale

DEFAULT_HEADROOM = 10.0


@dataclass(frozen=True)
class DeRecipe:
    """Inputs plus the solved step and truncation counts."""

    beta: float
    delta: float
    T: float
    headroom: float
    tol: Tolerances
    h: float
    M: int
    N: int


def left_cutoff_count(beta: float, h: float, eps_rt: float) -> int:
    """Smallest M >= 0 with C2 * exp(-beta * e^(M h)) <= eps_rt.

    The certificate additionally requires M h >= log(1/beta - 1) when
    beta < 1/2; M is lifted to meet it, never an error.
    """
    c2 = 2.0 * math.e / specfun.gamma(beta + 1.0)
    M = 0
    while c2 * math.exp(-beta * math.exp(M * h)) > eps_rt:
        M += 1
        if M > 10_000:
            raise RuntimeError("left cutoff search ran away; check tolerances")
    if beta < 0.5:
        M = max(M, math.ceil(math.log(1.0 / beta - 1.0) / h))
    return M


def generate_de(
    beta: float,
    delta: float,
    T: float,
    tol: Tolerances,
    headroom: float = DEFAULT_HEADROOM,
) -> tuple[ExpSum, DeRecipe]:
    """Build the double-exponential sum for t^(-beta) on [delta, T]."""
    if not 0.0 < delta < T:
        raise ValueError(f"need 0 < delta < T, got delta={delta}, T={T}")
    if not headroom >= 1.0:
        raise ValueError(f"headroom must be >= 1, got {headroom}")
    T_design = headroom * T
    delta_norm = delta / T_design

    h = solve_step(beta, tol.eps_rd)
    N = math.ceil(solve_upper_cutoff(beta, delta_norm, tol.eps_rt) / h)
    M = left_cutoff_count(beta, h, tol.eps_rt)

    n = np.arange(-M, N + 1)
    u = n * h - np.exp(-n * h)
    a = np.exp(u)
    w = h * (1.0 + np.exp(-n * h)) * np.exp(beta * u)
    unit = ExpSum(beta=beta, a=a, w=w, t_lo=delta_norm, t_hi=1.0, provenance="de")
    scaled = rescale(unit, T_design)
    # Designed on [delta, headroom*T] but certified (and reported) on [delta, T].
    s = ExpSum(
        beta=beta, a=scaled.a, w=scaled.w, t_lo=delta, t_hi=T, provenance="de"
    )
    recipe = DeRecipe(
        beta=beta, delta=delta, T=T, headroom=headroom, tol=tol, h=h, M=M, N=N
    )
    return s, recipe
