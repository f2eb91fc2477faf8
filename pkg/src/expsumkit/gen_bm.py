"""Exponential-sum generator from the plain exponential substitution.

Trapezoidal discretization of the Gamma-integral representation of
t^(-beta) under p = e^x: node n carries exponent e^(n h) and weight
h e^(beta n h).  The step h and the truncation range n in [-M, N] come
from the design equations, which certify a relative error of at most
eps_rd + 2 eps_rt on [delta, T].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .design import DesignParams, Tolerances, design_params
from .expsum import ExpSum


@dataclass(frozen=True)
class BmRecipe:
    """Inputs plus the solved design behind a generated sum."""

    beta: float
    delta: float
    T: float
    tol: Tolerances
    params: DesignParams


def generate_bm(
    beta: float, delta: float, T: float, tol: Tolerances
) -> tuple[ExpSum, BmRecipe]:
    """Build the certified sum for t^(-beta) on [delta, T]; M+1+N terms."""
    params = design_params(beta, delta, T, tol)
    h = params.h
    n = np.arange(-params.M, params.N + 1)
    # w_n = h * a_n^beta, computed in exponent form for reproducible rounding.
    a = np.exp(h * n)
    w = h * np.exp(beta * h * n)
    s = ExpSum(beta=beta, a=a, w=w, t_lo=delta, t_hi=T, provenance="bm")
    return s, BmRecipe(beta=beta, delta=delta, T=T, tol=tol, params=params)
