"""Shared fixtures: the two worked example configurations.

Session scope keeps the suite fast; every consumer treats these sums as
immutable values.
"""

from __future__ import annotations

import pytest

from expsumkit import (
    auto_scan,
    generate_bm,
    generate_de,
    geometric_grid,
    splice,
    split_tolerances,
)

BETA = 0.75
DELTA = 1e-6
T = 10.0
EPS = 1e-8
GRID_P = 751


@pytest.fixture(scope="session")
def ex1_tol():
    return split_tolerances(EPS, "paper-ex1")


@pytest.fixture(scope="session")
def bm(ex1_tol):
    """102-term plain-substitution sum for beta=3/4 on [1e-6, 10]."""
    return generate_bm(BETA, DELTA, T, ex1_tol)


@pytest.fixture(scope="session")
def bm_sum(bm):
    return bm[0]


@pytest.fixture(scope="session")
def bm_recipe(bm):
    return bm[1]


@pytest.fixture(scope="session")
def ex1_grid(bm_sum):
    return geometric_grid(bm_sum.t_lo, bm_sum.t_hi, GRID_P)


@pytest.fixture(scope="session")
def bm_reduced(bm_sum, ex1_grid):
    """The 43-term compressed variant picked by the budgeted scan."""
    result = auto_scan(bm_sum, EPS, 6, ex1_grid)
    assert (result.L, result.K) == (65, 6)
    return splice(bm_sum, result.L, result.reduction)


@pytest.fixture(scope="session")
def de_hr1(ex1_tol):
    """49-term double-exponential sum designed exactly for [delta, T]."""
    return generate_de(BETA, DELTA, T, ex1_tol, headroom=1.0)


@pytest.fixture(scope="session")
def de_hr10(ex1_tol):
    """54-term variant designed for [delta, 10T], used on [delta, T]."""
    return generate_de(BETA, DELTA, T, ex1_tol, headroom=10.0)
