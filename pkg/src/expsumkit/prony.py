"""Prony reduction of the small-exponent head of an exponential sum.

A head of L terms with tiny exponents is summarized by its first 2K
power-sum moments g_j = sum_l w_l a_l^j; the K reduced exponents are the
roots of the monic polynomial whose coefficients solve the K x K Hankel
system in the moments, and the K reduced weights are a least-squares fit
to all 2K moment conditions.  Known failure modes are checked rather than
assumed away: the Hankel matrix may be badly conditioned (warned), the
roots may fail to be real and positive (error), and the fitted weights
may fail to be positive (error); the relative moment residual of the
weight fit is recorded on every reduction.

All moment arithmetic runs on exponents pre-scaled by s = max(a): raw
power sums of exponents spanning many orders of magnitude underflow and
wreck the Hankel conditioning, while the pre-scaling is exact to undo
(g_j scales by s^j, roots scale by s, weights are unchanged).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import specfun
from .expsum import DEFAULT_GRID_POINTS, ExpSum, geometric_grid

COND_WARN_THRESHOLD = 1e14
# |eta| below this is unresolvable in double precision; scan cells carry a flag.
ETA_FLOOR = 1e-15
_ROOT_IMAG_RTOL = 1e-8


class PronyError(ValueError):
    """A reduction failed one of the validity checks; .code names which."""

    code = "PRONY"


class RootsNotRealPositive(PronyError):
    code = "ROOTS_NOT_REAL_POSITIVE"


class WeightsNotPositive(PronyError):
    code = "WEIGHTS_NOT_POSITIVE"


class IllConditionedWarning(UserWarning):
    """Hankel condition estimate above COND_WARN_THRESHOLD."""


@dataclass(frozen=True)
class PronyReduction:
    """Outcome of one reduction: moments, polynomial, terms, diagnostics.

    moments and poly live in the pre-scaled variable a/scale; reduced_a is
    already unscaled and ready to use.
    """

    L: int
    K: int
    scale: float
    moments: np.ndarray
    poly: np.ndarray
    reduced_a: np.ndarray
    reduced_w: np.ndarray
    cond_estimate: float
    residual: float


def moments(a, w, count: int, scale: float = 1.0) -> np.ndarray:
    """Power sums g_j = sum_l w_l (a_l/scale)^j for j = 0..count-1.

    Each sum is exactly rounded (math.fsum); with the default scale the
    raw power sums are returned.
    """
    a = np.asarray(a, dtype=float)
    w = np.asarray(w, dtype=float)
    if a.size == 0:
        raise ValueError("head must be nonempty")
    if count < 1:
        raise ValueError(f"need at least one moment, got count={count}")
    powers = np.ones_like(a)
    out = np.empty(count)
    scaled = a / scale
    for j in range(count):
        out[j] = math.fsum(w * powers)
        powers = powers * scaled
    return out


def prony_reduce(a, w, K: int) -> PronyReduction:
    """Reduce an L-term head to K terms matching its first 2K moments."""
    a = np.asarray(a, dtype=float)
    w = np.asarray(w, dtype=float)
    L = a.size
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")
    if 2 * K - 1 > L:
        raise ValueError(f"need 2K-1 <= L, got K={K}, L={L}")
    if not (a > 0).all() or not (w > 0).all():
        raise ValueError("head exponents and weights must be positive")

    s = float(a.max())
    g = moments(a, w, 2 * K, scale=s)

    # Hankel solve for the monic-polynomial coefficients, LU with partial
    # pivoting plus one step of iterative refinement.
    H = np.empty((K, K))
    for j in range(K):
        H[j, :] = g[j : j + K]
    b = -g[K : 2 * K]
    cond = float(np.linalg.cond(H))
    if cond > COND_WARN_THRESHOLD:
        warnings.warn(
            f"Hankel system for K={K}, L={L} has condition estimate "
            f"{cond:.2e}; reduced terms may be inaccurate",
            IllConditionedWarning,
            stacklevel=2,
        )
    lu, piv = scipy.linalg.lu_factor(H)
    q = scipy.linalg.lu_solve((lu, piv), b)
    q = q + scipy.linalg.lu_solve((lu, piv), b - H @ q)

    poly = np.concatenate((q, [1.0]))
    # Roots via the companion-matrix eigenvalues (highest coefficient first).
    roots = np.roots(poly[::-1])

    bad_imag = np.abs(roots.imag) > _ROOT_IMAG_RTOL * np.abs(roots)
    if bad_imag.any() or (roots.real <= 0).any():
        raise RootsNotRealPositive(
            f"polynomial roots are not all real and positive for K={K}, "
            f"L={L}: {roots}"
        )
    nodes = np.sort(roots.real)
    if (np.diff(nodes) == 0).any():
        raise RootsNotRealPositive(
            f"polynomial roots are not distinct for K={K}, L={L}: {nodes}"
        )

    # Overdetermined weight fit over all 2K moment conditions (QR-based).
    V = np.vander(nodes, 2 * K, increasing=True).T
    wt, *_ = scipy.linalg.lstsq(V, g, lapack_driver="gelsy")
    residual = float(np.linalg.norm(V @ wt - g) / np.linalg.norm(g))
    if (wt <= 0).any():
        raise WeightsNotPositive(
            f"fitted weights are not all positive for K={K}, L={L}: {wt}"
        )

    return PronyReduction(
        L=L,
        K=K,
        scale=s,
        moments=g,
        poly=poly,
        reduced_a=nodes * s,
        reduced_w=wt,
        cond_estimate=cond,
        residual=residual,
    )


def eta_error(head_a, head_w, reduced_a, reduced_w, beta: float, grid) -> float:
    """max over the grid of the reduction's contribution to the relative error.

    eta(t) = (t^beta / Gamma(beta)) * (sum_k w~_k e^(-a~_k t)
                                       - sum_l w_l e^(-a_l t)).
    """
    head_a = np.asarray(head_a, dtype=float)
    head_w = np.asarray(head_w, dtype=float)
    reduced_a = np.asarray(reduced_a, dtype=float)
    reduced_w = np.asarray(reduced_w, dtype=float)
    grid = np.asarray(grid, dtype=float)
    red = np.exp(-np.outer(grid, reduced_a)) @ reduced_w
    orig = np.exp(-np.outer(grid, head_a)) @ head_w
    eta = grid**beta / specfun.gamma(beta) * (red - orig)
    return float(np.abs(eta).max())


@dataclass(frozen=True)
class ScanCell:
    L: int
    K: int
    eta_max: float  # nan when the reduction failed a validity check
    below_floor: bool


@dataclass(frozen=True)
class ScanResult:
    """Best (L, K) found by the budgeted scan; L = K = 0 means no reduction."""

    L: int
    K: int
    reduction: PronyReduction | None
    eta_max: float
    cells: list[ScanCell]


def _try_cell(s: ExpSum, L: int, K: int, grid) -> tuple[PronyReduction | None, float]:
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IllConditionedWarning)
            red = prony_reduce(s.a[:L], s.w[:L], K)
    except PronyError:
        return None, math.nan
    eta = eta_error(s.a[:L], s.w[:L], red.reduced_a, red.reduced_w, s.beta, grid)
    return red, eta


def auto_scan(
    s: ExpSum, budget: float, K_max: int, grid=None
) -> ScanResult:
    """Find, per K, the largest head length L whose reduction stays under
    budget, then pick the (L, K) with the biggest saving L - K.

    L is searched downward from the full term count, so the first hit per
    K is the largest; ties in the saving go to the smaller K.
    """
    if budget < 0:
        raise ValueError(f"budget must be nonnegative, got {budget}")
    if grid is None:
        grid = geometric_grid(s.t_lo, s.t_hi, DEFAULT_GRID_POINTS)
    cells: list[ScanCell] = []
    best: tuple[int, int, PronyReduction, float] | None = None
    for K in range(1, K_max + 1):
        for L in range(s.n_terms, 2 * K - 2, -1):
            if L < 1:
                break
            red, eta = _try_cell(s, L, K, grid)
            cells.append(
                ScanCell(L=L, K=K, eta_max=eta, below_floor=eta < ETA_FLOOR)
            )
            if red is not None and eta < budget:
                if (
                    best is None
                    or L - K > best[0] - best[1]
                    or (L - K == best[0] - best[1] and K < best[1])
                ):
                    best = (L, K, red, eta)
                break
    if best is None:
        return ScanResult(L=0, K=0, reduction=None, eta_max=0.0, cells=cells)
    return ScanResult(
        L=best[0], K=best[1], reduction=best[2], eta_max=best[3], cells=cells
    )


def scan_table(
    s: ExpSum,
    L_values,
    K_values,
    grid=None,
) -> list[ScanCell]:
    """Evaluate eta_max on an explicit (L, K) grid, for tabulated reports."""
    if grid is None:
        grid = geometric_grid(s.t_lo, s.t_hi, DEFAULT_GRID_POINTS)
    cells = []
    for K in K_values:
        for L in L_values:
            if 2 * K - 1 > L or L > s.n_terms:
                continue
            _, eta = _try_cell(s, L, K, grid)
            cells.append(
                ScanCell(L=L, K=K, eta_max=eta, below_floor=eta < ETA_FLOOR)
            )
    return cells


def splice(s: ExpSum, L: int, reduction: PronyReduction | None) -> ExpSum:
    """Replace the L smallest-exponent terms by the reduced terms."""
    if L == 0:
        return s
    if reduction is None:
        raise ValueError("a reduction is required when L > 0")
    if reduction.L != L:
        raise ValueError(
            f"reduction was computed for a head of {reduction.L} terms, not {L}"
        )
    if L > s.n_terms:
        raise ValueError(f"head length {L} exceeds term count {s.n_terms}")
    a = np.concatenate((reduction.reduced_a, s.a[L:]))
    w = np.concatenate((reduction.reduced_w, s.w[L:]))
    order = np.argsort(a)
    return ExpSum(
        beta=s.beta,
        a=a[order],
        w=w[order],
        t_lo=s.t_lo,
        t_hi=s.t_hi,
        provenance="prony-reduced",
    )


def scan_cells_csv(cells: list[ScanCell]) -> str:
    """CSV body for a scan: header L,K,eta_max, 17 significant digits."""
    lines = ["L,K,eta_max"]
    for c in cells:
        lines.append(f"{c.L},{c.K},{c.eta_max:.17g}")
    return "\n".join(lines) + "\n"
