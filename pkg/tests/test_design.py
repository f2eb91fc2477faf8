"""Design-equation solvers: worked-example values, closed forms, invariants."""

import math

import numpy as np
import pytest

from expsumkit import design, specfun


def alias_series(beta: float, h: float) -> float:
    """Independent evaluation of the step-size equation's left side."""
    total = 0.0
    for n in range(1, 100):
        term = 2.0 * specfun.abs_gamma_complex(beta, 2.0 * math.pi * n / h)
        total += term
        if term < 1e-20 * specfun.gamma(beta):
            break
    return total


class TestTolerances:
    def test_split_presets(self):
        tol = design.split_tolerances(1e-8, "paper-ex1")
        assert (tol.eps_rd, tol.eps_rt) == (0.9e-8, 0.05e-8)
        tol = design.split_tolerances(3e-9, "thirds")
        assert tol.eps_rd == pytest.approx(1e-9)
        assert tol.eps_rt == pytest.approx(1e-9)

    def test_explicit_pair(self):
        tol = design.split_tolerances(1e-6, (0.5, 0.1))
        assert tol.eps_rd == 0.5e-6 and tol.eps_rt == 0.1e-6

    def test_unknown_preset(self):
        with pytest.raises(ValueError):
            design.split_tolerances(1e-8, "halves")

    def test_budget_overrun_rejected(self):
        with pytest.raises(ValueError):
            design.Tolerances(eps=1e-8, eps_rd=0.9e-8, eps_rt=0.2e-8)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.5, 2.0])
    def test_open_unit_interval(self, bad):
        with pytest.raises(ValueError):
            design.Tolerances(eps=bad, eps_rd=1e-9, eps_rt=1e-9)


class TestSolveStep:
    def test_worked_example(self):
        h = design.solve_step(0.75, 0.9e-8)
        assert h == pytest.approx(0.47962, abs=1e-4)

    def test_half_beta_known_amplitude(self):
        # At beta = 1/2 and h = 1/3 the n=1 modulus ratio is 1.95692e-13 and
        # the n=2 term is negligible, so that budget must return h = 1/3.
        h = design.solve_step(0.5, 2.0 * 1.95692e-13)
        assert h == pytest.approx(1.0 / 3.0, abs=1e-5)

    def test_monotone_in_tolerance(self):
        assert design.solve_step(0.75, 1e-6) > design.solve_step(0.75, 1e-10)

    def test_residual_at_solution(self):
        for beta, eps_rd in ((0.75, 0.9e-8), (0.3, 1e-5), (1.8, 1e-11)):
            h = design.solve_step(beta, eps_rd)
            target = eps_rd * specfun.gamma(beta)
            assert abs(alias_series(beta, h) - target) <= 1e-8 * target

    def test_domain(self):
        with pytest.raises(ValueError):
            design.solve_step(0.75, 0.0)


class TestSolveUpperCutoff:
    def test_beta_one_closed_form(self):
        for eps_rt in (1e-4, 1e-9):
            x = design.solve_upper_cutoff(1.0, 1.0, eps_rt)
            assert x == pytest.approx(math.log(math.log(1.0 / eps_rt)), rel=1e-8)

    def test_worked_example_count(self, bm_recipe):
        p = bm_recipe.params
        assert math.ceil(p.x_delta / p.h) == 36

    def test_monotone_in_delta(self):
        big = design.solve_upper_cutoff(0.75, 1e-7, 0.05e-8)
        small = design.solve_upper_cutoff(0.75, 1e-6, 0.05e-8)
        assert big > small
        # x_delta shifts by exactly log(10) when delta shrinks tenfold
        assert big - small == pytest.approx(math.log(10.0), rel=1e-9)

    def test_proviso_holds_at_solution(self):
        for beta in (0.3, 0.75, 2.0):
            for eps_rt in (1e-6, 1e-10):
                x = design.solve_upper_cutoff(beta, 1e-5, eps_rt)
                assert 1e-5 * math.exp(x) >= beta

    def test_tolerance_too_large(self):
        with pytest.raises(design.ProvisoError):
            design.solve_upper_cutoff(0.75, 1e-6, 0.9)


class TestSolveLowerCutoff:
    def test_beta_one_closed_form(self):
        for eps_rt in (1e-5, 1e-9):
            x = design.solve_lower_cutoff(1.0, 1.0, eps_rt)
            assert x == pytest.approx(math.log(1.0 / eps_rt), rel=1e-6)

    def test_worked_example_count(self, bm_recipe):
        p = bm_recipe.params
        assert math.ceil(p.X_T / p.h) == 65

    def test_small_q_crosscheck(self):
        # At the solution u = T e^(-X_T), the head mass is ~ u^beta / beta.
        beta, T, eps_rt = 0.75, 10.0, 0.05e-8
        x = design.solve_lower_cutoff(beta, T, eps_rt)
        u = T * math.exp(-x)
        assert u**beta / beta == pytest.approx(
            eps_rt * specfun.gamma(beta), rel=1e-3
        )

    def test_proviso_holds_at_solution(self):
        for beta in (0.3, 0.75, 2.0):
            x = design.solve_lower_cutoff(beta, 5.0, 1e-8)
            assert 5.0 * math.exp(-x) <= beta

    def test_tolerance_too_large(self):
        with pytest.raises(design.ProvisoError):
            design.solve_lower_cutoff(0.75, 10.0, 0.9)


class TestDesignSweep:
    def test_worked_example_row(self):
        rows = design.design_sweep(
            0.75, 1e-6, 10.0, [1e-8], split=(0.9, 0.05)
        )
        (row,) = rows
        assert row.h == pytest.approx(0.47962, abs=1e-4)
        assert (row.M, row.N) == (65, 36)

    def test_degenerate_interval_rejected(self):
        with pytest.raises(ValueError):
            design.design_sweep(0.75, 1.0, 1.0, [1e-8])

    def test_unsorted_rejected(self):
        with pytest.raises(ValueError):
            design.design_sweep(0.75, 1e-6, 10.0, [1e-8, 1e-4])

    def test_inverse_step_tracks_log_tolerance(self):
        eps = [10.0**-k for k in range(4, 13)]
        rows = design.design_sweep(0.75, 1e-6, 10.0, eps, split="thirds")
        x = np.log([1.0 / r.eps for r in rows])
        y = np.array([1.0 / r.h for r in rows])
        corr = np.corrcoef(x, y)[0, 1]
        assert corr >= 0.99

    def test_counts_cover_cutoffs_with_slack_below_h(self):
        rows = design.design_sweep(0.6, 1e-5, 20.0, [1e-6, 1e-9], split="thirds")
        for row in rows:
            tol = design.split_tolerances(row.eps, "thirds")
            x_delta = design.solve_upper_cutoff(0.6, 1e-5, tol.eps_rt)
            X_T = design.solve_lower_cutoff(0.6, 20.0, tol.eps_rt)
            assert row.M * row.h >= X_T
            assert row.N * row.h >= x_delta
            assert row.M * row.h - X_T < row.h
            assert row.N * row.h - x_delta < row.h

    def test_csv_shape(self):
        rows = design.design_sweep(0.75, 1e-4, 5.0, [1e-6], split="thirds")
        text = design.sweep_rows_csv(rows)
        lines = text.strip().split("\n")
        assert lines[0] == "eps,h,M,N"
        eps, h, M, N = lines[1].split(",")
        assert float(eps) == 1e-6
        assert float(h) == rows[0].h  # 17 digits round-trip exactly
        assert int(M) == rows[0].M and int(N) == rows[0].N
