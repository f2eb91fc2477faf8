"""Special-function identities, frozen high-precision values, domain checks.

Reference values were computed beforehand with a 50-digit mpmath session
and frozen here; the implementation under test never sees that oracle.
"""

import math

import numpy as np
import pytest

from expsumkit import specfun

SQRT_PI = 1.7724538509055160273

# 50-digit mpmath references.
GAMMA_3_4 = 1.2254167024651776451
ARG_GAMMA_HALF_1 = -0.95500772434256910956  # arg Gamma(0.5 + 1.0i)
ABS_GAMMA_HALF_1 = 0.52059096361675194553
ARG_GAMMA_34_6 = 5.1449927130171563805  # arg Gamma(0.75 + 6i), unwrapped
ABS_GAMMA_34_25 = 0.062022127849630665029  # |Gamma(0.75 + 2.5i)|
UPPER_34_20 = 9.6316347768358606206e-10
LOWER_34_1E6 = 4.2163684065426082583e-05
UPPER_54_35 = 0.043809699544078214331  # Gamma(1.25, 3.5)
LOG_UPPER_34_200 = -201.325822387890952


class TestGamma:
    def test_one(self):
        assert specfun.gamma(1.0) == pytest.approx(1.0, rel=1e-15)

    def test_half_is_sqrt_pi(self):
        assert specfun.gamma(0.5) == pytest.approx(SQRT_PI, rel=1e-14)

    def test_three_quarters_frozen(self):
        assert specfun.gamma(0.75) == pytest.approx(GAMMA_3_4, rel=1e-13)

    @pytest.mark.parametrize("beta", [-1.0, 0.0])
    def test_domain(self, beta):
        with pytest.raises(ValueError):
            specfun.gamma(beta)

    def test_recurrence(self):
        for beta in np.linspace(0.05, 9.0, 60):
            assert specfun.gamma(beta + 1.0) == pytest.approx(
                beta * specfun.gamma(beta), rel=1e-13
            )


class TestAbsGammaComplex:
    def test_reduces_to_real(self):
        assert specfun.abs_gamma_complex(0.5, 0.0) == pytest.approx(
            SQRT_PI, rel=1e-13
        )

    def test_frozen_value(self):
        assert specfun.abs_gamma_complex(0.75, 2.5) == pytest.approx(
            ABS_GAMMA_34_25, rel=1e-10
        )

    def test_half_line_ratio(self):
        # R(3) = |Gamma(1/2 + 6 pi i)| / Gamma(1/2) down at the 1e-13 scale.
        r3 = specfun.abs_gamma_complex(0.5, 6.0 * math.pi) / specfun.gamma(0.5)
        assert r3 == pytest.approx(1.95692e-13, rel=1e-5)

    def test_cosh_identity(self):
        # |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
        for y in np.logspace(-2, math.log10(60.0), 80):
            lhs = specfun.abs_gamma_complex(0.5, y) ** 2 * math.cosh(math.pi * y)
            assert lhs == pytest.approx(math.pi, rel=1e-9)

    def test_even_in_y(self):
        for y in (0.3, 1.7, 12.0):
            assert specfun.abs_gamma_complex(1.3, y) == specfun.abs_gamma_complex(
                1.3, -y
            )

    def test_decay_bound(self):
        # Optimal rotated-contour bound on the modulus ratio.
        for beta in (0.25, 0.75, 1.5):
            g = specfun.gamma(beta)
            for xi in (0.5, 1.0, 2.0, 4.0):
                r = 2.0 * math.pi * xi
                bound = (1.0 + (r / beta) ** 2) ** (beta / 2.0) * math.exp(
                    -r * math.atan(r / beta)
                )
                ratio = specfun.abs_gamma_complex(beta, r) / g
                assert ratio <= bound * (1.0 + 1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.abs_gamma_complex(0.0, 1.0)


class TestArgGammaComplex:
    def test_zero_at_origin(self):
        assert specfun.arg_gamma_complex(0.75, 0.0) == 0.0

    def test_odd_in_y(self):
        for beta in (0.5, 1.25):
            for y in (0.2, 1.0, 8.0):
                assert specfun.arg_gamma_complex(beta, -y) == pytest.approx(
                    -specfun.arg_gamma_complex(beta, y), rel=1e-14
                )

    def test_frozen_value(self):
        assert specfun.arg_gamma_complex(0.5, 1.0) == pytest.approx(
            ARG_GAMMA_HALF_1, rel=1e-12
        )

    def test_unwrapped_beyond_pi(self):
        # The continuous branch exceeds pi well before y = 6.
        assert specfun.arg_gamma_complex(0.75, 6.0) == pytest.approx(
            ARG_GAMMA_34_6, rel=1e-12
        )

    def test_continuity_in_y(self):
        ys = np.linspace(0.0, 40.0, 4001)
        phi = np.array([specfun.arg_gamma_complex(0.6, y) for y in ys])
        assert np.abs(np.diff(phi)).max() < 0.1  # no 2 pi jumps

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.arg_gamma_complex(-0.5, 1.0)


class TestUpperIncGamma:
    def test_beta_one_closed_form(self):
        for q in (0.1, 1.0, 5.0, 30.0):
            assert specfun.upper_inc_gamma(1.0, q) == pytest.approx(
                math.exp(-q), rel=1e-13
            )

    def test_q_zero_full_integral(self):
        for beta in (0.3, 1.0, 4.2):
            assert specfun.upper_inc_gamma(beta, 0.0) == specfun.gamma(beta)

    def test_frozen_values(self):
        assert specfun.upper_inc_gamma(0.75, 20.0) == pytest.approx(
            UPPER_34_20, rel=1e-12
        )
        assert specfun.upper_inc_gamma(1.25, 3.5) == pytest.approx(
            UPPER_54_35, rel=1e-12
        )

    def test_asymptotic_ratio(self):
        # Gamma(beta, q) ~ q^(beta-1) e^-q; the ratio approaches 1 from one side.
        beta = 0.75
        devs = []
        for q in (20.0, 40.0, 80.0):
            ratio = specfun.upper_inc_gamma(beta, q) / (
                q ** (beta - 1.0) * math.exp(-q)
            )
            devs.append(abs(ratio - 1.0))
            assert abs(ratio - 1.0) < 2.0 / q
        assert devs[2] < devs[1] < devs[0]

    def test_strictly_decreasing(self):
        qs = np.linspace(0.0, 12.0, 40)
        vals = [specfun.upper_inc_gamma(0.6, q) for q in qs]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_underflow_flagged(self):
        with pytest.warns(specfun.UnderflowWarning):
            assert specfun.upper_inc_gamma(0.75, 800.0) == 0.0

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.upper_inc_gamma(0.0, 1.0)
        with pytest.raises(ValueError):
            specfun.upper_inc_gamma(1.0, -1.0)


class TestLowerIncGamma:
    def test_q_zero(self):
        assert specfun.lower_inc_gamma(0.9, 0.0) == 0.0

    def test_beta_one_closed_form(self):
        for q in (1e-8, 0.5, 3.0):
            assert specfun.lower_inc_gamma(1.0, q) == pytest.approx(
                -math.expm1(-q), rel=1e-13
            )

    def test_frozen_small_q(self):
        assert specfun.lower_inc_gamma(0.75, 1e-6) == pytest.approx(
            LOWER_34_1E6, rel=1e-12
        )

    def test_small_q_power_law(self):
        beta, q = 0.75, 1e-6
        assert specfun.lower_inc_gamma(beta, q) == pytest.approx(
            q**beta / beta, rel=1e-5
        )

    def test_partition(self):
        for beta in (0.2, 0.75, 2.0, 5.0):
            g = specfun.gamma(beta)
            for q in (0.0, 1e-4, 0.3, 2.0, 10.0, 100.0):
                total = specfun.upper_inc_gamma(beta, q) + specfun.lower_inc_gamma(
                    beta, q
                )
                assert total == pytest.approx(g, rel=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.lower_inc_gamma(-2.0, 1.0)


class TestLogUpperIncGamma:
    def test_matches_plain_value(self):
        for beta in (0.4, 1.0, 3.5):
            for q in (0.0, 0.2, 2.0, 8.0, 50.0):
                expected = specfun.upper_inc_gamma(beta, q)
                assert math.exp(
                    specfun.log_upper_inc_gamma(beta, q)
                ) == pytest.approx(expected, rel=1e-12)

    def test_frozen_beyond_underflow(self):
        assert specfun.log_upper_inc_gamma(0.75, 200.0) == pytest.approx(
            LOG_UPPER_34_200, rel=1e-13
        )

    def test_deep_tail_is_finite(self):
        # The plain value is 0.0 here; the log form keeps resolving it.
        val = specfun.log_upper_inc_gamma(0.5, 2000.0)
        assert math.isfinite(val)
        assert val == pytest.approx(-2000.0 - 0.5 * math.log(2000.0), rel=1e-3)
