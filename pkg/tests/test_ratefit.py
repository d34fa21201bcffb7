"""Log-log rate fits, coefficient extraction, Richardson extrapolation."""

import math

import pytest

from robinlab import ratefit

EPS_GRID = [0.2, 0.1, 0.05, 0.025, 0.0125]


class TestFitLoglog:
    def test_exact_power_law(self):
        pts = [(e, 3.0 * e ** 2) for e in EPS_GRID]
        fit = ratefit.fit_loglog(pts)
        assert fit.p == pytest.approx(2.0, abs=1e-12)
        assert fit.C == pytest.approx(3.0, rel=1e-12)
        assert fit.r2 == pytest.approx(1.0, abs=1e-12)

    def test_negative_coefficient(self):
        pts = [(e, -math.pi * e ** 3) for e in EPS_GRID]
        fit = ratefit.fit_loglog(pts)
        assert fit.p == pytest.approx(3.0, abs=1e-12)
        assert fit.C == pytest.approx(-math.pi, rel=1e-12)

    def test_two_term_data(self):
        # the positive cubic correction tilts the fitted slope slightly
        # above 2 (d log v / d log e = 2 + (e/3)/(1 + e/3) > 2); the raw
        # intercept inherits that bias, which leading_coefficient removes
        pts = [(e, 3.0 * e ** 2 + e ** 3) for e in EPS_GRID]
        fit = ratefit.fit_loglog(pts)
        assert abs(fit.p - 2.0) < 0.1
        assert abs(fit.C - 3.0) / 3.0 < 0.10
        assert ratefit.leading_coefficient(pts, 2.0) == pytest.approx(3.0,
                                                                      rel=1e-12)

    def test_sign_mixed_rejected(self):
        pts = [(0.2, 1.0), (0.1, -0.5), (0.05, 0.2)]
        with pytest.raises(ValueError):
            ratefit.fit_loglog(pts)

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            ratefit.fit_loglog([(0.1, 1.0), (0.05, 0.5)])

    def test_floor_filters_noise(self):
        pts = [(e, 2.0 * e) for e in EPS_GRID] + [(0.001, 1e-16)]
        fit = ratefit.fit_loglog(pts)
        assert fit.n_used == len(EPS_GRID)
        assert fit.p == pytest.approx(1.0, abs=1e-12)

    def test_scale_equivariance(self):
        pts = [(e, 2.7 * e ** 1.5 * (1 + 0.2 * e)) for e in EPS_GRID]
        f1 = ratefit.fit_loglog(pts)
        f2 = ratefit.fit_loglog([(e, 10.0 * v) for e, v in pts])
        assert f2.p == pytest.approx(f1.p, abs=1e-12)
        assert f2.C == pytest.approx(10.0 * f1.C, rel=1e-12)

    def test_window_shrinking_improves_two_term_fit(self):
        # on two-term data, restricting to smaller eps never worsens the
        # exponent estimate; seeded loop over coefficient combinations
        import numpy as np

        rng = np.random.default_rng(13)
        grid = [0.4, 0.2, 0.1, 0.05, 0.025, 0.0125]
        for _ in range(25):
            C = float(rng.uniform(0.5, 5.0))
            g = float(rng.uniform(-0.4, 4.0))
            p = float(rng.integers(1, 4))
            pts = [(e, C * e ** p * (1.0 + g * e)) for e in grid]
            full = ratefit.fit_loglog(pts)
            tail = ratefit.fit_loglog(pts, window=range(3, 6))
            assert abs(tail.p - p) <= abs(full.p - p) + 1e-12

    def test_explicit_window(self):
        pts = [(e, e ** 2) for e in EPS_GRID]
        fit = ratefit.fit_loglog(pts, window=[2, 3, 4])
        assert fit.window == (2, 3, 4) and fit.n_used == 3


class TestTailAndCoefficient:
    def test_tail_fit_two_points(self):
        pts = [(e, 5.0 * e ** 2) for e in EPS_GRID]
        fit = ratefit.tail_fit(pts)
        assert fit.p == pytest.approx(2.0, abs=1e-12)
        assert fit.C == pytest.approx(5.0, rel=1e-12)

    def test_leading_coefficient_removes_linear_correction(self):
        C, g = -4.0, 2.5
        pts = [(e, (C + g * e) * e ** 3) for e in EPS_GRID]
        est = ratefit.leading_coefficient(pts, 3.0)
        assert est == pytest.approx(C, rel=1e-12)

    def test_leading_coefficient_beats_tail_intercept(self):
        pts = [(e, 3.0 * e ** 2 * (1.0 + 1.5 * e)) for e in EPS_GRID]
        tail_C = ratefit.tail_fit(pts).C
        extrap_C = ratefit.leading_coefficient(pts, 2.0)
        assert abs(extrap_C - 3.0) < abs(tail_C - 3.0)

    def test_leading_coefficient_general_ratio(self):
        # the two-point elimination is exact for any grid ratio
        pts = [(e, (2.0 - 0.7 * e) * e ** 2) for e in (0.3, 0.07, 0.02)]
        assert ratefit.leading_coefficient(pts, 2.0) == pytest.approx(2.0,
                                                                      rel=1e-12)


class TestRichardson:
    def test_pure_second_order(self):
        L, c = 7.0, 3.0
        vals = [L + c * h * h for h in (0.2, 0.1)]
        out = ratefit.richardson(vals)
        assert out.value == pytest.approx(L, rel=1e-12)

    def test_observed_order(self):
        L, c, d = 2.0, 1.0, 1.0
        vals = [L + c * h ** 2 + d * h ** 4 for h in (0.2, 0.1, 0.05)]
        out = ratefit.richardson(vals)
        assert 1.9 < out.observed_order < 2.1
        assert out.value == pytest.approx(L, abs=1e-4)

    def test_constant_sequence(self):
        out = ratefit.richardson([4.2, 4.2, 4.2])
        assert out.value == 4.2 and out.error_estimate == 0.0

    def test_non_monotone_degrades(self):
        out = ratefit.richardson([1.0, 0.5, 0.8])
        assert out.degraded and out.value == 0.8

    def test_single_value(self):
        out = ratefit.richardson([1.5])
        assert out.value == 1.5 and out.error_estimate == 0.0
