"""Closed-form rate exponents, balanced-lambda exponents, and plateau
detection."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specreg import (
    RateQuery,
    balanced_lambda_exponent,
    krr_rate_exponent,
    minimax_exponent,
    minimax_lower_value,
    phase_index,
    plateau_intervals,
    rate_curve,
    saturation_gap,
    spectral_rate_exponent,
)

INF = math.inf


class TestPhaseIndex:
    def test_examples(self):
        assert phase_index(1, 1.8) == 0
        assert phase_index(1, 2) == 1          # boundary, half-open
        assert phase_index(3, 9) == 2          # 9 in [8, 12)

    def test_boundary_left_closed(self):
        for s in (0.5, 1.0, 2.7):
            for p in range(4):
                g = p * (s + 1)
                if g > 0:
                    assert phase_index(s, g) == p

    @given(s=st.floats(0.01, 10), gamma=st.floats(0.01, 50))
    @settings(max_examples=300, deadline=None)
    def test_defining_inequality(self, s, gamma):
        p = phase_index(s, gamma)
        assert p >= 0
        assert p * (s + 1) <= gamma < (p + 1) * (s + 1)


class TestExponents:
    def test_exact_table(self):
        assert spectral_rate_exponent(RateQuery(1, INF, 1.8)).exponent == pytest.approx(1.0, abs=1e-12)
        assert spectral_rate_exponent(RateQuery(1.9, 1, 1.8)).exponent == pytest.approx(1.4, abs=1e-12)
        assert spectral_rate_exponent(RateQuery(3, 2, 2)).exponent == pytest.approx(2.0, abs=1e-12)

    def test_matched_regime_formula(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            s = rng.uniform(0.05, 5)
            tau = rng.choice([max(1.0, s) + rng.uniform(0, 3), INF])
            gamma = rng.uniform(0.05, 12)
            r = spectral_rate_exponent(RateQuery(s, tau, gamma))
            p = phase_index(s, gamma)
            assert r.exponent == pytest.approx(min(gamma - p, s * (p + 1)),
                                               abs=1e-12)

    def test_krr_examples(self):
        assert krr_rate_exponent(1.9, 1.8).exponent == pytest.approx(1.4, abs=1e-12)
        assert krr_rate_exponent(1, 1).exponent == pytest.approx(1.0, abs=1e-12)
        assert krr_rate_exponent(5, 3).exponent == pytest.approx(2.0, abs=1e-12)

    def test_minimax_examples(self):
        assert minimax_exponent(1.9, 1.8).exponent == pytest.approx(1.8, abs=1e-12)
        assert minimax_exponent(0.01, 0.005).exponent == pytest.approx(0.005, abs=1e-12)
        assert minimax_exponent(1, 2).exponent == pytest.approx(1.0, abs=1e-12)
        assert minimax_exponent(1, 2).p == 1

    def test_tau_one_identity_with_krr(self):
        rng = np.random.default_rng(1)
        for _ in range(2000):
            s = rng.uniform(1.0, 6.0)
            gamma = rng.uniform(0.05, 10.0)
            a = spectral_rate_exponent(RateQuery(s, 1.0, gamma)).exponent
            b = krr_rate_exponent(s, gamma).exponent
            assert abs(a - b) <= 1e-12

    def test_monotone_in_tau(self):
        rng = np.random.default_rng(2)
        for _ in range(300):
            s = rng.uniform(0.05, 6)
            gamma = rng.uniform(0.05, 10)
            vals = [spectral_rate_exponent(RateQuery(s, t, gamma)).exponent
                    for t in (1, 2, 4, 8, INF)]
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_minimax_dominates(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            s = rng.uniform(0.05, 6)
            tau = rng.choice([1.0, 2.0, 4.0, INF])
            gamma = rng.uniform(0.05, 10)
            gap = saturation_gap(s, tau, gamma)
            assert gap >= -1e-12
            if s <= tau:
                assert gap == pytest.approx(0.0, abs=1e-12)

    def test_saturation_gap_examples(self):
        assert saturation_gap(1.9, 1, 1.8) == pytest.approx(0.4, abs=1e-12)
        assert saturation_gap(3, 2, 3) == pytest.approx(1 / 3, abs=1e-12)
        r = spectral_rate_exponent(RateQuery(3, 2, 3))
        assert r.exponent == pytest.approx(8 / 3, abs=1e-12)

    def test_log_factor_annotation(self):
        r = spectral_rate_exponent(RateQuery(1, INF, 1.8))
        assert "(ln d)^2" in r.log_factor_note
        r2 = spectral_rate_exponent(RateQuery(1, INF, 2.5))
        assert r2.log_factor_note == "poly(ln d)"

    def test_invalid_query(self):
        with pytest.raises(ValueError):
            RateQuery(-1, 1, 1)
        with pytest.raises(ValueError):
            RateQuery(1, 0.5, 1)


class TestMinimaxLowerValue:
    def test_explicit_value(self):
        # s=1, gamma=0.8 lies in the explicit-constant range (0, 1];
        # ln d = e, ln ln d = 1 at d = e^e
        d = math.exp(math.e)
        v = minimax_lower_value(1, 0.8, d)
        assert v.exact
        expect = 1.0 / (50 * 0.8 * math.e ** 2) * d ** (-0.8)
        assert v.value == pytest.approx(expect, rel=1e-12)

    def test_boundary_excluded(self):
        # gamma exactly p(s+1) falls outside the explicit-constant range
        v = minimax_lower_value(1, 2.0, 10)
        assert v.value is None and not v.exact

    def test_case_selection(self):
        # s=1, gamma=1.9 > p + ps + s = 1 -> exponent-only branch
        v = minimax_lower_value(1, 1.9, 10)
        assert not v.exact
        assert v.exponent == pytest.approx(1.0, abs=1e-12)

    def test_small_d_rejected(self):
        with pytest.raises(ValueError):
            minimax_lower_value(1, 1.5, 2)


class TestBalancedLambda:
    def test_saturated_case_krr(self):
        ell, case = balanced_lambda_exponent(1.9, 1, 1.8)
        assert ell == pytest.approx(0.7, abs=1e-12)
        assert "saturated" in case

    def test_matched_small_gamma_gf(self):
        ell, case = balanced_lambda_exponent(1.9, INF, 1.8)
        assert ell == pytest.approx(0.5, abs=1e-12)
        assert "matched" in case

    def test_matched_phase_one(self):
        ell, _ = balanced_lambda_exponent(1, INF, 3)
        assert ell == pytest.approx(1.5, abs=1e-12)

    def test_large_s_substitutes_two_tau(self):
        ell_a, case = balanced_lambda_exponent(5, 2, 1.8)
        ell_b, _ = balanced_lambda_exponent(4, 2, 1.8)
        assert ell_a == pytest.approx(ell_b, abs=1e-12)
        assert "s>2tau" in case

    @given(s=st.floats(0.05, 6), gamma=st.floats(0.05, 10),
           tau=st.sampled_from([1.0, 2.0, 4.0, INF]))
    @settings(max_examples=300, deadline=None)
    def test_always_defined_and_positive(self, s, gamma, tau):
        ell, case = balanced_lambda_exponent(s, tau, gamma)
        assert np.isfinite(ell) and ell > 0
        assert isinstance(case, str)


class TestPlateauAndCurve:
    def test_plateau_examples(self):
        assert plateau_intervals(1, 2, 0)[0] == pytest.approx((1.0, 2.0))
        assert plateau_intervals(1, 1, 1)[1] == pytest.approx((3.0, 4.0))
        assert plateau_intervals(5, 2, 3) == []

    def test_rate_constant_on_plateaus(self):
        for s, tau in ((1, 2), (1, 1), (1.5, INF), (1.9, 1)):
            for lo, hi in plateau_intervals(s, tau, 2):
                gs = np.linspace(lo, hi - 1e-9, 25)
                vals = [spectral_rate_exponent(RateQuery(s, tau, g)).exponent
                        for g in gs]
                assert max(vals) - min(vals) <= 1e-9

    def test_curve_examples(self):
        rows = rate_curve(1, 2, [0.5, 1.0, 1.5])
        np.testing.assert_allclose([r["r_spectral"] for r in rows],
                                   [0.5, 1.0, 1.0], atol=1e-12)
        rows = rate_curve(0.01, 2, [0.02])
        assert rows[0]["r_spectral"] == pytest.approx(0.01, abs=1e-14)
        rows = rate_curve(3, 2, [2.0])
        assert rows[0]["r_spectral"] == pytest.approx(2.0, abs=1e-12)
        assert rows[0]["r_minimax"] == pytest.approx(2.0, abs=1e-12)

    def test_curve_continuity(self):
        for s, tau in ((1, 2), (1.9, 1), (0.5, INF)):
            grid = np.linspace(0.01, 8, 4001)
            r = [row["r_spectral"] for row in rate_curve(s, tau, grid)]
            assert np.max(np.abs(np.diff(r))) < 0.02

    def test_curve_requires_sorted_grid(self):
        with pytest.raises(ValueError):
            rate_curve(1, 2, [1.0, 0.5])

    def test_side_condition_warning(self):
        # s <= 1/(2 tau) and gamma below the alternative threshold
        r = spectral_rate_exponent(RateQuery(0.1, 1.0, 0.05))
        assert r.warnings
