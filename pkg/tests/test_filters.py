"""Filter functions phi/psi, qualification, and the axiom verifier."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specreg import FilterSpec, check_filter_axioms, phi_lambda, psi_lambda, qualification


class TestClosedForms:
    def test_krr_values(self):
        f = FilterSpec("krr", 0.5)
        assert phi_lambda(f, 0.5) == pytest.approx(1.0, abs=1e-15)
        assert psi_lambda(f, 0.5) == pytest.approx(0.5, abs=1e-15)

    def test_gradient_flow_limit_at_zero(self):
        f = FilterSpec("gradient_flow", 0.1)
        assert f.time == pytest.approx(10.0)
        assert phi_lambda(f, 0.0) == pytest.approx(10.0, abs=1e-12)
        assert psi_lambda(f, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_iterated_ridge_value(self):
        f = FilterSpec("iterated_ridge", 0.5, q=2)
        assert phi_lambda(f, 0.5) == pytest.approx(1.5, abs=1e-14)

    def test_iterated_ridge_limit_at_zero(self):
        f = FilterSpec("iterated_ridge", 0.25, q=3)
        assert phi_lambda(f, 0.0) == pytest.approx(3 / 0.25, rel=1e-12)

    def test_gradient_descent_power(self):
        f = FilterSpec("gradient_descent", 0.1, eta=0.1)
        assert f.time == pytest.approx(100.0)
        assert psi_lambda(f, 1.0) == pytest.approx(0.9 ** 100, rel=1e-12)
        assert phi_lambda(f, 0.0) == pytest.approx(0.1 * 100, rel=1e-12)

    def test_gradient_descent_domain(self):
        f = FilterSpec("gradient_descent", 0.1, eta=0.1)
        with pytest.raises(ValueError):
            phi_lambda(f, 10.0)

    def test_qualification(self):
        assert qualification(FilterSpec("krr", 0.1)) == 1.0
        assert qualification(FilterSpec("iterated_ridge", 0.1, q=4)) == 4.0
        assert math.isinf(qualification(FilterSpec("gradient_flow", 0.1)))
        assert math.isinf(qualification(FilterSpec("gradient_descent", 0.1)))

    def test_lambda_validation_and_flag(self):
        with pytest.raises(ValueError):
            FilterSpec("krr", 0.0)
        with pytest.raises(ValueError):
            FilterSpec("nope", 0.1)
        assert not FilterSpec("krr", 0.5).outside_nominal_range
        assert FilterSpec("krr", 2.0).outside_nominal_range


class TestIdentities:
    families = [("krr", {}), ("iterated_ridge", {"q": 3}),
                ("gradient_flow", {}), ("gradient_descent", {"eta": 0.1})]

    @pytest.mark.parametrize("family,kw", families)
    def test_psi_plus_zphi_is_one(self, family, kw):
        z = np.geomspace(1e-10, 1.0, 300)
        for lam in (0.01, 0.1, 0.5):
            f = FilterSpec(family, lam, **kw)
            total = psi_lambda(f, z) + z * phi_lambda(f, z)
            np.testing.assert_allclose(total, 1.0, atol=1e-12)

    def test_iterated_ridge_q1_is_krr(self):
        z = np.geomspace(1e-9, 1.0, 200)
        for lam in (0.01, 0.3, 0.9):
            a = phi_lambda(FilterSpec("iterated_ridge", lam, q=1), z)
            b = phi_lambda(FilterSpec("krr", lam), z)
            # the expm1/log1p path agrees with the direct quotient to ~1e-8
            np.testing.assert_allclose(a, b, atol=1e-12, rtol=1e-7)

    def test_gd_converges_to_gf_linearly_in_eta(self):
        z = np.geomspace(1e-6, 1.0, 100)
        lam = 0.1
        gf = np.asarray(phi_lambda(FilterSpec("gradient_flow", lam), z))
        errs = []
        for eta in (1e-3, 1e-4):
            gd = np.asarray(phi_lambda(FilterSpec("gradient_descent", lam,
                                                  eta=eta), z))
            errs.append(np.max(np.abs(gd - gf)))
        assert errs[1] < 1e-2
        assert errs[1] < errs[0]
        assert errs[0] / errs[1] == pytest.approx(10.0, rel=0.3)

    @pytest.mark.parametrize("family,kw", families)
    def test_zphi_monotone_in_lambda(self, family, kw):
        z = np.geomspace(1e-6, 1.0, 50)
        lams = np.geomspace(1e-3, 0.9, 50)
        prev = None
        for lam in lams:
            cur = z * np.asarray(phi_lambda(FilterSpec(family, lam, **kw), z))
            if prev is not None:
                assert np.all(cur <= prev + 1e-12)
            prev = cur

    @given(lam=st.floats(1e-4, 0.99), z=st.floats(0.0, 1.0))
    @settings(max_examples=200, deadline=None)
    def test_zphi_in_unit_interval_all_families(self, lam, z):
        for family, kw in self.families:
            f = FilterSpec(family, lam, **kw)
            v = z * phi_lambda(f, z)
            assert -1e-12 <= v <= 1.0 + 1e-12


class TestAxiomChecker:
    def test_krr_passes_with_expected_c5(self):
        rep = check_filter_axioms("krr")
        assert rep.passed and not rep.violations
        # min over z <= lambda of lambda/(z+lambda) -> 1/2 at z = lambda;
        # the default grid need not contain z = lambda exactly
        assert rep.constants["c5:min psi (z<=lam)"] == pytest.approx(0.5, rel=0.01)

    def test_iterated_ridge_q2_c7(self):
        rep = check_filter_axioms("iterated_ridge", q=2)
        assert rep.passed
        # min over z > lambda of (z/(z+lambda))^{2q} -> 2^{-4} at z -> lambda+
        assert rep.constants["c7:min (z/lam)^2tau psi^2 (z>lam)"] == pytest.approx(
            0.0625, rel=0.05)

    def test_gradient_flow_item3_skipped(self):
        rep = check_filter_axioms("gradient_flow")
        assert rep.passed
        assert rep.skipped == ["axiom 3"]
        assert any("not applicable" in line for line in rep.summary_lines())

    @pytest.mark.parametrize("family,kw", [
        ("krr", {}), ("iterated_ridge", {"q": 2}), ("iterated_ridge", {"q": 3}),
        ("iterated_ridge", {"q": 4}), ("gradient_flow", {}),
        ("gradient_descent", {"eta": 0.1})])
    def test_all_families_pass_default_grids(self, family, kw):
        rep = check_filter_axioms(family, **kw)
        assert rep.passed, rep.summary_lines()
        assert all(np.isfinite(v) for v in rep.constants.values())

    def test_negative_z_grid_rejected(self):
        with pytest.raises(ValueError):
            check_filter_axioms("krr", z_grid=np.array([-1.0, 0.5]))
