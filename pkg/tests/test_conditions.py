"""
Unit tests for envelope fitting and the criterion verdicts.

Tables are filled by hand so every verdict below is known in advance.
"""

import json
import math

import pytest
from conftest import requires_kam_criteria


def _table(grad1_by_kappa=None, **overrides):
    """
    Synthetic golden table for kappa 6 (N-tilde 9) and 7 (N-tilde 10).

    grad2 and K1-tilde are set so that their q^{eps/3}-scaled values are flat.
    """
    from kam_criteria.distortion import DistortionTable
    from kam_criteria.number_theory import preset

    q = preset("golden", 30).q

    n_tilde = {6: 9, 7: 10}
    grad1_by_kappa = grad1_by_kappa or {6: 1e-5, 7: 1e-5}
    table = DistortionTable()
    for kappa, nt in n_tilde.items():
        table.put("Lambda_I", kappa, overrides.get("Lambda_I", 1.5), seed=0)
        table.put("Lambda_II", kappa, overrides.get("Lambda_II", {}).get(kappa, 1.2), seed=0)
        table.put("K0tilde_Nbar", kappa, 0.3, seed=0)
        if grad1_by_kappa.get(kappa) is not None:
            table.put("grad1", kappa, grad1_by_kappa[kappa], seed=0, r=nt)
        table.put("grad2", kappa, 1e-4 * q[nt] ** (-0.5 / 3), seed=0, r=nt, s=nt)
        for r in range(6, nt + 1):
            table.put("K1tilde", kappa, 0.01 * q[r] ** (-0.5 / 3), seed=0, r=r)
        table.put("G_modulus", kappa, 0.02, seed=0)
        table.put("k2_ratio", kappa, 0.5, seed=0)
        table.put("averaging_gap_scaled", kappa, 0.1, seed=0)
        table.put("step_ratio_violations", kappa, 1.0 if kappa == 6 else 2.0, seed=0)
        table.put("cocycle_defect", kappa, 1e-15, seed=0)
    return table


@requires_kam_criteria
class TestFitEnvelope:
    """Tests for fit_envelope."""

    def test_bounded(self):
        """Test a flat envelope is bounded and its constant is the maximum."""
        from kam_criteria.conditions import BOUNDED, fit_envelope

        env = fit_envelope("C2", "Lambda_II", {0: {6: 1.2, 7: 1.3}})

        assert env.constant == 1.3
        assert env.verdict == BOUNDED
        assert env.growth == pytest.approx(1.3 / 1.2)

    def test_growth_violated(self):
        """Test growth beyond the limit is a violation."""
        from kam_criteria.conditions import VIOLATED, fit_envelope

        env = fit_envelope("C2", "Lambda_II", {0: {6: 1.0, 7: 5.0}})

        assert env.verdict == VIOLATED
        assert env.growth == pytest.approx(5.0)

    def test_unstable_band(self):
        """Test a wide seed band is inconclusive."""
        from kam_criteria.conditions import INCONCLUSIVE, fit_envelope

        env = fit_envelope("C2", "Lambda_II", {0: {6: 1.0}, 1: {6: 3.0}})

        assert env.band == pytest.approx(3.0)
        assert env.verdict == INCONCLUSIVE
        assert env.seed_constants == {0: 1.0, 1: 3.0}

    def test_no_samples(self):
        """Test an empty envelope is inconclusive."""
        from kam_criteria.conditions import INCONCLUSIVE, fit_envelope

        env = fit_envelope("C0", "grad2", {0: {}})

        assert env.verdict == INCONCLUSIVE
        assert env.reason == "no samples"
        assert math.isnan(env.constant)

    def test_non_finite(self):
        """Test an infinite value is a violation."""
        from kam_criteria.conditions import VIOLATED, fit_envelope

        env = fit_envelope("C3", "K0", {0: {6: 0.1, 7: math.inf}})

        assert env.verdict == VIOLATED

    def test_zero_floor(self):
        """Test vanishing envelopes are bounded and switching on from zero is growth."""
        from kam_criteria.conditions import BOUNDED, VIOLATED, fit_envelope

        assert fit_envelope("C3", "K0", {0: {6: 0.0, 7: 1e-14}}).verdict == BOUNDED
        assert fit_envelope("C3", "K0", {0: {6: 0.0, 7: 1.0}}).verdict == VIOLATED


@requires_kam_criteria
class TestThresholds:
    """Tests for the fixed thresholds and the kappa_0 requirement."""

    def test_golden_thresholds(self):
        """Test the literal R threshold and the recursion factors."""
        from kam_criteria.conditions import Thresholds

        thresholds = Thresholds(eps=0.5, bound=1)

        assert thresholds.r_threshold == pytest.approx(0.5 / 960)
        assert thresholds.recursion_jump == 800.0
        assert thresholds.to_dict()["zero_floor"] == 1e-12

    def test_kappa0_requirement(self):
        """Test the requirement grows with C0 and vanishes with it."""
        from kam_criteria.conditions import Thresholds, kappa0_requirement

        thresholds = Thresholds(eps=0.5, bound=1)

        trivial = kappa0_requirement(thresholds, 0.0, actual=6)
        strict = kappa0_requirement(thresholds, 1.0, actual=6)

        assert trivial.required is None
        assert trivial.satisfied
        assert strict.required > 6
        assert strict.satisfied is False
        assert kappa0_requirement(thresholds, 1.0).satisfied is None


@requires_kam_criteria
class TestEvaluateConditions:
    """Tests for evaluate_conditions on synthetic tables."""

    def test_all_bounded(self, golden):
        """Test a well-behaved table passes every criterion and condition."""
        from kam_criteria.conditions import BOUNDED, evaluate_conditions

        report = evaluate_conditions({0: _table()}, 0.5, golden, kappa0=6)

        assert report.criteria == {1: BOUNDED, 2: BOUNDED, 3: BOUNDED}
        assert report.r_verdict == BOUNDED
        assert report.kappas == [6, 7]
        assert report.holes == []
        assert not report.violated
        assert report.consistent
        for kappa in (6, 7):
            row = report.row(kappa)
            assert (row.R, row.S, row.T) == (True, True, True)
        assert report.row(6).windows.n_tilde == 9
        assert report.recursion_violations == []
        assert report.kappa0.actual == 6

    def test_grad1_threshold_violated(self, golden):
        """Test grad1 above eps / (960 A) violates R."""
        from kam_criteria.conditions import VIOLATED, evaluate_conditions

        report = evaluate_conditions(_table({6: 1e-5, 7: 1.0}), 0.5, golden)

        assert report.r_verdict == VIOLATED
        assert report.violated
        assert report.row(7).R is False
        assert report.row(6).R is True
        assert report.consistent

    def test_missing_grad1(self, golden):
        """Test a missing grad1 leaves R undecided."""
        from kam_criteria.conditions import INCONCLUSIVE, evaluate_conditions

        report = evaluate_conditions(_table({6: 1e-5, 7: None}), 0.5, golden)

        assert report.r_verdict == INCONCLUSIVE
        assert report.row(7).R is None

    def test_lambda_growth(self, golden):
        """Test a growing Lambda_II envelope violates Criterion 2."""
        from kam_criteria.conditions import VIOLATED, evaluate_conditions

        report = evaluate_conditions(_table(Lambda_II={6: 1.0, 7: 10.0}), 0.5, golden)

        assert report.criteria[2] == VIOLATED
        assert report.violated
        assert report.row(6).T is True
        assert report.row(7).T is False
        assert report.implication_violations == [7]
        assert not report.consistent

    def test_anchors(self, golden):
        """Test the R / S / T constants are fitted at the smallest kappa and reported."""
        from kam_criteria.conditions import evaluate_conditions

        report = evaluate_conditions(_table(Lambda_II={6: 1.2, 7: 1.1}), 0.5, golden)
        data = report.to_dict()

        assert report.anchors["C0"] == pytest.approx(1e-4)
        assert report.anchors["C1"] == pytest.approx(0.01)
        assert report.anchors["C2"] == 1.2
        assert report.envelopes["C2"].anchor == 1.2
        assert data["anchors"]["C2"] == 1.2
        assert data["thresholds"]["anchor_tolerance"] == 1e-9

    def test_grad2_growth_breaks_r(self, golden):
        """Test scaled grad2 above the constant fitted at the smallest kappa fails R."""
        from kam_criteria.conditions import BOUNDED, evaluate_conditions

        q = golden.q
        table = _table()
        table.put("grad2", 7, 1.6e-4 * q[10] ** (-0.5 / 3), seed=0, r=10, s=10)

        report = evaluate_conditions(table, 0.5, golden)

        assert report.envelopes["C0"].verdict == BOUNDED
        assert report.row(7).grad2_scaled == pytest.approx(1.6e-4)
        assert report.row(6).R is True
        assert report.row(7).R is False
        assert report.r_verdict == BOUNDED
        assert report.consistent

    def test_s_fails_while_envelope_bounded(self, golden):
        """Test S can fail under a bounded C1 envelope and the implication check fires."""
        from kam_criteria.conditions import BOUNDED, evaluate_conditions

        q = golden.q
        table = _table()
        table.put("K1tilde", 7, 0.015 * q[10] ** (-0.5 / 3), seed=0, r=10)

        report = evaluate_conditions(table, 0.5, golden)

        assert report.envelopes["C1"].verdict == BOUNDED
        assert report.envelopes["C1"].growth == pytest.approx(1.5)
        assert (report.row(7).R, report.row(7).S, report.row(7).T) == (True, False, True)
        assert report.row(6).S is True
        assert report.implication_violations == [7]
        assert not report.consistent

    def test_reduction_ratios(self, golden):
        """Test Lambda_II is compared with exp(K0-tilde) (1 + scaled gap)."""
        from kam_criteria.conditions import evaluate_conditions

        report = evaluate_conditions(_table(Lambda_II={6: 1.2, 7: 2.0}), 0.5, golden)

        assert report.reduction_ratios[6] == pytest.approx(1.2 / (math.exp(0.3) * 1.1))
        assert report.reduction_ratios[6] < 1.0
        assert report.reduction_ratios[7] > 1.0

    def test_holes(self, golden):
        """Test requested kappas without data are reported, not filled in."""
        from kam_criteria.conditions import evaluate_conditions

        report = evaluate_conditions(_table(), 0.5, golden, kappa_range=(6, 8))

        assert report.holes == [8]
        assert report.partial
        assert report.row(8) is None

    def test_seed_tables(self, golden):
        """Test per-seed tables are merged and their spread recorded."""
        from kam_criteria.conditions import evaluate_conditions

        report = evaluate_conditions(
            {0: _table(), 1: _table(Lambda_II={6: 1.25, 7: 1.25})}, 0.5, golden
        )

        assert report.envelopes["C2"].constant == 1.25
        assert report.envelopes["C2"].seed_constants == {0: 1.2, 1: 1.25}

    def test_monitors(self, golden):
        """Test violation counts are summed and defects maximised."""
        from kam_criteria.conditions import evaluate_conditions

        report = evaluate_conditions(_table(), 0.5, golden)

        assert report.monitors["step_ratio_violations"] == 3.0
        assert report.monitors["cocycle_defect"] == 1e-15

    def test_monotone_monitor(self, golden):
        """Test grad1 decreasing in kappa at fixed r is flagged."""
        from kam_criteria.conditions import evaluate_conditions

        table = _table()
        table.put("grad1", 6, 3e-4, seed=0, r=8)
        table.put("grad1", 7, 1e-4, seed=0, r=8)

        report = evaluate_conditions(table, 0.5, golden)

        assert report.monotone_violations == [("grad1", 6, 8, None, "kappa")]

    def test_monotone_monitor_grad2(self, golden):
        """Test grad2 decreasing in kappa and grad1 decreasing in r are flagged."""
        from kam_criteria.conditions import evaluate_conditions

        table = _table()
        table.put("grad2", 6, 3e-4, seed=0, r=9, s=8)
        table.put("grad2", 7, 1e-4, seed=0, r=9, s=8)
        table.put("grad1", 7, 2e-4, seed=0, r=5)
        table.put("grad1", 7, 1e-4, seed=0, r=6)

        report = evaluate_conditions(table, 0.5, golden)

        assert report.monotone_violations == [
            ("grad1", 7, 5, None, "r"),
            ("grad2", 6, 9, 8, "kappa"),
        ]
        assert report.to_dict()["monotone_violations"][1] == ["grad2", 6, 9, 8, "kappa"]

    def test_trends(self, golden):
        """Test a kappa1 series decaying in r is reported as decaying."""
        from kam_criteria.conditions import evaluate_conditions

        table = _table()
        for r in range(0, 10):
            table.put("kappa1", 6, 0.9**r, seed=0, r=r, s=9)

        report = evaluate_conditions(table, 0.5, golden)

        trend = report.trends["kappa1@6"]
        assert trend.decays
        assert trend.slope == pytest.approx(math.log(0.9))
        assert trend.points == 10

    def test_report_serialisable(self, golden):
        """Test non-finite values become null in the report document."""
        from kam_criteria.conditions import VIOLATED, evaluate_conditions

        report = evaluate_conditions(_table(Lambda_I=math.inf), 0.5, golden)
        data = json.loads(json.dumps(report.to_dict(), allow_nan=False))

        assert report.criteria[1] == VIOLATED
        assert data["envelopes"]["Lambda_I"]["constant"] is None
        assert data["criteria"]["1"] == VIOLATED

    def test_invalid_input(self, golden):
        """Test eps and the table set are validated."""
        from kam_criteria.conditions import evaluate_conditions
        from kam_criteria.distortion import DistortionTable
        from kam_criteria.errors import InvalidInputError

        with pytest.raises(InvalidInputError):
            evaluate_conditions(_table(), 1.0, golden)
        with pytest.raises(InvalidInputError):
            evaluate_conditions({}, 0.5, golden)
        with pytest.raises(InvalidInputError):
            evaluate_conditions(DistortionTable(), 0.5, golden)
