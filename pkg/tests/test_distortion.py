"""
Unit tests for the distortion cocycles, sup estimators and DistortionTable.
"""

import math

import pytest
from conftest import requires_kam_criteria


@requires_kam_criteria
class TestCocycles:
    """Tests for K0, K1 and the difference quotients."""

    def test_k0_identity(self, golden_window):
        """Test K0(0 | v) vanishes."""
        from kam_criteria.chords import make_chord
        from kam_criteria.distortion import K0

        v = make_chord(golden_window, 100, 155)

        assert K0(0, v) == 0.0

    def test_k0_cocycle(self, golden_window):
        """Test K0(j + k | v) = K0(k | F^j v) + K0(j | v)."""
        from kam_criteria.chords import iterate_chord, make_chord
        from kam_criteria.distortion import K0

        v = make_chord(golden_window, 500, 555)
        for j, k in ((3, 7), (-13, 21), (89, -34)):
            lhs = K0(j + k, v)
            rhs = K0(k, iterate_chord(v, j)) + K0(j, v)
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_k0_rigid(self, rigid_window):
        """Test chord lengths are invariant under the rigid rotation."""
        from kam_criteria.chords import make_chord
        from kam_criteria.distortion import K0

        v = make_chord(rigid_window, 10, 65)

        for j in (1, 55, -377, 1597):
            assert K0(j, v) == pytest.approx(0.0, abs=1e-12)

    def test_k0_outside_window(self, golden_window):
        """Test iterates leaving the window are refused."""
        from kam_criteria.chords import make_chord
        from kam_criteria.distortion import K0
        from kam_criteria.errors import InvalidInputError

        v = make_chord(golden_window, 0, 55)

        with pytest.raises(InvalidInputError):
            K0(10**6, v)

    def test_grad1_of_pairs(self, rigid_window):
        """Test slopes vanish on the rigid rotation, so grad1 does too."""
        from kam_criteria.chords import enumerate_pairs
        from kam_criteria.distortion import E1, K1, grad1

        pairs = enumerate_pairs(rigid_window, 6, 9, budget=4, seed=0)

        for pair in pairs:
            assert grad1(pair) == 0.0
            assert K1(1, pair) == pytest.approx(0.0, abs=1e-12)
            assert E1(1, pair) == pytest.approx(0.0, abs=1e-10)


@requires_kam_criteria
class TestSupEstimates:
    """Tests for the sampled sup estimators."""

    def test_unreliable_flag(self):
        """Test a sup is unreliable when more than 10% of iterates are dropped."""
        from kam_criteria.distortion import SupEstimate

        assert SupEstimate(1.0, 4, requested=100, dropped=11).unreliable
        assert not SupEstimate(1.0, 4, requested=100, dropped=10).unreliable
        assert not SupEstimate(1.0, 4).unreliable

    def test_lambda_rigid(self, rigid_window):
        """Test Lambda_I and Lambda_II sit just above one without a potential."""
        from kam_criteria.distortion import lambda_sups

        lam_i, lam_ii = lambda_sups(rigid_window, 5, budget=16, seed=0)

        assert 1.0 <= lam_ii.value <= 1.01
        assert lam_ii.value <= lam_i.value <= 1.01
        assert lam_ii.samples <= lam_i.samples

    def test_k0_sups_rigid(self, rigid_window):
        """Test K0 sups vanish on the rigid rotation."""
        from kam_criteria.distortion import K0_sups

        k0, k0_tilde = K0_sups(rigid_window, 5, 14, budget=8, seed=0)

        assert k0.value == pytest.approx(0.0, abs=1e-12)
        assert k0_tilde.value == pytest.approx(0.0, abs=1e-12)
        assert k0_tilde.requested == 8 * (2 * 610 + 1)
        assert not k0_tilde.unreliable

    def test_averaging(self, golden_window):
        """Test the orbit mean of Theta approaches lambda within 1/q_N."""
        from kam_criteria.chords import enumerate_type2
        from kam_criteria.distortion import averaging_check

        for v in enumerate_type2(golden_window, 5, budget=4, seed=0):
            result = averaging_check(golden_window, v, 14)
            assert not result.skipped
            assert result.holds

    def test_kappa1_index_order(self, golden_window):
        """Test kappa1 needs r <= R <= N-tilde."""
        from kam_criteria.distortion import kappa1
        from kam_criteria.errors import InvalidInputError

        with pytest.raises(InvalidInputError):
            kappa1(golden_window, 9, 8, 6, budget=4)


@requires_kam_criteria
class TestTabulate:
    """Tests for tabulate_kappa."""

    def test_rigid_table(self, rigid_window):
        """Test the unperturbed oracle: distortion vanishes and Lambda is close to one."""
        from kam_criteria.distortion import Budgets, tabulate_kappa

        table = tabulate_kappa(rigid_window, 5, Budgets(8, 4, 2), seed=0)

        assert table.kappas() == [5]
        assert table.get("K0tilde_Nbar", 5) == pytest.approx(0.0, abs=1e-12)
        assert table.get("K0_Nbar", 5) == pytest.approx(0.0, abs=1e-12)
        assert table.get("cocycle_defect", 5) == pytest.approx(0.0, abs=1e-12)
        assert table.get("antisymmetry_defect", 5) == pytest.approx(0.0, abs=1e-12)
        assert 1.0 <= table.get("Lambda_II", 5) <= 1.01
        assert table.get("step_ratio_violations", 5) == 0.0
        for value in table.series("grad1").values():
            assert value == 0.0

    def test_perturbed_identities(self, golden_window):
        """Test the exact identities hold on a perturbed window."""
        from kam_criteria.distortion import Budgets, tabulate_kappa

        table = tabulate_kappa(golden_window, 5, Budgets(8, 4, 2), seed=1)

        assert table.get("cocycle_defect", 5) <= 1e-12
        assert table.get("antisymmetry_defect", 5) <= 1e-12
        assert table.get("averaging_violations", 5) == 0.0
        assert table.get("Lambda_II", 5) <= table.get("Lambda_I", 5)

    def test_full_sample_checks(self, golden_window):
        """Test the per-chord checks run on every sampled chord, not a leading slice."""
        from kam_criteria.distortion import Budgets, tabulate_kappa

        table = tabulate_kappa(golden_window, 5, Budgets(24, 8, 2), seed=0)

        assert table.cell("Lambda_II", 5).samples > 16
        for quantity in (
            "averaging_violations",
            "ratio_bracket_violations",
            "comparison_violations",
            "reduction_violations",
            "slope_violations",
        ):
            assert table.get(quantity, 5) == 0.0
        assert table.get("averaging_gap_scaled", 5) <= 1.0

    def test_pair_bound_and_reduction(self, golden_window):
        """Test no pair sits below 2/q_r and Lambda_II stays within its reduction bound."""
        from kam_criteria.conditions import evaluate_conditions
        from kam_criteria.distortion import Budgets, tabulate_kappa

        table = tabulate_kappa(golden_window, 5, Budgets(24, 8, 2, mixed_fraction=0.0), seed=0)
        report = evaluate_conditions(table, 0.5, golden_window.twist.alpha)

        failures = table.series("bound_failures")
        assert failures
        assert all(value == 0.0 for value in failures.values())
        assert report.monitors["bound_failures"] == 0.0
        assert report.reduction_ratios[5] <= 1.0 + 1e-9

    def test_grad2_cells(self, golden_window):
        """Test grad2 is tabulated only at N-tilde and its lower neighbours."""
        from kam_criteria.distortion import Budgets, grad2_indices, tabulate_kappa

        table = tabulate_kappa(golden_window, 5, Budgets(8, 4, 4), seed=0)
        cells = {(r, s) for (_, r, s) in table.series("grad2")}

        assert cells
        assert cells <= set(grad2_indices(7, 3))

    def test_grad2_indices(self):
        """Test grad2 cells stay at or above 2 gamma0 with s <= r."""
        from kam_criteria.distortion import grad2_indices

        assert grad2_indices(9, 3) == [(9, 9), (9, 8), (8, 8)]
        assert grad2_indices(7, 3) == [(7, 7), (7, 6), (6, 6)]
        assert grad2_indices(6, 3) == [(6, 6)]

    def test_deterministic(self, golden_window):
        """Test identical seeds give identical tables."""
        from kam_criteria.distortion import Budgets, tabulate_kappa

        first = tabulate_kappa(golden_window, 5, Budgets(4, 2, 2), seed=11)
        second = tabulate_kappa(golden_window, 5, Budgets(4, 2, 2), seed=11)

        assert first.to_rows() == second.to_rows()


@requires_kam_criteria
class TestDistortionTable:
    """Tests for the DistortionTable container."""

    def test_put_keeps_maximum(self):
        """Test repeated puts keep the larger value."""
        from kam_criteria.distortion import DistortionTable

        table = DistortionTable()
        table.put("Lambda_II", 6, 1.2, seed=0)
        table.put("Lambda_II", 6, 1.1, seed=1)

        assert table.get("Lambda_II", 6) == 1.2
        assert table.cell("Lambda_II", 6).seed == 0

    def test_merge_is_order_independent(self):
        """Test merging takes cell-wise maxima regardless of order."""
        from kam_criteria.distortion import DistortionTable, SupEstimate

        a = DistortionTable()
        a.put("grad1", 6, 0.1, seed=0, r=9)
        a.put("K0tilde_Nbar", 6, SupEstimate(0.3, 8, requested=100, dropped=20), seed=0)
        b = DistortionTable()
        b.put("grad1", 6, 0.2, seed=1, r=9)
        b.put("K0tilde_Nbar", 7, 0.4, seed=1)

        ab = a.merge(b)
        ba = b.merge(a)

        assert ab.to_rows() == ba.to_rows()
        assert ab.get("grad1", 6, 9) == 0.2
        assert ab.cell("K0tilde_Nbar", 6).unreliable
        assert ab.kappas() == [6, 7]

    def test_tie_prefers_lower_seed(self):
        """Test equal values keep the provenance of the lower seed."""
        from kam_criteria.distortion import Cell

        merged = Cell(1.0, 4, seed=5).merged(Cell(1.0, 8, seed=2))

        assert merged.seed == 2
        assert merged.samples == 8

    def test_rows_round_trip(self):
        """Test to_rows / from_rows preserve every cell."""
        from kam_criteria.distortion import DistortionTable, SupEstimate

        table = DistortionTable()
        table.put("kappa1", 6, SupEstimate(0.25, 4), seed=3, r=2, s=9)
        table.put("Lambda_I", 6, math.pi, seed=3)

        restored = DistortionTable.from_rows(table.to_rows())

        assert restored.cells == table.cells

    def test_series(self):
        """Test series collects one quantity across keys."""
        from kam_criteria.distortion import DistortionTable

        table = DistortionTable()
        table.put("K1tilde", 6, 0.1, seed=0, r=6)
        table.put("K1tilde", 6, 0.2, seed=0, r=7)
        table.put("grad1", 6, 0.3, seed=0, r=7)

        assert table.series("K1tilde") == {(6, 6, None): 0.1, (6, 7, None): 0.2}

    def test_default_budgets(self):
        """Test the default per-cell budgets."""
        from kam_criteria.distortion import Budgets

        budgets = Budgets()

        assert (budgets.chords, budgets.pairs, budgets.quads) == (256, 128, 64)
        assert budgets.mixed_fraction == 0.25
