"""
Unit tests for chords, their classification and the seeded families.
"""

import numpy as np
import pytest
from conftest import requires_kam_criteria


@requires_kam_criteria
class TestChordWindow:
    """Tests for the validated index window."""

    def test_for_config(self, golden_window):
        """Test the window bounds of a q_M = 17711 configuration."""
        from kam_criteria.chords import ChordWindow

        window = ChordWindow.for_config(golden_window)

        assert (window.lo, window.hi) == (-17711, 35422)
        assert window.max_step == 2213
        assert window.cutoff == pytest.approx(8 / 17711)
        assert window.flag_threshold == pytest.approx(64 * 8 / 17711)
        assert window.contains(0, 17710, -17711)
        assert not window.contains(35422)


@requires_kam_criteria
class TestChord:
    """Tests for make_chord and chord iteration."""

    def test_orientation(self, golden_window):
        """Test chords are oriented left to right whatever the index order."""
        from kam_criteria.chords import make_chord

        v = make_chord(golden_window, 13, 0)
        w = make_chord(golden_window, 0, 13)

        assert (v.i, v.j) == (w.i, w.j)
        assert v.theta >= 0.0
        assert v.lam == golden_window.twist.alpha.norm_multiple(13)

    def test_rigid_lengths(self, rigid_window):
        """Test Theta tracks lambda up to the rational gap on the rigid rotation."""
        from kam_criteria.chords import make_chord

        alpha = rigid_window.twist.alpha
        for d in (1, 2, 34, 55, 89):
            v = make_chord(rigid_window, 100, 100 + d)
            gap = alpha.rational_gap(d, rigid_window.p, rigid_window.q)
            assert abs(v.Theta - v.lam) <= gap + 1e-15
            assert v.s == 0.0

    def test_rejects_bad_indices(self, golden_window):
        """Test equal indices and indices outside the window are refused."""
        from kam_criteria.chords import make_chord
        from kam_criteria.errors import DepthError, InvalidInputError

        with pytest.raises(InvalidInputError):
            make_chord(golden_window, 5, 5)
        with pytest.raises(DepthError):
            make_chord(golden_window, -20000, 0)

    def test_iterate_keeps_lambda(self, golden_window):
        """Test F^k shifts both endpoints and keeps lambda."""
        from kam_criteria.chords import iterate_chord, make_chord

        v = make_chord(golden_window, 200, 234)
        w = iterate_chord(v, 55)

        assert w.lam == v.lam
        assert {w.i, w.j} == {255, 289}
        assert iterate_chord(v, 0) is v

    def test_to_dict(self, golden_window):
        """Test the chord summary."""
        from kam_criteria.chords import make_chord

        data = make_chord(golden_window, 0, 21).to_dict()

        assert set(data) == {"i", "j", "lam", "Theta", "r", "s"}


@requires_kam_criteria
class TestClassification:
    """Tests for the Type-I and Type-II families."""

    def test_kappa_context(self, golden):
        """Test the bands at kappa = 5 on the golden mean."""
        from kam_criteria.chords import kappa_context

        ctx = kappa_context(golden, 5)

        assert (ctx.n_kappa, ctx.n_tilde, ctx.n_bar) == (8, 7, 14)
        assert ctx.q_n == 34
        assert ctx.gamma0 == 3
        assert ctx.growth == 64
        assert ctx.lam_in_band(ctx.norm)
        assert not ctx.lam_in_band(17 * ctx.norm)

    def test_type1(self, golden_window):
        """Test Type-I is the dyadic lambda band."""
        from kam_criteria.chords import classify_type1, make_chord

        v = make_chord(golden_window, 0, 34)

        assert 2.0**-9 <= v.lam <= 2.0**-5
        assert classify_type1(v, 5)
        assert not classify_type1(v, 1)

    def test_canonical_step_first(self, golden):
        """Test q_{n_kappa} leads the admissible Type-II steps."""
        from kam_criteria.chords import type2_steps

        steps = type2_steps(golden, 5, 2213)

        assert steps[0] == 34
        assert all(1 <= d <= 2213 for d in steps)

    def test_type2_members(self, golden_window):
        """Test every enumerated chord is Type-II."""
        from kam_criteria.chords import classify_type2, enumerate_type2

        chords = enumerate_type2(golden_window, 6, budget=16, seed=0)

        assert 0 < len(chords) <= 16
        assert all(classify_type2(v, 6) for v in chords)

    def test_prefix_nested(self, golden_window):
        """Test the sample for a budget is a prefix of the sample for a larger one."""
        from kam_criteria.chords import enumerate_type2

        small = enumerate_type2(golden_window, 5, budget=4, seed=7)
        large = enumerate_type2(golden_window, 5, budget=12, seed=7)

        assert [(v.i, v.j) for v in small] == [(v.i, v.j) for v in large[: len(small)]]

    def test_seeded(self, golden_window):
        """Test enumeration is a function of the seed."""
        from kam_criteria.chords import enumerate_type2

        first = enumerate_type2(golden_window, 5, budget=8, seed=1)
        again = enumerate_type2(golden_window, 5, budget=8, seed=1)

        assert [(v.i, v.j) for v in first] == [(v.i, v.j) for v in again]

    def test_budget_validated(self, golden_window):
        """Test a zero budget is refused."""
        from kam_criteria.chords import enumerate_type2
        from kam_criteria.errors import InvalidInputError

        with pytest.raises(InvalidInputError):
            enumerate_type2(golden_window, 5, budget=0)

    def test_window_scale_guard(self, golden_window):
        """Test a kappa whose N-bar steps exceed the window is refused."""
        from kam_criteria.chords import enumerate_type2
        from kam_criteria.errors import DepthError

        with pytest.raises(DepthError):
            enumerate_type2(golden_window, 10, budget=4)

    def test_slope_breaks_counted(self, golden_window, monkeypatch):
        """Test chords beyond the slope bound raise SlopeError and are skipped and counted by the sampler."""
        from collections import Counter

        from kam_criteria import chords
        from kam_criteria.errors import EmptyFamilyError, InvariantViolation, SlopeError

        monkeypatch.setattr(chords, "S_MAX", 0.0)
        skipped = Counter()

        with pytest.raises(SlopeError) as info:
            chords.make_chord(golden_window, 100, 155)
        with pytest.raises(EmptyFamilyError):
            chords.enumerate_type2(golden_window, 5, budget=4, seed=0, skipped=skipped)

        assert isinstance(info.value, InvariantViolation)
        assert info.value.slope != 0.0
        assert skipped["slope"] > 0

    def test_type1_sample(self, golden_window):
        """Test the Type-I sampler stays in the dyadic band."""
        from kam_criteria.chords import classify_type1, enumerate_type1

        chords = enumerate_type1(golden_window, 5, budget=8, seed=0)

        assert all(classify_type1(v, 5) for v in chords)

    def test_weyl_indices(self):
        """Test base indices lie in [0, q) and depend only on the seed."""
        from kam_criteria.chords import weyl_indices

        idx = weyl_indices(100, 50, seed=3)

        assert idx.shape == (50,)
        assert np.all((idx >= 0) & (idx < 100))
        np.testing.assert_array_equal(idx[:10], weyl_indices(100, 10, seed=3))


@requires_kam_criteria
class TestPairFamilies:
    """Tests for pair and quadruple families."""

    def test_shift_set(self, golden_window):
        """Test shifts lead with q_{r - 2 gamma0} and point to the right."""
        from kam_criteria.chords import shift_set

        alpha = golden_window.twist.alpha
        shifts = shift_set(golden_window, 6, 9)

        assert abs(shifts[0]) == alpha.q[3]
        assert all(alpha.signed_multiple(e) > 0 for e in shifts)

    def test_pairs_are_members(self, golden_window):
        """Test enumerated pairs satisfy the family conditions."""
        from kam_criteria.chords import enumerate_pairs

        pairs = enumerate_pairs(golden_window, 6, 9, budget=4, seed=0)

        assert 0 < len(pairs) <= 4
        for pair in pairs:
            assert pair.is_member
            assert pair.offset >= pair.v1.Theta
            assert pair.offset + pair.v2.Theta <= 0.5

    def test_pair_lambda_bound(self, golden_window):
        """Test same-step pairs lie above 2/q_r and the canonical shift also below 1/q_{r - 2 gamma0}."""
        from kam_criteria.chords import enumerate_pairs

        alpha = golden_window.twist.alpha
        pairs = enumerate_pairs(golden_window, 6, 9, budget=16, seed=0, mixed_fraction=0.0)
        canonical = [p for p in pairs if abs(p.v2.i - p.v1.i) == alpha.q[3]]

        assert canonical
        for pair in pairs:
            assert pair.v1.step == pair.v2.step
            assert pair.lam > 2.0 / alpha.q[9]
        for pair in canonical:
            assert pair.bound_holds

    def test_pair_index_below_gamma0(self, golden_window):
        """Test r below 2 gamma0 leaves the pair family empty."""
        from kam_criteria.chords import enumerate_type2, make_pair
        from kam_criteria.errors import DepthError

        v1, v2 = enumerate_type2(golden_window, 6, budget=2, seed=0)[:2]

        with pytest.raises(DepthError):
            make_pair(v1, v2, 6, 5)

    def test_pair_needs_type2(self, golden_window):
        """Test pairs are only formed from Type-II chords."""
        from kam_criteria.chords import make_chord, make_pair
        from kam_criteria.errors import InvalidInputError

        v1 = make_chord(golden_window, 0, 1)
        v2 = make_chord(golden_window, 5, 6)

        with pytest.raises(InvalidInputError):
            make_pair(v1, v2, 6, 9)

    def test_quadruple_order(self, golden_window):
        """Test s > r is refused."""
        from kam_criteria.chords import enumerate_quadruples
        from kam_criteria.errors import InvalidInputError

        with pytest.raises(InvalidInputError):
            enumerate_quadruples(golden_window, 6, 7, 9, budget=2)

    def test_comparison_skipped_at_small_kappa(self, golden_window):
        """Test the cross-scale comparison skips when n_kappa < 16."""
        from kam_criteria.chords import comparison_check, enumerate_type2

        v = enumerate_type2(golden_window, 6, budget=1, seed=0)[0]
        check = comparison_check(golden_window, v, 6)

        assert check.skipped
        assert check.holds
