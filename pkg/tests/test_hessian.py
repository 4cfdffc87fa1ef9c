"""
Unit tests for the sparse action Hessians.
"""

import numpy as np
from conftest import requires_kam_criteria


@requires_kam_criteria
class TestPeriodicHessian:
    """Tests for periodic_hessian."""

    def test_free_rotation_row(self):
        """Test the cyclic second-difference stencil without a potential."""
        from kam_criteria.hessian import periodic_hessian

        H = periodic_hessian(np.zeros(5)).toarray()

        np.testing.assert_array_equal(H[0], [2.0, -1.0, 0.0, 0.0, -1.0])
        np.testing.assert_array_equal(H, H.T)

    def test_curvature_on_diagonal(self):
        """Test curvatures are added to the diagonal only."""
        from kam_criteria.hessian import periodic_hessian

        curvature = np.array([0.1, -0.2, 0.3, 0.0])
        H = periodic_hessian(curvature).toarray()

        np.testing.assert_allclose(np.diag(H), 2.0 + curvature)
        assert H[0, 2] == 0.0

    def test_period_two(self):
        """Test coinciding neighbours are summed when q = 2."""
        from kam_criteria.hessian import periodic_hessian

        H = periodic_hessian(np.zeros(2)).toarray()

        np.testing.assert_array_equal(H, [[2.0, -2.0], [-2.0, 2.0]])

    def test_matches_second_difference(self):
        """Test H u = -second_difference(u) without a potential."""
        from kam_criteria.hessian import periodic_hessian, second_difference

        u = np.random.default_rng(0).normal(size=9)

        np.testing.assert_allclose(periodic_hessian(np.zeros(9)) @ u, -second_difference(u), atol=1e-14)


@requires_kam_criteria
class TestBorderedHessian:
    """Tests for bordered_hessian."""

    def test_shape_and_border(self):
        """Test the gauge row and column are all ones."""
        from kam_criteria.hessian import bordered_hessian

        B = bordered_hessian(np.zeros(6)).toarray()

        assert B.shape == (7, 7)
        np.testing.assert_array_equal(B[6, :6], np.ones(6))
        np.testing.assert_array_equal(B[:6, 6], np.ones(6))
        assert B[6, 6] == 0.0

    def test_nonsingular(self):
        """Test bordering removes the translation kernel of the free Hessian."""
        from kam_criteria.hessian import bordered_hessian, periodic_hessian

        free = periodic_hessian(np.zeros(8)).toarray()
        bordered = bordered_hessian(np.zeros(8)).toarray()

        assert np.linalg.matrix_rank(free) == 7
        assert np.linalg.matrix_rank(bordered) == 9
