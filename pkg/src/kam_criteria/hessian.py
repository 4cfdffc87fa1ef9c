"""
Hessian: Sparse Assembly of the Periodic Action Hessian

Builds the cyclic tridiagonal second-derivative matrix of the periodic action
and the gauge-bordered Newton system as scipy.sparse matrices.
"""


import numpy as np
import scipy.sparse


def periodic_hessian(curvature: np.ndarray) -> scipy.sparse.csc_matrix:
    """
    Hessian of the periodic action in the deviation variables.

    Diagonal entries are 2 + curvature_i, where curvature_i = coeff * q_n * V''(q_n x_i);
    both cyclic neighbours carry -1. For q = 2 the two neighbours coincide and their
    entries are summed by the COO-to-CSC conversion.

    Args:
        curvature: Array of potential curvatures, one per orbit point

    Returns:
        Sparse q x q matrix in CSC format

    Example:
        >>> H = periodic_hessian(np.zeros(5))
        >>> H.toarray()[0]
        array([ 2., -1.,  0.,  0., -1.])
    """
    size = len(curvature)
    idx = np.arange(size)
    rows = np.concatenate([idx, idx, idx])
    cols = np.concatenate([idx, (idx + 1) % size, (idx - 1) % size])
    data = np.concatenate([2.0 + curvature, -np.ones(size), -np.ones(size)])
    return scipy.sparse.csc_matrix((data, (rows, cols)), shape=(size, size))


def bordered_hessian(curvature: np.ndarray) -> scipy.sparse.csc_matrix:
    """
    Periodic Hessian bordered by the gauge row and column (sum of deviations fixed).

    The extra unknown is the Lagrange multiplier of the constraint; the matrix is
    nonsingular whenever the Hessian is positive definite on mean-zero vectors.
    """
    size = len(curvature)
    idx = np.arange(size)
    rows = np.concatenate([idx, idx, idx, idx, np.full(size, size)])
    cols = np.concatenate([idx, (idx + 1) % size, (idx - 1) % size, np.full(size, size), idx])
    data = np.concatenate(
        [2.0 + curvature, -np.ones(size), -np.ones(size), np.ones(size), np.ones(size)]
    )
    return scipy.sparse.csc_matrix((data, (rows, cols)), shape=(size + 1, size + 1))


def second_difference(u: np.ndarray) -> np.ndarray:
    """Cyclic u_{i+1} - 2 u_i + u_{i-1}."""
    return np.roll(u, -1) - 2.0 * u + np.roll(u, 1)
