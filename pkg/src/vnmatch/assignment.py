"""Exact square linear assignment (maximization)."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.optimize import linear_sum_assignment


class AssignmentResult(NamedTuple):
    permutation: np.ndarray
    objective: float


def max_assignment(m) -> AssignmentResult:
    """Permutation ``sigma`` maximizing ``sum_i m[i, sigma[i]]``.

    Solved exactly with a shortest-augmenting-path (Jonker-Volgenant family)
    solver in O(k^3). Ties resolve deterministically: the solver processes rows
    in ascending order, so identical input always yields the identical
    permutation.

    Parameters
    ----------
    m : (k, k) array_like
        Finite real scores; negative entries are allowed.

    Returns
    -------
    AssignmentResult
        ``permutation[i]`` is the column assigned to row ``i``;
        ``objective`` is the sum of the selected entries.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise ValueError("assignment needs k >= 1")
    if not np.all(np.isfinite(m)):
        raise ValueError("assignment matrix contains non-finite entries")
    rows, cols = linear_sum_assignment(m, maximize=True)
    sigma = np.empty(m.shape[0], dtype=np.int64)
    sigma[rows] = cols
    return AssignmentResult(sigma, float(m[np.arange(m.shape[0]), sigma].sum()))


def permutation_matrix(sigma) -> np.ndarray:
    """Dense 0/1 matrix with a one at ``(i, sigma[i])``."""
    sigma = np.asarray(sigma, dtype=np.int64)
    p = np.zeros((sigma.size, sigma.size))
    p[np.arange(sigma.size), sigma] = 1.0
    return p
