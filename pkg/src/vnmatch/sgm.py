"""Seeded graph matching by Frank-Wolfe on the indefinite relaxation.

Non-seed vertices of the two graphs are aligned by maximizing

    f(P) = tr(P^T A21 B21^T) + tr(P^T A12^T B12) + tr(A22^T P B22 P^T)

over doubly stochastic ``P``, where ``A``/``B`` are the centered, padded
adjacency matrices split into seed (1) and non-seed (2) blocks. ``P[i, j]``
weights the correspondence of non-seed ``i`` of the first graph with
non-seed ``j`` of the second.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .assignment import max_assignment, permutation_matrix

DS_ATOL = 1e-9


@dataclass(frozen=True)
class PaddedPair:
    a: np.ndarray
    b: np.ndarray
    s: int
    orig_sizes: tuple[int, int]

    def __post_init__(self):
        if self.a.shape != self.b.shape or self.a.shape[0] != self.a.shape[1]:
            raise ValueError("padded matrices must be square with a common size")
        if not (np.array_equal(self.a, self.a.T) and np.array_equal(self.b, self.b.T)):
            raise ValueError("padded matrices must be symmetric")
        if not 0 <= self.s <= self.a.shape[0]:
            raise ValueError("seed count out of range")

    @property
    def size(self) -> int:
        return self.a.shape[0]

    @property
    def dim(self) -> int:
        """Number of non-seed rows being matched."""
        return self.size - self.s

    def blocks(self) -> Blocks:
        return split_blocks(self.a, self.b, self.s)


@dataclass(frozen=True)
class Blocks:
    a11: np.ndarray
    a12: np.ndarray
    a21: np.ndarray
    a22: np.ndarray
    b11: np.ndarray
    b12: np.ndarray
    b21: np.ndarray
    b22: np.ndarray
    linear: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        k = self.a22.shape[0]
        for name in ("a22", "b22"):
            if getattr(self, name).shape != (k, k):
                raise ValueError(f"{name} must be {k}x{k}")
        s = self.a11.shape[0]
        for name, shape in (("a12", (s, k)), ("b12", (s, k)), ("a21", (k, s)), ("b21", (k, s)), ("b11", (s, s))):
            if getattr(self, name).shape != shape:
                raise ValueError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")
        object.__setattr__(self, "linear", self.a21 @ self.b21.T + self.a12.T @ self.b12)

    @property
    def dim(self) -> int:
        return self.a22.shape[0]

    def assemble(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.block([[self.a11, self.a12], [self.a21, self.a22]]),
                np.block([[self.b11, self.b12], [self.b21, self.b22]]))


def split_blocks(a: np.ndarray, b: np.ndarray, s: int) -> Blocks:
    return Blocks(a[:s, :s], a[:s, s:], a[s:, :s], a[s:, s:],
                  b[:s, :s], b[:s, s:], b[s:, :s], b[s:, s:])


def pad_and_center(a, b, s: int) -> PaddedPair:
    """Center both adjacency matrices and zero-pad the smaller to a common size.

    Off-diagonal entries map ``1 -> +1`` and ``0 -> -1``; the diagonal and any
    padded rows/columns are ``0``. Centering happens even when the sizes agree.
    Seeds are expected to occupy the first ``s`` indices of both matrices.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n, n2 = a.shape[0], b.shape[0]
    if not 0 <= s <= min(n, n2):
        raise ValueError(f"seed count {s} out of range for sizes ({n}, {n2})")
    size = max(n, n2)

    def centered(m):
        k = m.shape[0]
        out = np.zeros((size, size))
        out[:k, :k] = 2.0 * m - (np.ones((k, k)) - np.eye(k))
        np.fill_diagonal(out, 0.0)
        return out

    return PaddedPair(centered(a), centered(b), s, (n, n2))


def _check_p(blocks: Blocks, p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (blocks.dim, blocks.dim):
        raise ValueError(f"P has shape {p.shape}, expected {(blocks.dim, blocks.dim)}")
    return p


def objective_f(blocks: Blocks, p) -> float:
    """Three-trace seeded matching objective evaluated at ``p``."""
    p = _check_p(blocks, p)
    quad = np.trace(blocks.a22.T @ p @ blocks.b22 @ p.T)
    return float(np.sum(blocks.linear * p) + quad)


def gradient_f(blocks: Blocks, p) -> np.ndarray:
    """``A21 B21^T + A12^T B12 + A22 P B22^T + A22^T P B22``."""
    p = _check_p(blocks, p)
    return blocks.linear + blocks.a22 @ p @ blocks.b22.T + blocks.a22.T @ p @ blocks.b22


def _quad_map(blocks: Blocks, x: np.ndarray) -> np.ndarray:
    # f(X) = <linear, X> + <X, quad_map(X)>
    return blocks.a22.T @ x @ blocks.b22


def _segment_coeffs(blocks, p, q, mp, mq):
    """Coefficients of ``f(q + alpha (p - q)) = c2 alpha^2 + c1 alpha + c0``."""
    d = p - q
    md = mp - mq
    c2 = float(np.sum(d * md))
    c1 = float(np.sum(blocks.linear * d) + np.sum(q * md) + np.sum(d * mq))
    c0 = float(np.sum(blocks.linear * q) + np.sum(q * mq))
    return c2, c1, c0


def _best_alpha(c2: float, c1: float) -> float:
    # gain relative to alpha = 0 is c2 a^2 + c1 a; ties keep the current point (alpha = 1)
    if c2 < 0:
        crit = -c1 / (2.0 * c2)
        if 0.0 < crit < 1.0:
            return crit
    return 1.0 if c2 + c1 >= 0 else 0.0


def line_search(blocks: Blocks, p, q) -> float:
    """Exact maximizer over ``alpha in [0, 1]`` of ``f(alpha p + (1 - alpha) q)``."""
    p = _check_p(blocks, p)
    q = _check_p(blocks, q)
    c2, c1, _ = _segment_coeffs(blocks, p, q, _quad_map(blocks, p), _quad_map(blocks, q))
    return _best_alpha(c2, c1)


def is_doubly_stochastic(p, atol: float = DS_ATOL) -> bool:
    p = np.asarray(p)
    return (p.ndim == 2 and p.shape[0] == p.shape[1] and bool(np.all(p >= -atol))
            and np.allclose(p.sum(axis=0), 1.0, rtol=0, atol=atol)
            and np.allclose(p.sum(axis=1), 1.0, rtol=0, atol=atol))


@dataclass
class SgmRunResult:
    permutation: np.ndarray
    final_objective: float
    iterations: int
    converged: bool
    relaxed_objective: float = float("nan")
    objective_trace: list[float] = field(default_factory=list, repr=False)
    relaxed_solution: np.ndarray | None = field(default=None, repr=False)


def frank_wolfe_sgm(pair: PaddedPair, p0, eps: float = 1e-6, max_iter: int = 100,
                    callback: Callable[[int, np.ndarray], None] | None = None) -> SgmRunResult:
    """Run Frank-Wolfe from ``p0`` and project the result to a permutation.

    Each iteration solves the linearized problem with :func:`max_assignment`,
    then moves to the exact best point on the segment between the current
    iterate and that permutation, so the objective never decreases. Iteration
    stops once the objective changes by at most ``eps * max(1, |f(p0)|)`` or
    after ``max_iter`` steps. The final doubly stochastic iterate is rounded to
    the permutation maximizing ``tr(Q^T P)``.

    Parameters
    ----------
    pair : PaddedPair
        Centered, padded matrices with seeds first.
    p0 : (k, k) array_like
        Doubly stochastic starting point, ``k = pair.dim``.
    eps : float
        Relative stopping tolerance on the objective change.
    max_iter : int
        Iteration cap.
    callback : callable, optional
        Called as ``callback(j, P)`` with every iterate, ``j = 0`` being ``p0``.
    """
    if eps <= 0 or max_iter < 1:
        raise ValueError("eps must be positive and max_iter >= 1")
    blocks = pair.blocks()
    k = blocks.dim
    if k == 0:
        return SgmRunResult(np.zeros(0, dtype=np.int64), 0.0, 0, True, 0.0, [0.0])
    p = np.array(p0, dtype=np.float64, copy=True)
    if p.shape != (k, k) or not is_doubly_stochastic(p):
        raise ValueError("p0 must be a doubly stochastic matrix of size pair.dim")

    rows = np.arange(k)
    b22 = blocks.b22
    a22t = blocks.a22.T
    mp = _quad_map(blocks, p)
    f = float(np.sum(blocks.linear * p) + np.sum(p * mp))
    tol = eps * max(1.0, abs(f))
    trace = [f]
    if callback is not None:
        callback(0, p)

    converged = False
    it = 0
    while it < max_iter:
        it += 1
        grad = blocks.linear + 2.0 * mp  # padded blocks are symmetric
        sigma = max_assignment(grad).permutation
        q = np.zeros((k, k))
        q[rows, sigma] = 1.0
        mq = a22t @ b22[sigma]
        c2, c1, _ = _segment_coeffs(blocks, p, q, mp, mq)
        alpha = _best_alpha(c2, c1)
        if alpha != 1.0:
            p = alpha * p + (1.0 - alpha) * q
            mp = alpha * mp + (1.0 - alpha) * mq
        f_new = float(np.sum(blocks.linear * p) + np.sum(p * mp))
        trace.append(f_new)
        if callback is not None:
            callback(it, p)
        done = abs(f_new - f) <= tol
        f = f_new
        if done:
            converged = True
            break

    sigma = max_assignment(p).permutation
    return SgmRunResult(
        permutation=sigma,
        final_objective=objective_f(blocks, permutation_matrix(sigma)),
        iterations=it,
        converged=converged,
        relaxed_objective=f,
        objective_trace=trace,
        relaxed_solution=p,
    )
