"""Dense linear-algebra kernels shared by the solvers.

Columns are observations throughout: an m x n matrix holds n observations
living in R^m. All functions are pure; OrthoState is the one stateful
helper (an incremental QR used inside the greedy solver loops).
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, ZeroColumn

ZERO_NORM_TOL = 1e-12


def normalize_columns(M: np.ndarray) -> np.ndarray:
    """Rescale every column of M to unit Euclidean norm.

    Raises ZeroColumn(index) for the first column whose norm is <= 1e-12.
    """
    M = np.asarray(M, dtype=float)
    norms = np.linalg.norm(M, axis=0)
    bad = np.flatnonzero(norms <= ZERO_NORM_TOL)
    if bad.size:
        raise ZeroColumn(int(bad[0]))
    return M / norms


def least_squares_minnorm(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares solution of A beta ~= b.

    Uses LAPACK's complete orthogonal factorization (pivoted QR route),
    so rank-deficient A yields the minimizer of smallest Euclidean norm.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    if A.shape[0] != b.shape[0]:
        raise DimensionMismatch(
            f"A has {A.shape[0]} rows but b has length {b.shape[0]}"
        )
    beta, _, _, _ = scipy.linalg.lstsq(A, b, lapack_driver="gelsy")
    return beta


def orthonormal_span(M: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis for the column span of M, via SVD.

    Singular directions below tol (default 1e-10 relative to the leading
    singular value) are treated as numerically null.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.shape[1] == 0:
        return np.zeros((M.shape[0], 0))
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] <= ZERO_NORM_TOL:
        return np.zeros((M.shape[0], 0))
    if tol is None:
        tol = 1e-10 * s[0]
    return U[:, s > tol]


def principal_angle(x: np.ndarray, M: np.ndarray) -> float:
    """Principal angle between the vector x and the column span of M.

    cos(theta) = ||P x|| / ||x|| with P the orthogonal projector onto
    span(M); the cosine is clamped into [0, 1] before arccos so rounding
    near 0 and pi/2 cannot escape the domain. Result in [0, pi/2].
    """
    x = np.asarray(x, dtype=float).ravel()
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim == 2 and M.shape[0] == 1 and x.shape[0] != 1:
        M = M.T  # single vector passed as a row
    if x.shape[0] != M.shape[0]:
        raise DimensionMismatch(
            f"x has length {x.shape[0]} but M has {M.shape[0]} rows"
        )
    Q = orthonormal_span(M)
    if Q.shape[1] == 0:
        raise ZeroColumn(0)
    xn = np.linalg.norm(x)
    if xn <= ZERO_NORM_TOL:
        raise ZeroColumn(0)
    cos = np.linalg.norm(Q.T @ x) / xn
    return float(np.arccos(np.clip(cos, 0.0, 1.0)))


def vector_angle(x: np.ndarray, v: np.ndarray) -> float:
    """Principal angle between two vectors: arccos(|x.v| / (|x||v|))."""
    x = np.asarray(x, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    xn = np.linalg.norm(x)
    vn = np.linalg.norm(v)
    if xn <= ZERO_NORM_TOL or vn <= ZERO_NORM_TOL:
        raise ZeroColumn(0)
    cos = abs(float(x @ v)) / (xn * vn)
    return float(np.arccos(np.clip(cos, 0.0, 1.0)))


def numerical_rank(M: np.ndarray, tol: float | None = None) -> int:
    """Number of singular values of M exceeding tol.

    Default tol is 1e-10 times the largest singular value.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    if tol is None:
        tol = 1e-10 * s[0]
    return int(np.count_nonzero(s > tol))


class OrthoState:
    """Incremental QR over a growing column selection.

    Maintains an orthonormal basis Q and upper-triangular R such that
    columns[selected] = Q @ R, appending one column in O(m * rank) via
    twice-iterated Gram-Schmidt (keeps Q'Q = I to ~1e-14). A column that
    lies in the current span (residual norm <= dep_tol) is rejected and
    the rank does not grow.
    """

    def __init__(self, m: int, dep_tol: float = 1e-10):
        self.m = m
        self.dep_tol = dep_tol
        self.basis = np.zeros((m, 0))
        self.selected: list[int] = []
        self._r = np.zeros((0, 0))

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def try_append(self, column: np.ndarray, index: int) -> bool:
        """Append a column; returns False (state unchanged) if dependent."""
        v = np.asarray(column, dtype=float).ravel()
        if v.shape[0] != self.m:
            raise DimensionMismatch(f"column has length {v.shape[0]}, expected {self.m}")
        w = v.copy()
        h = np.zeros(self.rank)
        for _ in range(2):
            c = self.basis.T @ w
            h += c
            w -= self.basis @ c
        rho = np.linalg.norm(w)
        if rho <= self.dep_tol * max(1.0, np.linalg.norm(v)):
            return False
        k = self.rank
        new_r = np.zeros((k + 1, k + 1))
        new_r[:k, :k] = self._r
        new_r[:k, k] = h
        new_r[k, k] = rho
        self._r = new_r
        self.basis = np.column_stack([self.basis, w / rho])
        self.selected.append(int(index))
        return True

    def project(self, x: np.ndarray) -> np.ndarray:
        """Orthogonal projection of x onto the span of the selected columns."""
        return self.basis @ (self.basis.T @ x)

    def solve(self, x: np.ndarray) -> np.ndarray:
        """Least-squares coefficients of x over the selected columns.

        The selection is kept full rank by try_append, so the solution is
        unique: R beta = Q' x.
        """
        if self.rank == 0:
            return np.zeros(0)
        return scipy.linalg.solve_triangular(self._r, self.basis.T @ x, lower=False)
