"""Subset-regression solvers emitting full solution paths over sparsity levels.

Three subset methods (greedy pursuit, lasso homotopy, marginal screening)
plus plain full regression. Each path solver shares the same stopping
criteria and returns a SolverPath whose step t holds the coefficients over
the columns selected so far and the residual norm they achieve.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatch,
    NumericalBreakdown,
    OrthogonalInput,
)
from .linalg import OrthoState, least_squares_minnorm, numerical_rank

_TINY = 1e-12


class StopReason(enum.Enum):
    ITERATION_CAP = "iteration_cap"
    RESIDUAL_SMALL = "residual_small"
    NEAR_ORTHOGONAL = "near_orthogonal"
    RANK_BOUNDARY = "rank_boundary"


@dataclass(frozen=True)
class StopCriteria:
    """Shared stopping rules: sparsity cap, residual norm, near-orthogonality.

    Defaults keep the tolerances effectively zero so paths run out to the
    sparsity cap, which defaults to the full benchmark sweep length.
    """

    max_sparsity: int = 100
    residual_tol: float = 1e-8
    orthogonality_tol: float = 1e-8

    def __post_init__(self):
        if self.max_sparsity < 1:
            raise ValueError("max_sparsity must be >= 1")
        if self.residual_tol < 0 or self.orthogonality_tol < 0:
            raise ValueError("tolerances must be >= 0")


@dataclass(frozen=True)
class PathStep:
    selected: tuple[int, ...]  # column indices in selection order
    coefficients: np.ndarray  # over the selected columns
    residual_norm: float


@dataclass(frozen=True)
class Breakpoint:
    """One homotopy event: the active set and coefficients at penalty lam."""

    lam: float
    active: tuple[int, ...]
    coefficients: np.ndarray


@dataclass
class SolverPath:
    steps: list[PathStep]
    stop_reason: StopReason
    n_columns: int
    breakpoints: list[Breakpoint] = field(default_factory=list)

    def beta_at(self, sparsity: int) -> np.ndarray:
        """Enlarged n-vector at the given sparsity level.

        Paths shorter than the requested level hold their last step.
        """
        if sparsity < 1:
            raise ValueError("sparsity must be >= 1")
        step = self.steps[min(sparsity, len(self.steps)) - 1]
        return expand_coefficients(step, self.n_columns)

    def solution_at(self, lam: float) -> np.ndarray:
        """Lasso solution at penalty lam, interpolated on the traced path.

        Only available for homotopy paths (the path is piecewise linear in
        lam, so interpolation between breakpoints is exact).
        """
        if not self.breakpoints:
            raise ValueError("path has no breakpoints (not a homotopy path)")
        bps = self.breakpoints
        if lam >= bps[0].lam:
            return np.zeros(self.n_columns)
        if lam < bps[-1].lam - _TINY:
            raise ValueError(
                f"lam={lam} below the traced path (stopped at {bps[-1].lam})"
            )
        lam = max(lam, bps[-1].lam)
        hi = 0
        while hi + 1 < len(bps) and bps[hi + 1].lam >= lam:
            hi += 1
        lo_bp = bps[hi]
        if lo_bp.lam >= lam - _TINY and hi + 1 >= len(bps):
            return _expand(lo_bp.active, lo_bp.coefficients, self.n_columns)
        nxt = bps[hi + 1]
        left = _expand(lo_bp.active, lo_bp.coefficients, self.n_columns)
        right = _expand(nxt.active, nxt.coefficients, self.n_columns)
        gap = lo_bp.lam - nxt.lam
        if gap <= _TINY:
            return right
        t = (lo_bp.lam - lam) / gap
        return left + t * (right - left)


def expand_coefficients(step: PathStep, n: int) -> np.ndarray:
    """Enlarge a step's compact coefficients to an n-vector."""
    return _expand(step.selected, step.coefficients, n)


def _expand(indices, values, n):
    beta = np.zeros(n)
    beta[list(indices)] = values
    return beta


class FullRegressionResult(NamedTuple):
    beta: np.ndarray
    residual_norm: float
    full_rank: bool


def _check_inputs(X, x):
    X = np.asarray(X, dtype=float)
    x = np.asarray(x, dtype=float).ravel()
    if X.ndim != 2:
        raise DimensionMismatch("X must be a 2-d array")
    if X.shape[0] != x.shape[0]:
        raise DimensionMismatch(
            f"X has {X.shape[0]} rows but x has length {x.shape[0]}"
        )
    return X, x


def omp_path(X: np.ndarray, x: np.ndarray, stop: StopCriteria = StopCriteria()) -> SolverPath:
    """Orthogonal matching pursuit path.

    Step t adds the column most correlated with the current residual
    (ties -> lowest index), refits by projecting x onto the selection, and
    stops at the sparsity cap, a small residual, or a residual nearly
    orthogonal to every column.
    """
    X, x = _check_inputs(X, x)
    m, n = X.shape
    corr = X.T @ x
    if np.max(np.abs(corr)) <= stop.orthogonality_tol:
        raise OrthogonalInput("training columns are orthogonal to x")
    state = OrthoState(m)
    steps: list[PathStep] = []
    while True:
        j = int(np.argmax(np.abs(corr)))
        if not state.try_append(X[:, j], j):
            # cannot happen with exact arithmetic (the residual is orthogonal
            # to the span, so a correlated column has a component outside it)
            reason = StopReason.RANK_BOUNDARY
            break
        beta = state.solve(x)
        r = x - state.project(x)
        rn = float(np.linalg.norm(r))
        steps.append(PathStep(tuple(state.selected), beta, rn))
        corr = X.T @ r
        if len(steps) >= stop.max_sparsity:
            reason = StopReason.ITERATION_CAP
            break
        if rn < stop.residual_tol:
            reason = StopReason.RESIDUAL_SMALL
            break
        if np.max(np.abs(corr)) <= stop.orthogonality_tol:
            reason = StopReason.NEAR_ORTHOGONAL
            break
    return SolverPath(steps, reason, n)


def top_correlation_order(c: np.ndarray, s: int) -> np.ndarray:
    """Indices of the s largest |c| in decreasing order, ties -> lowest index.

    Uses a partition-based selection so the cost stays O(n + s log s) after
    the correlations are known.
    """
    a = np.abs(np.asarray(c, dtype=float).ravel())
    n = a.size
    s = min(s, n)
    if s == n:
        cand = np.arange(n)
    else:
        part = np.argpartition(-a, s - 1)[:s]
        thresh = a[part].min()
        above = np.flatnonzero(a > thresh)
        ties = np.flatnonzero(a == thresh)
        cand = np.concatenate([above, ties[: s - above.size]])
    return cand[np.lexsort((cand, -a[cand]))]


def marginal_path(X: np.ndarray, x: np.ndarray, stop: StopCriteria = StopCriteria()) -> SolverPath:
    """Marginal regression path: one-shot screening, then prefix refits.

    Correlations with x are computed once; the columns with the s largest
    magnitudes are taken in decreasing order and each prefix is refit by
    least squares. A prefix that loses full rank truncates the path at the
    last full-rank prefix (RankBoundary).
    """
    X, x = _check_inputs(X, x)
    m, n = X.shape
    c = X.T @ x
    if np.max(np.abs(c)) <= stop.orthogonality_tol:
        raise OrthogonalInput("training columns are orthogonal to x")
    order = top_correlation_order(c, stop.max_sparsity)
    state = OrthoState(m)
    steps: list[PathStep] = []
    reason = None
    for t, j in enumerate(order, start=1):
        if not state.try_append(X[:, int(j)], int(j)):
            reason = StopReason.RANK_BOUNDARY
            break
        beta = state.solve(x)
        r = x - state.project(x)
        rn = float(np.linalg.norm(r))
        steps.append(PathStep(tuple(state.selected), beta, rn))
        if t == len(order):
            reason = StopReason.ITERATION_CAP
            break
        if rn < stop.residual_tol:
            reason = StopReason.RESIDUAL_SMALL
            break
        if np.max(np.abs(X.T @ r)) <= stop.orthogonality_tol:
            reason = StopReason.NEAR_ORTHOGONAL
            break
    return SolverPath(steps, reason, n)


def full_regression(X: np.ndarray, x: np.ndarray) -> FullRegressionResult:
    """Minimum-norm least squares against all training columns.

    Also flags whether X is numerically full rank, since the consistency
    result for full regression only applies in that case.
    """
    X, x = _check_inputs(X, x)
    beta = least_squares_minnorm(X, x)
    rn = float(np.linalg.norm(x - X @ beta))
    full_rank = numerical_rank(X) == min(X.shape)
    return FullRegressionResult(beta, rn, full_rank)


def homotopy_path(X: np.ndarray, x: np.ndarray, stop: StopCriteria = StopCriteria()) -> SolverPath:
    """Lasso homotopy path of min ||x - X b||^2 / 2 + lam * ||b||_1.

    Follows the piecewise-linear solution path from lam = max|X'x| downward
    through insertion and deletion breakpoints; the shrunk lasso solutions
    along the path live in `breakpoints` (see solution_at). The path is
    recorded at active-set-size granularity: the step for size k takes the
    active set of the last lam-segment with k columns and carries its
    least-squares regression vector, so step residuals are orthogonal to
    the selection like the other subset methods. Stopping mirrors the
    greedy solver and is applied to the path residual: active-set cap,
    small residual, or lam (= the largest correlation magnitude) at the
    orthogonality tolerance.

    Raises NumericalBreakdown if a breakpoint computation degenerates.
    """
    X, x = _check_inputs(X, x)
    m, n = X.shape
    c0 = X.T @ x
    lam = float(np.max(np.abs(c0)))
    if lam <= stop.orthogonality_tol:
        raise OrthogonalInput("training columns are orthogonal to x")

    j0 = int(np.argmax(np.abs(c0)))
    active: list[int] = [j0]
    signs: list[float] = [1.0 if c0[j0] >= 0 else -1.0]
    beta = np.zeros(1)
    breakpoints = [Breakpoint(lam, (j0,), beta.copy())]
    steps_by_size: dict[int, PathStep] = {}
    reason = None

    max_events = 8 * max(n, stop.max_sparsity) + 16
    for _ in range(max_events):
        A = np.asarray(active, dtype=int)
        z = np.asarray(signs)
        Xa = X[:, A]
        gram = Xa.T @ Xa
        try:
            w = np.linalg.solve(gram, z)
        except np.linalg.LinAlgError as exc:
            raise NumericalBreakdown("active gram matrix is singular") from exc
        if not np.all(np.isfinite(w)):
            raise NumericalBreakdown("non-finite homotopy direction")
        xw = Xa @ w
        b = X.T @ xw
        r0 = x - Xa @ beta
        a = X.T @ r0

        margin = _TINY * max(1.0, lam)
        next_lam = 0.0
        event = None  # ("insert", j, sign) | ("delete", pos)

        # insertion breakpoints: lam at which an inactive correlation
        # |c_j(lam)| catches up with lam. A crossing only counts when the
        # correlation approaches from below as lam decreases, which is
        # exactly a positive branch denominator; this also keeps a freshly
        # deleted column (tied at |c| = lam with receding correlation) from
        # re-entering on the spot. Ties with the current breakpoint are
        # allowed (simultaneous insertions); anything below _TINY is noise.
        shift = a - lam * b
        with np.errstate(divide="ignore", invalid="ignore"):
            enter_pos = shift / (1.0 - b)
            enter_neg = -shift / (1.0 + b)
        enter_pos[(1.0 - b) <= _TINY] = 0.0
        enter_neg[(1.0 + b) <= _TINY] = 0.0
        enter_pos[A] = 0.0
        enter_neg[A] = 0.0
        for cands, sgn in ((enter_pos, 1.0), (enter_neg, -1.0)):
            ok = (cands > _TINY) & (cands <= lam + margin)
            if np.any(ok):
                masked = np.where(ok, cands, 0.0)
                j = int(np.argmax(masked))
                if masked[j] > next_lam:
                    next_lam = min(float(masked[j]), lam)
                    event = ("insert", j, sgn)

        # deletion breakpoints: lam at which an active coefficient hits zero
        for pos in range(len(active)):
            if abs(w[pos]) <= _TINY:
                continue
            cand = lam + beta[pos] / w[pos]
            if _TINY < cand < lam - margin and cand > next_lam:
                next_lam = cand
                event = ("delete", pos)

        # advance the lasso solution to the segment end
        beta_end = beta + (lam - next_lam) * w
        if event is not None and event[0] == "delete":
            beta_end[event[1]] = 0.0
        rn_path = float(np.linalg.norm(x - Xa @ beta_end))

        # the step recorded for this size carries the regression vector on
        # the selected columns (the subset-regression reading: the path
        # chooses X_s, least squares supplies beta), so the step residual is
        # orthogonal to the selection; the shrunk lasso solutions stay
        # available on the breakpoints
        refit = np.linalg.solve(gram, Xa.T @ x)
        rn_refit = float(np.linalg.norm(x - Xa @ refit))
        steps_by_size[len(active)] = PathStep(tuple(active), refit, rn_refit)

        if len(active) >= stop.max_sparsity:
            reason = StopReason.ITERATION_CAP
            break
        if rn_path < stop.residual_tol:
            reason = StopReason.RESIDUAL_SMALL
            break
        if next_lam <= stop.orthogonality_tol or event is None:
            reason = StopReason.NEAR_ORTHOGONAL
            break

        kind = event[0]
        if kind == "insert":
            _, j, sgn = event
            active.append(j)
            signs.append(sgn)
            beta = np.append(beta_end, 0.0)
        else:
            pos = event[1]
            active.pop(pos)
            signs.pop(pos)
            beta = np.delete(beta_end, pos)
            if not active:
                raise NumericalBreakdown("homotopy deleted its entire active set")
        breakpoints.append(Breakpoint(next_lam, tuple(active), beta.copy()))
        lam = next_lam
    else:
        raise NumericalBreakdown("homotopy exceeded its event budget (cycling)")

    steps = [steps_by_size[k] for k in range(1, max(steps_by_size) + 1)]
    return SolverPath(steps, reason, n, breakpoints=breakpoints)


PATH_SOLVERS = {
    "omp": omp_path,
    "homotopy": homotopy_path,
    "marginal": marginal_path,
}
