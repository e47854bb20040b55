"""Class-dominance diagnostics: dominance flags, angle certificates,
the angle-condition scanner, and the error decomposition by dominance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .classifier import SrcDecision, class_contributions, _check
from .errors import DimensionMismatch, EmptyInput, InsufficientData
from .linalg import orthonormal_span, vector_angle

_ZERO_TOL = 1e-12
HALF_PI = float(np.pi / 2)


@dataclass(frozen=True)
class DominanceReport:
    dominates: bool
    positively_dominates: bool
    own_norm: float  # ||X beta_y||
    complement_norms: np.ndarray  # ||X beta_{-k}|| for k = 1..K
    angle_own: float  # angle between x and X beta_y
    angle_other: float  # angle between x and X beta_{-y}
    dominance_ratio: float  # own / complement at the true class (no claim attached)


def report_from_contributions(x, y: int, own_all, rest_all) -> DominanceReport:
    """Dominance flags and angle certificate from precomputed masked
    reconstructions (own_all[:, k-1] = X beta_k, rest_all[:, k-1] = X beta_{-k}).
    """
    K = own_all.shape[1]
    if not 1 <= y <= K:
        raise DimensionMismatch(f"true class {y} outside 1..{K}")
    own_vec = own_all[:, y - 1]
    other_vec = rest_all[:, y - 1]
    # identical reductions for both norm families, so masks that agree
    # bitwise (e.g. beta_y vs beta_{-k} when K = 2) compare exactly equal
    own_norms = np.linalg.norm(own_all, axis=0)
    complement = np.linalg.norm(rest_all, axis=0)
    own = float(own_norms[y - 1])
    comp_y = float(complement[y - 1])

    dominates = comp_y < own
    others = [k for k in range(K) if k != y - 1]
    positively = all(own <= complement[k] for k in others)

    angle_own = vector_angle(x, own_vec) if own > _ZERO_TOL else HALF_PI
    angle_other = vector_angle(x, other_vec) if comp_y > _ZERO_TOL else HALF_PI
    if comp_y > 0:
        ratio = own / comp_y
    else:
        ratio = float("inf") if own > 0 else 0.0
    return DominanceReport(
        dominates, positively, own, complement, angle_own, angle_other, ratio
    )


def dominance_report(X, beta, labels, y: int, x, n_classes=None) -> DominanceReport:
    """Dominance flags and the angle certificate for true class y.

    Class y dominates when its complement contribution is strictly smaller
    than its own; it positively dominates when its own contribution is no
    larger than every other class's complement. Angles default to pi/2
    whenever the corresponding masked contribution is the zero vector, so
    an empty class never spuriously dominates.
    """
    X, beta, labels, x = _check(X, beta, labels, x)
    own_all, rest_all = class_contributions(X, beta, labels, n_classes)
    return report_from_contributions(x, y, own_all, rest_all)


def check_dominance_certificate(report: DominanceReport, decision: SrcDecision, y: int) -> bool:
    """Per-instance certificate: dominance plus positive dominance must
    force a correct classification. Vacuously true when either flag is off.
    """
    if report.dominates and report.positively_dominates:
        return decision.label == y
    return True


@dataclass(frozen=True)
class ErrorDecomposition:
    """Error split by whether class dominance held, from integer counts."""

    L: float
    P_D: float
    P1: float
    P2: float
    counts: tuple[int, int, int, int]  # n_test, n_dominant, n_dom_wrong, n_nondom_wrong

    def identity_holds(self) -> bool:
        """L = P_D*P1 + (1-P_D)*P2, checked exactly in rational arithmetic."""
        n, nd, ndw, nnw = self.counts
        p_d = Fraction(nd, n)
        p1 = Fraction(ndw, nd) if nd else Fraction(0)
        p2 = Fraction(nnw, n - nd) if n - nd else Fraction(0)
        return Fraction(ndw + nnw, n) == p_d * p1 + (1 - p_d) * p2


def decompose_errors(records) -> ErrorDecomposition:
    """Decompose misclassification over (dominates, correct) records.

    Conditional rates with an empty conditioning set are 0 by convention.
    """
    records = list(records)
    if not records:
        raise EmptyInput("no records to decompose")
    n = len(records)
    nd = sum(1 for dom, _ in records if dom)
    ndw = sum(1 for dom, ok in records if dom and not ok)
    nnw = sum(1 for dom, ok in records if not dom and not ok)
    p_d = nd / n
    p1 = ndw / nd if nd else 0.0
    p2 = nnw / (n - nd) if n - nd else 0.0
    return ErrorDecomposition((ndw + nnw) / n, p_d, p1, p2, (n, nd, ndw, nnw))


@dataclass
class AngleScanResult:
    """Per-test-pair angle-condition flags over a grid of candidate angles."""

    c_grid: np.ndarray
    within_ok: np.ndarray  # (n_test, n_c) bool
    between_ok: np.ndarray  # (n_test, n_c) bool
    satisfied: np.ndarray  # (n_test,) bool: some c passes both
    q_hat: float
    sparsity: int
    n_samples: int
    seed: int
    mode: str
    meta: dict = field(default_factory=dict)


def angle_condition_scan(
    train,
    test,
    c_grid,
    s: int,
    mode: str = "nearest",
    n_samples: int = 200,
    seed: int = 0,
) -> AngleScanResult:
    """Scan the angle condition for every test pair over candidate angles c.

    For a test pair (x, y) and a candidate c the condition has two parts:
    some class-y training column must lie within angle c of x, and every
    s-column submatrix drawn from the far pool must stay beyond c, in the
    sense that the angle between x and the span exceeds c. The pool is too
    large to enumerate, so submatrices are sampled (n_samples draws with an
    explicit seed) and the flag is a Monte Carlo estimate.

    mode "nearest": the pool holds only the non-y columns. mode "reassign"
    (the relaxed variant): class-y columns beyond c are treated as another
    class and join the pool. q_hat is the fraction of test pairs for which
    some grid angle satisfies both parts.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if mode not in ("nearest", "reassign"):
        raise ValueError(f"unknown mode {mode!r}")
    c_grid = np.asarray(c_grid, dtype=float).ravel()
    if c_grid.size == 0 or np.any(c_grid < 0) or np.any(c_grid >= HALF_PI):
        raise ValueError("c_grid must be non-empty and inside [0, pi/2)")

    Xtr = np.asarray(train.features, dtype=float)
    ytr = np.asarray(train.labels, dtype=int)
    Xte = np.asarray(test.features, dtype=float)
    yte = np.asarray(test.labels, dtype=int)
    K = max(int(ytr.max()), int(yte.max()))
    for k in range(1, K + 1):
        if not np.any(ytr == k):
            raise InsufficientData(f"class {k} has no training columns")

    rng = np.random.default_rng(seed)
    n_test = Xte.shape[1]
    n_c = c_grid.size
    within_ok = np.zeros((n_test, n_c), dtype=bool)
    between_ok = np.zeros((n_test, n_c), dtype=bool)

    tr_norms = np.linalg.norm(Xtr, axis=0)
    te_norms = np.linalg.norm(Xte, axis=0)
    for i in range(n_test):
        x = Xte[:, i] / te_norms[i]
        y = int(yte[i])
        cos = np.abs(Xtr.T @ x) / tr_norms
        theta = np.arccos(np.clip(cos, 0.0, 1.0))
        own_mask = ytr == y
        own_angles = theta[own_mask]
        for ci, c in enumerate(c_grid):
            within_ok[i, ci] = bool(own_angles.min() <= c)
            if mode == "nearest":
                pool = np.flatnonzero(~own_mask)
            else:
                far_own = np.flatnonzero(own_mask & (theta > c))
                pool = np.concatenate([np.flatnonzero(~own_mask), far_own])
            if not within_ok[i, ci]:
                continue
            between_ok[i, ci] = _pool_always_far(
                x, Xtr, pool, s, c, n_samples, rng
            )

    satisfied = np.any(within_ok & between_ok, axis=1)
    return AngleScanResult(
        c_grid=c_grid,
        within_ok=within_ok,
        between_ok=between_ok,
        satisfied=satisfied,
        q_hat=float(np.mean(satisfied)),
        sparsity=s,
        n_samples=n_samples,
        seed=seed,
        mode=mode,
        meta={"n_train": Xtr.shape[1], "n_test": n_test, "n_classes": K},
    )


def _pool_always_far(x, Xtr, pool, s, c, n_samples, rng):
    """True when every sampled s-column submatrix from the pool stays beyond c."""
    if pool.size == 0:
        return True
    if pool.size <= s:
        draws = [pool]
    else:
        draws = [rng.choice(pool, size=s, replace=False) for _ in range(n_samples)]
    for idx in draws:
        Q = orthonormal_span(Xtr[:, idx])
        cos = float(np.linalg.norm(Q.T @ x))
        theta = float(np.arccos(np.clip(cos, 0.0, 1.0)))
        if theta <= c:
            return False
    return True
