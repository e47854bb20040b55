"""Classification step: class-masked reconstruction residuals and argmin label.

The class-k mask of a coefficient vector keeps only the entries whose
training column carries label k; the classifier assigns the class whose
masked reconstruction leaves the smallest residual, lowest index on ties.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyClassSet


@dataclass(frozen=True)
class SrcDecision:
    label: int
    class_residuals: np.ndarray  # length K
    sparsity_used: int


def _check(X, beta, labels, x):
    X = np.asarray(X, dtype=float)
    beta = np.asarray(beta, dtype=float).ravel()
    labels = np.asarray(labels, dtype=int).ravel()
    x = np.asarray(x, dtype=float).ravel()
    if X.ndim != 2:
        raise DimensionMismatch("X must be 2-d")
    n = X.shape[1]
    if beta.shape[0] != n or labels.shape[0] != n:
        raise DimensionMismatch(
            f"X has {n} columns but beta has {beta.shape[0]} entries "
            f"and labels has {labels.shape[0]}"
        )
    if X.shape[0] != x.shape[0]:
        raise DimensionMismatch("x length does not match X rows")
    return X, beta, labels, x


def support_contributions(cols, values, support_labels, n_classes):
    """Per-class masked reconstructions over an explicit support.

    cols holds the supporting columns (m x nnz), values their coefficients,
    support_labels their class labels. Returns (own, rest): m x K arrays
    with own[:, k-1] the class-k masked combination and rest[:, k-1] its
    complement. Both are accumulated directly from the masked columns,
    never by subtraction, so exact identities between masks — e.g. the
    complement of class 2 equals class 1 when K = 2 — hold bitwise.
    """
    cols = np.asarray(cols, dtype=float)
    values = np.asarray(values, dtype=float).ravel()
    support_labels = np.asarray(support_labels, dtype=int).ravel()
    if n_classes < 1:
        raise EmptyClassSet("no classes")
    m = cols.shape[0]
    own = np.zeros((m, n_classes))
    rest = np.zeros((m, n_classes))
    for k in range(1, n_classes + 1):
        mask = support_labels == k
        if mask.any():
            own[:, k - 1] = cols[:, mask] @ values[mask]
        if (~mask).any():
            rest[:, k - 1] = cols[:, ~mask] @ values[~mask]
    return own, rest


def class_contributions(X, beta, labels, n_classes=None):
    """Masked reconstructions X beta_k and complements X beta_{-k}, m x K each."""
    X = np.asarray(X, dtype=float)
    beta = np.asarray(beta, dtype=float).ravel()
    labels = np.asarray(labels, dtype=int).ravel()
    if n_classes is None:
        n_classes = int(labels.max()) if labels.size else 0
    support = np.flatnonzero(beta)
    return support_contributions(
        X[:, support], beta[support], labels[support], n_classes
    )


def residuals_from_contributions(x, own) -> np.ndarray:
    """Residual norms ||x - X beta_k|| from precomputed masked reconstructions."""
    return np.linalg.norm(np.asarray(x, dtype=float)[:, None] - own, axis=0)


def label_from_residuals(residuals) -> int:
    """Argmin class label, lowest class index on ties."""
    return int(np.argmin(residuals)) + 1


def class_residuals(X, beta, labels, x, n_classes=None) -> np.ndarray:
    """Residual norms ||x - X beta_k|| for every class k = 1..K."""
    X, beta, labels, x = _check(X, beta, labels, x)
    own, _ = class_contributions(X, beta, labels, n_classes)
    return residuals_from_contributions(x, own)


def src_classify(X, beta, labels, x, n_classes=None) -> SrcDecision:
    """Assign the class with the smallest masked residual (lowest on ties)."""
    residuals = class_residuals(X, beta, labels, x, n_classes)
    return SrcDecision(
        label_from_residuals(residuals), residuals, int(np.count_nonzero(beta))
    )
