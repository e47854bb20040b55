"""Comparison classifiers: linear projection (PCA or spectral embedding of a
square relational matrix) followed by k-nearest-neighbor or LDA.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionTooLarge,
    EmptyTrainingSet,
    NotSquare,
    SingularCovariance,
)

PCA = "pca"
SPECTRAL = "spectral"


@dataclass
class Projection:
    """Fitted linear projection.

    PCA: basis holds the top-d orthonormal directions (m x d) and center
    the training mean; points project as basis'(x - center).

    Spectral: basis holds the embedding coordinates of the training points
    (rows = points, n x d), obtained as U_d * sqrt(s_d) from the SVD of the
    square matrix; a new point described by its relation vector k to the
    training points embeds as sqrt(s_d)^{-1} U_d' k, which reproduces the
    training coordinates on the training points of a PSD matrix.
    """

    kind: str
    dimension: int
    basis: np.ndarray
    center: np.ndarray | None = None
    _u: np.ndarray | None = field(default=None, repr=False)
    _sqrt_s: np.ndarray | None = field(default=None, repr=False)

    def train_coordinates(self) -> np.ndarray:
        """Training points in projected space, one column per point."""
        if self.kind == SPECTRAL:
            return self.basis.T
        raise ValueError("train_coordinates is only defined for spectral embeddings")

    def transform(self, columns: np.ndarray) -> np.ndarray:
        """Project new observations (one per column) into the fitted space.

        For spectral embeddings a new observation is its relation vector to
        the training points (length n_train).
        """
        columns = np.asarray(columns, dtype=float)
        if columns.ndim == 1:
            columns = columns[:, None]
        if self.kind == PCA:
            return self.basis.T @ (columns - self.center[:, None])
        scale = np.zeros_like(self._sqrt_s)
        nz = self._sqrt_s > 0
        scale[nz] = 1.0 / self._sqrt_s[nz]
        return scale[:, None] * (self._u.T @ columns)


def _fix_signs(U: np.ndarray) -> np.ndarray:
    """Deterministic sign convention: largest-magnitude entry positive."""
    U = U.copy()
    for j in range(U.shape[1]):
        i = int(np.argmax(np.abs(U[:, j])))
        if U[i, j] < 0:
            U[:, j] = -U[:, j]
    return U


def fit_projection(data, kind: str, d: int) -> Projection:
    """Fit a d-dimensional projection.

    data is a feature matrix (columns = observations; a LabeledDataset is
    also accepted) for PCA, or a square matrix for the spectral embedding.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    M = np.asarray(getattr(data, "features", data), dtype=float)
    if kind == PCA:
        m, n = M.shape
        if d > min(m, n):
            raise DimensionTooLarge(f"d={d} exceeds min(m, n)={min(m, n)}")
        center = M.mean(axis=1)
        U, _, _ = np.linalg.svd(M - center[:, None], full_matrices=False)
        return Projection(PCA, d, _fix_signs(U[:, :d]), center=center)
    if kind == SPECTRAL:
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise NotSquare(f"spectral embedding needs a square matrix, got {M.shape}")
        n = M.shape[0]
        if d > n:
            raise DimensionTooLarge(f"d={d} exceeds matrix size {n}")
        U, s, _ = np.linalg.svd(M)
        U = _fix_signs(U[:, :d])
        sqrt_s = np.sqrt(s[:d])
        coords = U * sqrt_s  # rows = points
        return Projection(SPECTRAL, d, coords, _u=U, _sqrt_s=sqrt_s)
    raise ValueError(f"unknown projection kind {kind!r}")


def _as_points(train_proj: np.ndarray) -> np.ndarray:
    return np.atleast_2d(np.asarray(train_proj, dtype=float))


def knn_classify(train_proj, labels, x_proj, k: int = 9) -> int:
    """Majority vote among the k nearest training points (Euclidean).

    Distance ties prefer the lower training index; vote ties the lowest
    class index.
    """
    P = _as_points(train_proj)
    labels = np.asarray(labels, dtype=int).ravel()
    n = P.shape[1]
    if n == 0:
        raise EmptyTrainingSet("no training points")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    x = np.asarray(x_proj, dtype=float).ravel()
    d2 = np.sum((P - x[:, None]) ** 2, axis=0)
    nearest = np.argsort(d2, kind="stable")[:k]
    votes = np.bincount(labels[nearest], minlength=int(labels.max()) + 1)
    return int(np.argmax(votes))


class LdaModel:
    """LDA with a pooled, trace-scaled ridge-regularized covariance.

    The pooled within-class covariance is regularized as
    cov + ridge * trace(cov)/d * I; when the covariance is all zero the
    regularizer falls back to ridge * I so degenerate data still yields a
    (tied) decision instead of an error. Classes absent from the training
    set are never predicted.
    """

    def __init__(self, ridge: float = 1e-6):
        self.ridge = ridge

    def fit(self, train_proj, labels):
        P = _as_points(train_proj)
        labels = np.asarray(labels, dtype=int).ravel()
        if P.shape[1] == 0:
            raise EmptyTrainingSet("no training points")
        d, n = P.shape
        self.classes = np.unique(labels)
        self.means = np.column_stack(
            [P[:, labels == k].mean(axis=1) for k in self.classes]
        )
        self.log_priors = np.array(
            [np.log(np.sum(labels == k) / n) for k in self.classes]
        )
        cov = np.zeros((d, d))
        for idx, k in enumerate(self.classes):
            C = P[:, labels == k] - self.means[:, idx][:, None]
            cov += C @ C.T
        dof = max(n - self.classes.size, 1)
        cov /= dof
        tr = float(np.trace(cov))
        if self.ridge > 0:
            reg = self.ridge * (tr / d) if tr > 0 else self.ridge
            cov = cov + reg * np.eye(d)
        try:
            self._solved_means = np.linalg.solve(cov, self.means)
        except np.linalg.LinAlgError as exc:
            raise SingularCovariance(
                "pooled covariance is singular and ridge is zero"
            ) from exc
        self._offsets = -0.5 * np.sum(self.means * self._solved_means, axis=0)
        return self

    def predict(self, x_proj) -> int:
        x = np.asarray(x_proj, dtype=float).ravel()
        scores = x @ self._solved_means + self._offsets + self.log_priors
        return int(self.classes[np.argmax(scores)])

    def predict_columns(self, cols) -> np.ndarray:
        cols = _as_points(cols)
        scores = cols.T @ self._solved_means + self._offsets + self.log_priors
        return self.classes[np.argmax(scores, axis=1)]


def lda_classify(train_proj, labels, x_proj, ridge: float = 1e-6) -> int:
    """Fit-and-predict convenience wrapper around LdaModel."""
    return LdaModel(ridge).fit(train_proj, labels).predict(x_proj)
