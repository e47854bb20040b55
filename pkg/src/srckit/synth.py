"""Synthetic datasets with controlled geometry: shared-subspace classes and
angular-cone classes. Both generators are deterministic in their seed and
emit unit-norm columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DataError,
    DimensionMismatch,
    DimensionTooSmall,
    InfeasibleGeometry,
)
from .linalg import normalize_columns


@dataclass
class LabeledDataset:
    """Column observations with integer class labels 1..K.

    features is m x n with one observation per column; labels has one entry
    per column. Every class in 1..K must be represented.
    """

    features: np.ndarray
    labels: np.ndarray
    normalized: bool = False
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)

    @property
    def n_features(self) -> int:
        return self.features.shape[0]

    @property
    def n_obs(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) if self.labels.size else 0

    def validate(self) -> "LabeledDataset":
        if self.features.ndim != 2:
            raise DimensionMismatch("features must be 2-d")
        if self.labels.shape != (self.features.shape[1],):
            raise DimensionMismatch(
                f"{self.features.shape[1]} columns but {self.labels.shape[0]} labels"
            )
        if not np.all(np.isfinite(self.features)):
            raise DataError("features contain NaN or Inf")
        if self.labels.size == 0:
            raise DataError("dataset is empty")
        if self.labels.min() < 1:
            raise DataError("labels must be positive integers")
        present = np.unique(self.labels)
        missing = sorted(set(range(1, self.n_classes + 1)) - set(present.tolist()))
        if missing:
            raise DataError(f"classes {missing} have no observations")
        if self.normalized:
            norms = np.linalg.norm(self.features, axis=0)
            if np.any(np.abs(norms - 1.0) > 1e-10):
                raise DataError("normalized flag set but columns are not unit norm")
        return self

    def class_columns(self, k: int) -> np.ndarray:
        return self.features[:, self.labels == k]


def subspace_model(
    n_classes: int,
    n_features: int,
    subspace_dim: int,
    n_per_class: int,
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> LabeledDataset:
    """Classes living in mutually orthogonal random subspaces.

    Every observation is a standard-normal combination of its class basis
    plus isotropic noise of scale noise_sigma, rescaled to unit norm.
    Requires n_classes * subspace_dim <= n_features so the subspaces can be
    drawn mutually orthogonal.
    """
    if min(n_classes, n_features, subspace_dim, n_per_class) < 1:
        raise ValueError("all size parameters must be positive")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0")
    if n_classes * subspace_dim > n_features:
        raise DimensionTooSmall(
            f"{n_classes} subspaces of dim {subspace_dim} do not fit in "
            f"{n_features} dimensions"
        )
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((n_features, n_classes * subspace_dim)))
    cols = []
    for k in range(n_classes):
        basis = Q[:, k * subspace_dim : (k + 1) * subspace_dim]
        coeffs = rng.standard_normal((subspace_dim, n_per_class))
        block = basis @ coeffs
        if noise_sigma > 0:
            block = block + noise_sigma * rng.standard_normal(block.shape)
        cols.append(block)
    features = normalize_columns(np.hstack(cols))
    labels = np.repeat(np.arange(1, n_classes + 1), n_per_class)
    return LabeledDataset(
        features,
        labels,
        normalized=True,
        name=f"subspace(K={n_classes},m={n_features},dim={subspace_dim})",
        meta={
            "generator": "subspace_model",
            "subspace_dim": subspace_dim,
            "n_per_class": n_per_class,
            "noise_sigma": noise_sigma,
            "seed": seed,
        },
    ).validate()


def cone_model(
    n_classes: int,
    n_features: int,
    within_angle: float,
    between_angle: float,
    n_per_class: int,
    seed: int = 0,
    non_negative: bool = False,
) -> LabeledDataset:
    """Classes confined to angular caps around well-separated unit centers.

    Centers are mutually orthogonal unit vectors (so pairwise center angles
    are pi/2 >= between_angle); each observation sits within within_angle
    of its center, giving every within-class pair an angle <= 2*within_angle
    and every between-class pair an angle >= between_angle - 2*within_angle.
    Those guarantees only separate classes when
    between_angle > 4 * within_angle, otherwise InfeasibleGeometry.

    The cap angle is drawn from a half-normal of scale within_angle/2
    truncated at within_angle (tangent-direction uniform), so the angular
    bound is exact by construction and re-checked after generation.

    non_negative reflects observations into the positive orthant (axis
    centers, absolute values); this preserves the within-cap bound but can
    shrink between-class angles below the stated guarantee.
    """
    if not 0 <= within_angle < between_angle <= np.pi / 2:
        raise ValueError("need 0 <= within_angle < between_angle <= pi/2")
    if min(n_classes, n_features, n_per_class) < 1:
        raise ValueError("all size parameters must be positive")
    if n_classes > n_features:
        raise DimensionTooSmall(
            f"{n_classes} orthogonal centers do not fit in {n_features} dimensions"
        )
    if between_angle - 2 * within_angle <= 2 * within_angle and within_angle > 0.0:
        raise InfeasibleGeometry(
            "separation needs between_angle > 4 * within_angle "
            f"(got {between_angle:.4f} vs {within_angle:.4f})"
        )
    rng = np.random.default_rng(seed)
    if non_negative:
        centers = np.eye(n_features)[:, :n_classes]
    else:
        centers, _ = np.linalg.qr(rng.standard_normal((n_features, n_classes)))

    cols = np.empty((n_features, n_classes * n_per_class))
    labels = np.repeat(np.arange(1, n_classes + 1), n_per_class)
    pos = 0
    for k in range(n_classes):
        c = centers[:, k]
        for _ in range(n_per_class):
            cols[:, pos] = _sample_cap(c, within_angle, rng)
            pos += 1
    if non_negative:
        cols = np.abs(cols)

    # the angular bound is exact by construction; re-check defensively
    # (1e-6 slack: arccos amplifies float noise near cos = 1 to ~1e-7)
    gram = np.abs(cols.T @ centers)
    angles = np.arccos(np.clip(gram[np.arange(cols.shape[1]), labels - 1], 0.0, 1.0))
    if np.any(angles > within_angle + 1e-6):
        raise InfeasibleGeometry("cap sampling produced an out-of-cap observation")

    return LabeledDataset(
        cols,
        labels,
        normalized=True,
        name=f"cone(K={n_classes},m={n_features})",
        meta={
            "generator": "cone_model",
            "within_angle": within_angle,
            "between_angle": between_angle,
            "n_per_class": n_per_class,
            "seed": seed,
            "non_negative": non_negative,
            "cap_distribution": "half-normal(scale=within/2) truncated at within",
        },
    ).validate()


def _sample_cap(center: np.ndarray, radius: float, rng) -> np.ndarray:
    """Unit vector at angle <= radius from center, exact by construction."""
    if radius == 0.0:
        return center.copy()
    while True:
        phi = abs(rng.normal(0.0, radius / 2.0))
        if phi <= radius:
            break
    g = rng.standard_normal(center.shape[0])
    t = g - (center @ g) * center
    tn = np.linalg.norm(t)
    if tn < 1e-12:
        return center.copy()
    return np.cos(phi) * center + np.sin(phi) * (t / tn)
