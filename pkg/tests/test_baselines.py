import numpy as np
import pytest

from srckit.baselines import (
    PCA,
    SPECTRAL,
    LdaModel,
    fit_projection,
    knn_classify,
    lda_classify,
)
from srckit.errors import (
    DimensionTooLarge,
    EmptyTrainingSet,
    NotSquare,
    SingularCovariance,
)


class TestPcaProjection:
    def test_line_through_origin_fully_captured(self, rng):
        direction = np.array([1.0, 2.0, -1.0])
        direction /= np.linalg.norm(direction)
        t = rng.standard_normal(30)
        F = direction[:, None] * t
        proj = fit_projection(F, PCA, 1)
        coords = proj.transform(F)
        recon = proj.basis @ coords + proj.center[:, None]
        assert np.max(np.abs(recon - F)) < 1e-10

    def test_full_rank_preserves_distances(self, rng):
        F = rng.standard_normal((10, 6))
        centered = F - F.mean(axis=1)[:, None]
        d = np.linalg.matrix_rank(centered)
        proj = fit_projection(F, PCA, d)
        Z = proj.transform(F)
        for i in range(6):
            for j in range(6):
                orig = np.linalg.norm(F[:, i] - F[:, j])
                projd = np.linalg.norm(Z[:, i] - Z[:, j])
                assert abs(orig - projd) < 1e-8

    def test_reconstruction_error_non_increasing_in_d(self, rng):
        F = rng.standard_normal((8, 20))
        errs = []
        for d in range(1, 8):
            proj = fit_projection(F, PCA, d)
            recon = proj.basis @ proj.transform(F) + proj.center[:, None]
            errs.append(np.linalg.norm(recon - F))
        assert all(a >= b - 1e-10 for a, b in zip(errs, errs[1:]))

    def test_basis_orthonormal_and_sign_fixed(self, rng):
        F = rng.standard_normal((7, 12))
        proj = fit_projection(F, PCA, 4)
        gram = proj.basis.T @ proj.basis
        assert np.max(np.abs(gram - np.eye(4))) < 1e-8
        for j in range(4):
            i = np.argmax(np.abs(proj.basis[:, j]))
            assert proj.basis[i, j] > 0

    def test_dimension_too_large(self, rng):
        with pytest.raises(DimensionTooLarge):
            fit_projection(rng.standard_normal((4, 6)), PCA, 5)


class TestSpectralProjection:
    def test_psd_gram_reproduced_at_full_dimension(self, rng):
        Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        spectrum = np.array([4.0, 2.5, 1.0, 0.3])
        K = Q @ np.diag(spectrum) @ Q.T
        proj = fit_projection(K, SPECTRAL, 4)
        Z = proj.basis
        assert np.max(np.abs(Z @ Z.T - K)) < 1e-8

    def test_transform_consistent_on_training_relations(self, rng):
        Q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
        K = Q @ np.diag([3.0, 2.0, 1.5, 0.7, 0.2]) @ Q.T
        proj = fit_projection(K, SPECTRAL, 3)
        embedded = proj.transform(K)  # each training column is its relation vector
        assert np.max(np.abs(embedded - proj.train_coordinates())) < 1e-8

    def test_rejects_rectangular(self, rng):
        with pytest.raises(NotSquare):
            fit_projection(rng.standard_normal((4, 5)), SPECTRAL, 2)


class TestKnn:
    def test_exact_training_point(self, rng):
        P = rng.standard_normal((3, 10))
        labels = (np.arange(10) % 3) + 1
        assert knn_classify(P, labels, P[:, 4], k=1) == labels[4]

    def test_majority_vote(self):
        P = np.concatenate([np.zeros(5), np.ones(4)])[None, :]
        labels = np.array([1] * 5 + [2] * 4)
        x = np.array([0.5])
        assert knn_classify(P, labels, x, k=9) == 1

    def test_default_k_is_nine(self, rng):
        P = rng.standard_normal((2, 20))
        labels = (np.arange(20) % 2) + 1
        x = rng.standard_normal(2)
        assert knn_classify(P, labels, x) == knn_classify(P, labels, x, k=9)

    def test_distance_tie_prefers_lower_index(self):
        P = np.array([[1.0, -1.0]])
        labels = np.array([2, 1])
        assert knn_classify(P, labels, np.array([0.0]), k=1) == 2

    def test_vote_tie_prefers_lower_class(self):
        P = np.array([[0.0, 1.0]])
        labels = np.array([3, 1])
        assert knn_classify(P, labels, np.array([0.5]), k=2) == 1

    def test_empty_training_raises(self):
        with pytest.raises(EmptyTrainingSet):
            knn_classify(np.zeros((2, 0)), np.zeros(0, dtype=int), np.zeros(2), k=1)


class TestLda:
    def test_separated_blobs_zero_errors(self, rng):
        n = 100
        a = rng.standard_normal((2, n)) + np.array([[0.0], [0.0]])
        b = rng.standard_normal((2, n)) + np.array([[10.0], [0.0]])
        train = np.hstack([a[:, :50], b[:, :50]])
        labels = np.array([1] * 50 + [2] * 50)
        model = LdaModel().fit(train, labels)
        test = np.hstack([a[:, 50:], b[:, 50:]])
        truth = np.array([1] * 50 + [2] * 50)
        assert np.all(model.predict_columns(test) == truth)

    def test_identical_distributions_near_chance(self, rng):
        train = rng.standard_normal((3, 400))
        labels = (np.arange(400) % 2) + 1
        model = LdaModel().fit(train, labels)
        test = rng.standard_normal((3, 1000))
        truth = (np.arange(1000) % 2) + 1
        acc = np.mean(model.predict_columns(test) == truth)
        assert 0.4 <= acc <= 0.6

    def test_degenerate_covariance_with_ridge(self):
        train = np.ones((2, 6))
        labels = np.array([1, 1, 2, 2, 3, 3])
        assert lda_classify(train, labels, np.ones(2), ridge=1e-6) == 1

    def test_singular_covariance_without_ridge(self):
        train = np.ones((2, 6))
        labels = np.array([1, 1, 2, 2, 3, 3])
        with pytest.raises(SingularCovariance):
            lda_classify(train, labels, np.ones(2), ridge=0.0)

    def test_affine_invariance_with_zero_ridge(self, rng):
        train = rng.standard_normal((3, 60))
        labels = (np.arange(60) % 3) + 1
        tests = rng.standard_normal((3, 25))
        A = rng.standard_normal((3, 3)) + 3 * np.eye(3)
        shift = rng.standard_normal(3)
        base = LdaModel(ridge=0.0).fit(train, labels)
        moved = LdaModel(ridge=0.0).fit(A @ train + shift[:, None], labels)
        for j in range(25):
            assert base.predict(tests[:, j]) == moved.predict(A @ tests[:, j] + shift)

    def test_prediction_restricted_to_present_classes(self, rng):
        train = rng.standard_normal((2, 8))
        labels = np.array([1, 1, 1, 1, 3, 3, 3, 3])
        model = LdaModel().fit(train, labels)
        pred = model.predict_columns(rng.standard_normal((2, 20)))
        assert set(np.unique(pred)) <= {1, 3}
