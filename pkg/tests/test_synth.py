import numpy as np
import pytest

from srckit.errors import DataError, DimensionTooSmall, InfeasibleGeometry
from srckit.linalg import numerical_rank, principal_angle
from srckit.synth import LabeledDataset, cone_model, subspace_model


def pairwise_angles(A, B):
    cos = np.clip(np.abs(A.T @ B), 0.0, 1.0)
    return np.arccos(cos)


class TestLabeledDataset:
    def test_validate_rejects_missing_class(self):
        with pytest.raises(DataError):
            LabeledDataset(np.eye(3), np.array([1, 3, 3])).validate()

    def test_validate_rejects_bad_norm_flag(self):
        with pytest.raises(DataError):
            LabeledDataset(2 * np.eye(2), np.array([1, 2]), normalized=True).validate()

    def test_class_columns(self):
        ds = LabeledDataset(np.eye(3), np.array([1, 2, 1])).validate()
        assert ds.class_columns(1).shape == (3, 2)
        assert ds.n_classes == 2


class TestSubspaceModel:
    def test_seed_determinism(self):
        a = subspace_model(3, 20, 2, 5, 0.05, seed=7)
        b = subspace_model(3, 20, 2, 5, 0.05, seed=7)
        assert np.array_equal(a.features, b.features)
        assert np.array_equal(a.labels, b.labels)

    def test_noiseless_columns_lie_in_own_subspace(self):
        data = subspace_model(3, 15, 4, 6, noise_sigma=0.0, seed=1)
        for k in range(1, 4):
            block = data.class_columns(k)
            for j in range(block.shape[1]):
                assert principal_angle(block[:, j], block) < 1e-6

    def test_orthogonal_between_class_angles(self):
        data = subspace_model(2, 10, 3, 5, noise_sigma=0.0, seed=2)
        other = data.class_columns(2)
        for j in range(5):
            assert principal_angle(data.class_columns(1)[:, j], other) == pytest.approx(
                np.pi / 2, abs=1e-8
            )

    def test_class_block_rank(self):
        data = subspace_model(3, 20, 4, 7, noise_sigma=0.0, seed=3)
        for k in range(1, 4):
            assert numerical_rank(data.class_columns(k)) == 4
        thin = subspace_model(3, 20, 4, 2, noise_sigma=0.0, seed=3)
        for k in range(1, 4):
            assert numerical_rank(thin.class_columns(k)) == 2

    def test_dimension_too_small(self):
        with pytest.raises(DimensionTooSmall):
            subspace_model(4, 10, 3, 5)

    def test_unit_columns(self):
        data = subspace_model(2, 12, 3, 4, noise_sigma=0.3, seed=4)
        assert np.allclose(np.linalg.norm(data.features, axis=0), 1.0, atol=1e-10)


class TestConeModel:
    def test_zero_width_copies_center(self):
        data = cone_model(3, 10, 0.0, np.deg2rad(90), 4, seed=0)
        for k in range(1, 4):
            block = data.class_columns(k)
            assert np.allclose(block - block[:, :1], 0.0, atol=1e-15)

    def test_seed_determinism(self):
        a = cone_model(2, 8, np.deg2rad(5), np.deg2rad(80), 6, seed=9)
        b = cone_model(2, 8, np.deg2rad(5), np.deg2rad(80), 6, seed=9)
        assert np.array_equal(a.features, b.features)

    def test_geometric_guarantees_exhaustively(self):
        within = np.deg2rad(5.0)
        between = np.deg2rad(85.0)
        data = cone_model(3, 12, within, between, 10, seed=11)
        for k in range(1, 4):
            own = data.class_columns(k)
            ang = pairwise_angles(own, own)
            assert np.max(ang) <= 2 * within + 1e-6
            for k2 in range(k + 1, 4):
                cross = pairwise_angles(own, data.class_columns(k2))
                assert np.min(cross) >= between - 2 * within - 1e-6

    def test_infeasible_geometry(self):
        with pytest.raises(InfeasibleGeometry):
            cone_model(2, 10, np.deg2rad(20), np.deg2rad(70), 4)

    def test_non_negative_variant(self):
        data = cone_model(3, 9, np.deg2rad(5), np.deg2rad(90), 6, seed=2, non_negative=True)
        assert np.all(data.features >= 0)
        within = np.deg2rad(5.0)
        centers = np.eye(9)[:, :3]
        for k in range(1, 4):
            block = data.class_columns(k)
            ang = pairwise_angles(centers[:, k - 1 : k], block)
            assert np.max(ang) <= within + 1e-6

    def test_too_many_classes(self):
        with pytest.raises(DimensionTooSmall):
            cone_model(5, 3, np.deg2rad(1), np.deg2rad(80), 2)
