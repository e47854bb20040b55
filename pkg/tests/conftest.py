import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from srckit.linalg import normalize_columns
from srckit.synth import LabeledDataset


def random_unit_columns(rng, m, n):
    return normalize_columns(rng.standard_normal((m, n)))


def random_unit_vector(rng, m):
    v = rng.standard_normal(m)
    return v / np.linalg.norm(v)


def random_dataset(rng, m, n, n_classes, name="random"):
    """Gaussian unit columns with round-robin labels (every class present)."""
    labels = (np.arange(n) % n_classes) + 1
    return LabeledDataset(
        random_unit_columns(rng, m, n), labels, normalized=True, name=name
    ).validate()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
