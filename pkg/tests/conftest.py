import numpy as np
import pytest

from ktembed import FeatureMatrix, LabelVector, euclidean_kernel


def make_blobs(n_per, k, d, sep=10.0, spread=1.0, seed=0):
    """k Gaussian blobs on a seeded random layout, centers sep apart (scaled
    so the nearest pair of centers is at least `sep`)."""
    rng = np.random.default_rng(seed)
    centers = rng.normal(size=(k, d))
    if k > 1:
        diffs = centers[:, None, :] - centers[None, :, :]
        dists = np.sqrt((diffs**2).sum(-1))
        np.fill_diagonal(dists, np.inf)
        centers *= sep / dists.min()
    points = np.concatenate(
        [c + spread * rng.normal(size=(n_per, d)) for c in centers]
    )
    labels = np.repeat(np.arange(k), n_per)
    ids = [f"p{i}" for i in range(n_per * k)]
    return FeatureMatrix(ids, points), LabelVector(labels)


@pytest.fixture
def blob_kernel():
    feats, labels = make_blobs(10, 3, 4, sep=12.0, seed=3)
    return euclidean_kernel(feats), labels


@pytest.fixture
def rng():
    return np.random.default_rng(0)
