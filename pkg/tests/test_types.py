import numpy as np
import pytest

from ktembed.types import (
    UNREVEALED,
    DistanceKernel,
    Embedding,
    EmbedConfig,
    FeatureMatrix,
    LabelVector,
    Triplet,
    TripletSet,
    check_ids,
    index_of,
)


class TestIds:
    def test_duplicates_rejected(self):
        with pytest.raises(ValueError, match="duplicate id"):
            check_ids(["a", "b", "a"])

    def test_empty_id_rejected(self):
        with pytest.raises(ValueError):
            check_ids(["a", ""])

    def test_index_roundtrip(self):
        idx = index_of(["x", "y", "z"])
        assert idx == {"x": 0, "y": 1, "z": 2}


class TestFeatureMatrix:
    def test_basic(self):
        f = FeatureMatrix(["a", "b"], [[0.0, 0.0], [3.0, 4.0]])
        assert f.n == 2
        assert f.values.shape == (2, 2)

    def test_readonly(self):
        f = FeatureMatrix(["a", "b"], [[1.0], [2.0]])
        with pytest.raises(ValueError):
            f.values[0, 0] = 9.0

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            FeatureMatrix(["a"], [[np.nan]])

    def test_row_mismatch(self):
        with pytest.raises(ValueError):
            FeatureMatrix(["a", "b", "c"], [[1.0], [2.0]])


class TestDistanceKernel:
    def test_symmetrizes_small_noise(self):
        d = np.array([[0.0, 1.0], [1.0 + 1e-12, 0.0]])
        k = DistanceKernel(["a", "b"], d)
        assert k.dist[0, 1] == k.dist[1, 0]

    def test_rejects_large_asymmetry(self):
        d = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(ValueError, match="asymmetr"):
            DistanceKernel(["a", "b"], d)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            DistanceKernel(["a", "b"], np.array([[0.0, -1.0], [-1.0, 0.0]]))

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(ValueError):
            DistanceKernel(["a", "b"], np.array([[0.5, 1.0], [1.0, 0.0]]))


class TestTriplets:
    def test_degenerate_rejected(self):
        for bad in [(0, 0, 1), (0, 1, 1), (1, 0, 1)]:
            with pytest.raises(ValueError):
                Triplet(*bad)

    def test_set_iteration(self):
        t = TripletSet(np.array([[0, 1, 2], [3, 4, 5]]))
        assert len(t) == 2
        assert list(t)[0] == Triplet(0, 1, 2)

    def test_from_triplets(self):
        t = TripletSet.from_triplets([Triplet(0, 1, 2)])
        assert t.indices.tolist() == [[0, 1, 2]]

    def test_empty(self):
        t = TripletSet.empty()
        assert len(t) == 0
        t.check_bounds(0)  # nothing to violate

    def test_bounds(self):
        t = TripletSet(np.array([[0, 1, 5]]))
        with pytest.raises(ValueError):
            t.check_bounds(5)
        t.check_bounds(6)


class TestLabelVector:
    def test_revealed(self):
        v = LabelVector(np.array([0, 1, UNREVEALED]))
        assert v.revealed().tolist() == [True, True, False]

    def test_below_sentinel_rejected(self):
        with pytest.raises(ValueError):
            LabelVector(np.array([0, -2]))


class TestEmbedConfig:
    def test_defaults_valid(self):
        cfg = EmbedConfig()
        assert cfg.triplet_weight is None
        assert cfg.total_iters == 300
        assert cfg.exaggeration_iters == 100

    def test_weight_range(self):
        with pytest.raises(ValueError):
            EmbedConfig(triplet_weight=1.5)

    def test_perplexity_floor(self):
        with pytest.raises(ValueError):
            EmbedConfig(perplexity=1.0)

    def test_exaggeration_cannot_exceed_total(self):
        with pytest.raises(ValueError):
            EmbedConfig(total_iters=50, exaggeration_iters=100)


def test_embedding_shape():
    y = Embedding(["a", "b", "c"], np.zeros((3, 2)))
    assert y.n == 3 and y.d == 2
    with pytest.raises(ValueError):
        Embedding(["a"], np.zeros((2, 2)))
