import numpy as np
import pytest

from ktembed import (
    DistanceKernel,
    Embedding,
    FeatureMatrix,
    ParseError,
    TripletSet,
    load_embedding,
    load_features,
    load_kernel,
    load_labeled_ids,
    load_labels,
    load_triplets,
    save_embedding,
    save_features,
    save_kernel,
    save_triplets,
)
from ktembed.io import embedding_csv, triplets_csv


def test_features_parse(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("id,f0,f1\na,0,0\nb,3,4\n")
    f = load_features(p)
    assert f.n == 2
    assert f.values.tolist() == [[0.0, 0.0], [3.0, 4.0]]


def test_features_empty_file(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("")
    with pytest.raises(ParseError, match="no rows"):
        load_features(p)


def test_features_nan_names_row(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("id,f0\na,1\nb,nan\n")
    with pytest.raises(ParseError, match="3"):
        load_features(p)


def test_features_ragged_row(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("id,f0,f1\na,1,2\nb,1\n")
    with pytest.raises(ParseError):
        load_features(p)


def test_features_roundtrip(tmp_path, rng):
    f = FeatureMatrix(["a", "b", "c"], rng.normal(size=(3, 4)))
    path = tmp_path / "f.csv"
    save_features(f, path)
    back = load_features(path)
    assert back.ids == f.ids
    np.testing.assert_array_equal(back.values, f.values)


def test_triplets_parse(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("i,j,k\na,b,c\n")
    t = load_triplets(p, ["a", "b", "c"])
    assert t.indices.tolist() == [[0, 1, 2]]


def test_triplets_degenerate(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("i,j,k\na,a,b\n")
    with pytest.raises(ParseError, match="degenerate"):
        load_triplets(p, ["a", "b"])


def test_triplets_unknown_id(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("i,j,k\na,b,z\n")
    with pytest.raises(ParseError, match="unknown id"):
        load_triplets(p, ["a", "b", "c"])


def test_triplets_roundtrip(tmp_path):
    ids = ["u", "v", "w", "x"]
    t = TripletSet(np.array([[0, 1, 2], [3, 2, 0]]))
    path = tmp_path / "t.csv"
    save_triplets(t, ids, path)
    back = load_triplets(path, ids)
    np.testing.assert_array_equal(back.indices, t.indices)


def test_empty_triplet_file_roundtrip(tmp_path):
    path = tmp_path / "t.csv"
    save_triplets(TripletSet.empty(), ["a"], path)
    assert len(load_triplets(path, ["a"])) == 0


def test_embedding_roundtrip_exact(tmp_path, rng):
    y = Embedding(["a", "b", "c"], rng.normal(size=(3, 2)))
    path = tmp_path / "y.csv"
    save_embedding(y, path)
    back = load_embedding(path)
    # %.17g repr is lossless for doubles
    np.testing.assert_array_equal(back.coords, y.coords)


def test_kernel_roundtrip_and_comment(tmp_path, rng):
    pts = rng.normal(size=(4, 3))
    d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
    k = DistanceKernel(["a", "b", "c", "d"], d)
    path = tmp_path / "k.csv"
    save_kernel(k, path, comment="shift 1.25")
    assert path.read_text().startswith("# shift 1.25\n")
    back = load_kernel(path)
    np.testing.assert_array_equal(back.dist, k.dist)


def test_kernel_negative_entry(tmp_path):
    p = tmp_path / "k.csv"
    p.write_text("a,b\n0,-1\n-1,0\n")
    with pytest.raises(ParseError):
        load_kernel(p)


def test_missing_file_names_path(tmp_path):
    with pytest.raises(ParseError, match="nope.csv"):
        load_features(tmp_path / "nope.csv")


def test_labels_partial_reveal(tmp_path):
    p = tmp_path / "l.csv"
    p.write_text("id,label\nb,dog\nc,cat\n")
    v = load_labels(p, ["a", "b", "c"])
    assert v.labels.tolist() == [-1, 0, 1]


def test_labels_unknown_id(tmp_path):
    p = tmp_path / "l.csv"
    p.write_text("id,label\nz,dog\n")
    with pytest.raises(ParseError, match="unknown id"):
        load_labels(p, ["a"])


def test_labeled_ids_define_universe(tmp_path):
    p = tmp_path / "l.csv"
    p.write_text("id,label\nx,A\ny,A\nz,B\n")
    ids, v = load_labeled_ids(p)
    assert ids == ["x", "y", "z"]
    assert v.labels.tolist() == [0, 0, 1]


def test_csv_string_emitters():
    y = Embedding(["a", "b"], np.array([[1.0, 2.0], [3.0, 4.0]]))
    text = embedding_csv(y)
    assert text.splitlines()[0] == "id,x0,x1"
    assert triplets_csv(TripletSet.empty(), ["a", "b"]) == "i,j,k\n"
