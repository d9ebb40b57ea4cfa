import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kdesampling.dataset import (
    Dataset,
    DatasetError,
    apply_standardizer,
    fit_standardizer,
    load_csv,
    make_synthetic,
    meta,
    stratified_split,
    write_csv,
)


def _write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_load_csv_maps_positive_label(tmp_path):
    path = _write(tmp_path, "f1,f2,y\n1,2,a\n3,4,a\n5,6,a\n7,8,b\n")
    data = load_csv(path, "y", "b")
    assert data.labels.tolist() == [0, 0, 0, 1]
    assert data.features.tolist() == [[1, 2], [3, 4], [5, 6], [7, 8]]
    assert data.feature_names == ("f1", "f2")
    assert data.class_names == ("a", "b")


def test_load_csv_label_by_index(tmp_path):
    path = _write(tmp_path, "y,f1\nneg,0.5\npos,1.5\n")
    data = load_csv(path, 0, "pos")
    assert data.labels.tolist() == [0, 1]
    assert data.features[:, 0].tolist() == [0.5, 1.5]


def test_load_csv_header_only_is_empty(tmp_path):
    path = _write(tmp_path, "f1,f2,y\n")
    with pytest.raises(DatasetError, match="empty dataset"):
        load_csv(path, "y", "1")


def test_load_csv_reports_bad_cell(tmp_path):
    path = _write(tmp_path, "f1,f2,y\n1,2,0\n1,2,1\n1,abc,0\n")
    with pytest.raises(DatasetError, match=r"row 3, column 2"):
        load_csv(path, "y", "1")


def test_load_csv_missing_file(tmp_path):
    with pytest.raises(DatasetError, match="no such file"):
        load_csv(tmp_path / "nope.csv", "y", "1")


@pytest.mark.parametrize("labels", [["a", "a"], ["a", "b", "c"]])
def test_load_csv_needs_two_label_values(tmp_path, labels):
    rows = "".join(f"{i},{lab}\n" for i, lab in enumerate(labels))
    path = _write(tmp_path, "f,y\n" + rows)
    with pytest.raises(DatasetError, match="exactly 2 distinct"):
        load_csv(path, "y", "a")


def test_load_csv_rejects_missing_label_column(tmp_path):
    path = _write(tmp_path, "f,y\n1,0\n2,1\n")
    with pytest.raises(DatasetError, match="not in header"):
        load_csv(path, "target", "1")


def test_csv_round_trip(tmp_path, rng):
    data = make_synthetic(30, 7, 4, 1.0, rng)
    path = tmp_path / "rt.csv"
    write_csv(data, path)
    back = load_csv(path, "label", "1")
    np.testing.assert_allclose(back.features, data.features, rtol=0, atol=1e-12)
    assert np.array_equal(back.labels, data.labels)


def test_dataset_rejects_nan():
    with pytest.raises(DatasetError, match="NaN"):
        Dataset("bad", np.array([[np.nan]]), np.array([0]))


def test_meta_balanced_and_skewed():
    data = Dataset("b", np.zeros((10, 2)), np.array([0] * 5 + [1] * 5))
    assert meta(data).imbalance_ratio == 1.0
    skewed = Dataset("m", np.zeros((43, 1)), np.array([0] * 42 + [1]))
    m = meta(skewed)
    assert m.imbalance_ratio == 42.0
    assert m.display_ratio() == "42:1"


def test_meta_abalone_shape():
    # 4177 rows, 10 features, 391 positives -> 3786/391 = 9.68 -> "9.7:1"
    labels = np.array([0] * 3786 + [1] * 391)
    m = meta(Dataset("abalone", np.zeros((4177, 10)), labels))
    assert (m.n_samples, m.n_features, m.display_ratio()) == (4177, 10, "9.7:1")


def test_meta_single_class():
    with pytest.raises(DatasetError, match="single class"):
        meta(Dataset("one", np.zeros((3, 1)), np.zeros(3)))


def test_split_counts_round_half_up():
    data = make_synthetic(100, 10, 3, 1.0, np.random.default_rng(0))
    pair = stratified_split(data, 0.25, np.random.default_rng(1))
    assert pair.test.class_counts() == (25, 3)
    assert pair.train.class_counts() == (75, 7)


def test_split_minimum_one_per_class():
    data = make_synthetic(4, 4, 2, 1.0, np.random.default_rng(0))
    pair = stratified_split(data, 0.25, np.random.default_rng(1))
    assert pair.test.class_counts() == (1, 1)


def test_split_is_deterministic_and_disjoint():
    data = make_synthetic(50, 9, 3, 1.0, np.random.default_rng(0))
    a = stratified_split(data, 0.3, np.random.default_rng(5))
    b = stratified_split(data, 0.3, np.random.default_rng(5))
    assert np.array_equal(a.test.features, b.test.features)
    rows = {tuple(r) for r in data.features}
    train_rows = {tuple(r) for r in a.train.features}
    test_rows = {tuple(r) for r in a.test.features}
    assert not train_rows & test_rows
    assert train_rows | test_rows == rows


def test_split_rejects_tiny_class():
    data = Dataset("t", np.arange(5.0)[:, None], np.array([0, 0, 0, 0, 1]))
    with pytest.raises(DatasetError, match="at least 2"):
        stratified_split(data, 0.25, np.random.default_rng(0))


@given(
    n_maj=st.integers(2, 300),
    n_min=st.integers(2, 60),
    fraction=st.floats(0.05, 0.95),
    seed=st.integers(0, 2**32 - 1),
)
def test_split_proportions_sweep(n_maj, n_min, fraction, seed):
    labels = np.array([0] * n_maj + [1] * n_min)
    data = Dataset("s", np.arange(labels.size, dtype=float)[:, None], labels)
    pair = stratified_split(data, fraction, np.random.default_rng(seed))
    for label, count in ((0, n_maj), (1, n_min)):
        expected = min(max(math.floor(count * fraction + 0.5), 1), count - 1)
        assert int(np.sum(pair.test.labels == label)) == expected
        assert int(np.sum(pair.train.labels == label)) == count - expected


def test_standardizer_population_std():
    data = Dataset("s", np.array([[2.0, 5.0], [4.0, 5.0], [6.0, 5.0]]), np.array([0, 0, 1]))
    std = fit_standardizer(data)
    z = apply_standardizer(std, data).features
    assert std.means.tolist() == [4.0, 5.0]
    expected = 2.0 / math.sqrt(8.0 / 3.0)
    np.testing.assert_allclose(z[:, 0], [-expected, 0.0, expected], atol=1e-12)
    assert math.isclose(expected, 1.2247, abs_tol=1e-4)
    assert z[:, 1].tolist() == [0.0, 0.0, 0.0]
    assert std.constant.tolist() == [False, True]


def test_standardizer_fit_data_is_zscored(rng):
    data = make_synthetic(80, 20, 5, 2.0, rng)
    z = apply_standardizer(fit_standardizer(data), data).features
    np.testing.assert_allclose(z.mean(axis=0), 0.0, atol=1e-9)
    np.testing.assert_allclose(z.std(axis=0), 1.0, atol=1e-9)


def test_standardizer_is_the_affine_map_on_unseen_data(rng):
    train = make_synthetic(40, 10, 3, 1.0, rng)
    other = make_synthetic(15, 5, 3, 1.0, rng)
    std = fit_standardizer(train)
    z = apply_standardizer(std, other).features
    direct = (other.features - train.features.mean(axis=0)) / train.features.std(axis=0)
    np.testing.assert_allclose(z, direct, rtol=1e-12, atol=1e-12)


def test_make_synthetic_counts_and_determinism():
    a = make_synthetic(1000, 50, 10, 2.0, np.random.default_rng(7))
    b = make_synthetic(1000, 50, 10, 2.0, np.random.default_rng(7))
    assert a.n_samples == 1050
    assert meta(a).imbalance_ratio == 20.0
    assert a.features.tobytes() == b.features.tobytes()


@pytest.mark.parametrize("sep", [0.0, 1.5, 3.0])
def test_make_synthetic_minority_mean(sep):
    n_min = 400
    data = make_synthetic(100, n_min, 3, sep, np.random.default_rng(3))
    mean0 = data.features[data.labels == 1, 0].mean()
    assert abs(mean0 - sep) < 4 / math.sqrt(n_min)
