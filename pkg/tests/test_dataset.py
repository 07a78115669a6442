import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mstdiag import Clustering, Dataset, IngestionError, global_pca, load_session
from mstdiag.dataset import (
    pca_scores,
    read_data_csv,
    write_data_csv,
    write_embedding_csv,
    write_labels_csv,
    write_meta_csv,
)

from conftest import random_dataset


def test_minimal_session_loads(tiny_session):
    dataset, embedding, clustering, meta = load_session(
        tiny_session["data"],
        tiny_session["embedding"],
        tiny_session["labels"],
        tiny_session["meta"],
    )
    assert dataset.n == 3 and dataset.p == 2
    assert clustering.k == 2
    assert embedding.n == 3
    assert meta.column_order == ("tissue", "score")
    assert "tissue" in meta.categorical and "score" in meta.numeric


def test_label_count_mismatch(tiny_session, tmp_path):
    bad = tmp_path / "labels4.csv"
    bad.write_text("id,label\nr0,a\nr1,a\nr2,b\nr3,b\n")
    with pytest.raises(IngestionError, match="4 rows"):
        load_session(tiny_session["data"], tiny_session["embedding"], bad)


def test_empty_cell_names_row_and_column(tmp_path):
    bad = tmp_path / "data.csv"
    bad.write_text("id,f1,f2\nr0,0.0,0.0\nr1,,1.0\n")
    with pytest.raises(IngestionError, match=r"row 2.*'f1'"):
        read_data_csv(bad)


def test_unparseable_cell_names_row_and_column(tmp_path):
    bad = tmp_path / "data.csv"
    bad.write_text("id,f1\nr0,0.0\nr1,oops\n")
    with pytest.raises(IngestionError, match=r"'oops' at row 2, column 'f1'"):
        read_data_csv(bad)


def test_scientific_notation_parses(tmp_path):
    f = tmp_path / "data.csv"
    f.write_text("f1\n1e-3\n-2.5E+2\n")
    dataset = read_data_csv(f)
    assert dataset.values[0, 0] == 1e-3
    assert dataset.values[1, 0] == -250.0


def test_id_columns_must_agree(tiny_session, tmp_path):
    other = tmp_path / "labels_other.csv"
    other.write_text("id,label\nz0,a\nz1,a\nz2,b\n")
    with pytest.raises(IngestionError, match="id columns"):
        load_session(tiny_session["data"], tiny_session["embedding"], other)


def test_single_class_rejected(tiny_session, tmp_path):
    one = tmp_path / "labels_one.csv"
    one.write_text("id,label\nr0,a\nr1,a\nr2,a\n")
    with pytest.raises(IngestionError, match="at least 2 classes"):
        load_session(tiny_session["data"], tiny_session["embedding"], one)


def test_fewer_than_two_rows_rejected(tmp_path):
    f = tmp_path / "data.csv"
    f.write_text("f1\n1.0\n")
    with pytest.raises(IngestionError, match="at least 2"):
        read_data_csv(f)


def test_duplicate_row_ids_rejected(tmp_path):
    f = tmp_path / "data.csv"
    f.write_text("id,f1\nr0,1.0\nr0,2.0\n")
    with pytest.raises(IngestionError, match="not unique"):
        read_data_csv(f)


def test_roundtrip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(3)
    dataset = random_dataset(rng, 17, 5)
    out = tmp_path / "out.csv"
    write_data_csv(dataset, out)
    again = read_data_csv(out)
    assert again.row_ids == dataset.row_ids
    assert again.feature_names == dataset.feature_names
    assert np.array_equal(again.values, dataset.values)
    # a second pass through text is byte-stable
    out2 = tmp_path / "out2.csv"
    write_data_csv(again, out2)
    assert out.read_bytes() == out2.read_bytes()


def test_full_session_roundtrip(tiny_session, tmp_path):
    dataset, embedding, clustering, meta = load_session(
        tiny_session["data"],
        tiny_session["embedding"],
        tiny_session["labels"],
        tiny_session["meta"],
    )
    paths = {k: tmp_path / f"rt_{k}.csv" for k in ("data", "embedding", "labels", "meta")}
    write_data_csv(dataset, paths["data"])
    write_embedding_csv(embedding, dataset.row_ids, paths["embedding"])
    write_labels_csv(clustering, dataset.row_ids, paths["labels"])
    write_meta_csv(meta, dataset.row_ids, paths["meta"])
    d2, e2, c2, m2 = load_session(
        paths["data"], paths["embedding"], paths["labels"], paths["meta"]
    )
    assert np.array_equal(d2.values, dataset.values)
    assert np.array_equal(e2.coords, embedding.coords)
    assert c2.labels == clustering.labels
    assert m2.categorical == meta.categorical
    for name in meta.numeric:
        assert np.array_equal(m2.numeric[name], meta.numeric[name])


class TestGlobalPCA:
    def test_full_basis_retains_everything(self):
        rng = np.random.default_rng(0)
        dataset = random_dataset(rng, 12, 6)
        _, retained = global_pca(dataset, min(dataset.n - 1, dataset.p))
        assert retained == pytest.approx(1.0, abs=1e-9)

    def test_rank_one_data(self):
        t = np.linspace(0, 1, 15)
        values = np.outer(t, [1.0, 2.0, -1.0])
        dataset = Dataset(tuple(map(str, range(15))), ("a", "b", "c"), values)
        _, retained = global_pca(dataset, 1)
        assert retained == pytest.approx(1.0, abs=1e-9)

    def test_matches_eigendecomposition_oracle(self):
        rng = np.random.default_rng(42)
        dataset = random_dataset(rng, 100, 10)
        _, retained = global_pca(dataset, 5)
        # independent oracle: eigenvalues of the sample covariance
        cov = np.cov(dataset.values.T)
        eigvals = np.sort(np.linalg.eigvalsh(cov))[::-1]
        expected = eigvals[:5].sum() / eigvals.sum()
        assert retained == pytest.approx(expected, abs=1e-9)

    def test_output_shape_and_centering(self):
        rng = np.random.default_rng(1)
        dataset = random_dataset(rng, 30, 8)
        reduced, _ = global_pca(dataset, 3)
        assert reduced.values.shape == (30, 3)
        assert np.all(np.abs(reduced.values.mean(axis=0)) < 1e-9)

    def test_retained_non_decreasing_in_dims(self):
        rng = np.random.default_rng(2)
        dataset = random_dataset(rng, 25, 7)
        fractions = [global_pca(dataset, d)[1] for d in range(1, 8)]
        assert all(b >= a - 1e-12 for a, b in zip(fractions, fractions[1:]))

    @pytest.mark.parametrize("dims", [0, -1, 100])
    def test_dims_out_of_range(self, dims):
        rng = np.random.default_rng(4)
        dataset = random_dataset(rng, 10, 5)
        with pytest.raises(ValueError):
            global_pca(dataset, dims)


@settings(max_examples=20, deadline=None)
@given(
    n=st.integers(min_value=3, max_value=12),
    p=st.integers(min_value=2, max_value=6),
    seed=st.integers(min_value=0, max_value=10_000),
)
def test_pca_scores_preserve_total_variance(n, p, seed):
    rng = np.random.default_rng(seed)
    values = rng.normal(size=(n, p))
    dims = min(n - 1, p)
    scores, _, _, retained = pca_scores(values, dims)
    assert retained == pytest.approx(1.0, abs=1e-9)
    centered = values - values.mean(axis=0)
    assert np.sum(scores**2) == pytest.approx(np.sum(centered**2), rel=1e-9)


def test_clustering_classes_sorted_and_complete():
    clustering = Clustering(("b", "a", "b", "a", "c"))
    assert list(clustering.classes) == ["a", "b", "c"]
    assert clustering.classes["b"].tolist() == [0, 2]
    assert clustering.k == 3
