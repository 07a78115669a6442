import numpy as np
import pytest

from mstdiag import Clustering, Dataset, Embedding


@pytest.fixture
def tiny_session(tmp_path):
    """Minimal 3-row session files: data, embedding, labels (+meta)."""
    data = tmp_path / "data.csv"
    data.write_text("id,f1,f2\nr0,0.0,0.0\nr1,1.0,0.0\nr2,0.0,2.0\n")
    emb = tmp_path / "embedding.csv"
    emb.write_text("id,x,y\nr0,0.0,0.0\nr1,1.0,0.0\nr2,0.0,1.0\n")
    labels = tmp_path / "labels.csv"
    labels.write_text("id,label\nr0,a\nr1,a\nr2,b\n")
    meta = tmp_path / "meta.csv"
    meta.write_text("id,tissue,score\nr0,blood,1.5\nr1,blood,2.5\nr2,skin,3.5\n")
    return {"data": data, "embedding": emb, "labels": labels, "meta": meta}


def random_dataset(rng, n, p):
    values = rng.normal(size=(n, p))
    return Dataset(tuple(str(i) for i in range(n)), tuple(f"f{j}" for j in range(p)), values)


def two_blob_dataset(rng, n_per=20, p=4, gap=8.0):
    a = rng.normal(size=(n_per, p))
    b = rng.normal(size=(n_per, p))
    b[:, 0] += gap
    values = np.vstack([a, b])
    dataset = Dataset(
        tuple(str(i) for i in range(2 * n_per)),
        tuple(f"f{j}" for j in range(p)),
        values,
    )
    clustering = Clustering(tuple(["a"] * n_per + ["b"] * n_per))
    embedding = Embedding(values[:, :2])
    return dataset, clustering, embedding
