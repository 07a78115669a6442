"""Bundled synthetic data generators used by the experiments, the test
suite, and the demo session writer."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .dataset import Clustering, Dataset, Embedding, MetaTable, pca_scores
from .dataset import write_data_csv, write_embedding_csv, write_labels_csv, write_meta_csv


def gaussian_mixture(
    n: int = 1000,
    p: int = 300,
    k: int = 10,
    center_sd: float = 2.0,
    seed: int = 0,
) -> tuple[np.ndarray, Clustering]:
    """Balanced spherical Gaussian mixture with unit within-cluster spread.

    Cluster centers are drawn i.i.d. N(0, center_sd^2) per coordinate, which
    keeps clusters well separated along their connecting directions for the
    default scale."""
    rng = np.random.default_rng(seed)
    centers = rng.normal(0.0, center_sd, size=(k, p))
    assignments = np.arange(n) % k
    values = centers[assignments] + rng.normal(0.0, 1.0, size=(n, p))
    labels = tuple(f"c{j}" for j in assignments)
    return values, Clustering(labels)


def box_pair(c: float, p: int, n_per: int = 50, seed: int = 0) -> tuple[np.ndarray, Clustering]:
    """Two uniform hyperrectangular samples separated by 2c along the first axis.

    Group one fills [-2, -c] x [-1, 1]^(p-1), group two fills [c, 2] x
    [-1, 1]^(p-1); at c = 0 the union is a single box."""
    if not 0.0 <= c < 2.0:
        raise ValueError("separation half-gap c must lie in [0, 2)")
    if p < 1 or n_per < 1:
        raise ValueError("need p >= 1 and n_per >= 1")
    rng = np.random.default_rng(seed)
    left = rng.uniform(-1.0, 1.0, size=(n_per, p))
    right = rng.uniform(-1.0, 1.0, size=(n_per, p))
    left[:, 0] = rng.uniform(-2.0, -c, size=n_per)
    right[:, 0] = rng.uniform(c, 2.0, size=n_per)
    values = np.vstack([left, right])
    labels = tuple(["g1"] * n_per + ["g2"] * n_per)
    return values, Clustering(labels)


def demo_session(
    out_dir: str | Path,
    n: int = 400,
    p: int = 30,
    k: int = 5,
    seed: int = 7,
) -> dict[str, Path]:
    """Write a small self-contained session (data, embedding, labels, meta)
    and return the file paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    values, clustering = gaussian_mixture(n=n, p=p, k=k, center_sd=3.0, seed=seed)
    row_ids = tuple(f"r{i}" for i in range(n))
    dataset = Dataset(row_ids, tuple(f"f{j}" for j in range(p)), values)
    scores, _, _, _ = pca_scores(values, 2)
    embedding = Embedding(scores)

    rng = np.random.default_rng(seed + 1)
    tissue = tuple(rng.choice(["blood", "marrow", "lymph"], size=n).tolist())
    signal = values[:, 0] + rng.normal(0.0, 0.5, size=n)
    meta = MetaTable(
        n=n,
        column_order=("tissue", "signal"),
        categorical={"tissue": tissue},
        numeric={"signal": signal},
    )

    paths = {
        "data": out / "data.csv",
        "embedding": out / "embedding.csv",
        "labels": out / "labels.csv",
        "meta": out / "meta.csv",
    }
    write_data_csv(dataset, paths["data"])
    write_embedding_csv(embedding, row_ids, paths["embedding"])
    write_labels_csv(clustering, row_ids, paths["labels"])
    write_meta_csv(meta, row_ids, paths["meta"])
    return paths
