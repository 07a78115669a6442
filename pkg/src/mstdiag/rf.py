"""Robinson-Foulds style distance between medoid subtrees, compared over the
bipartitions of the medoid label set induced by deleting single edges, plus
the noise-vs-permutation stability experiment built on it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .dataset import Clustering
from .mst import WeightedTree, build_mst, medoid_subtree, medoids, simplify_medoid_subtree, _as_points


class DegenerateTreesError(ValueError):
    """The two trees share no bipartition, leaving the distance undefined."""


# A bipartition is an unordered pair of disjoint label sets covering all labels.
Bipartition = frozenset


@dataclass(frozen=True)
class RFResult:
    distance: float
    shared: int
    sym_diff: int


def medoid_bipartitions(tree: WeightedTree, medoid_map: dict[str, int]) -> frozenset:
    """Label bipartitions induced by deleting each edge of the tree.

    Duplicate bipartitions (possible after simplification) collapse to one.
    """
    for lab, v in medoid_map.items():
        if not tree.has_vertex(v):
            raise ValueError(f"medoid {v} for class {lab!r} is not in the tree")
    label_of: dict[int, set[str]] = {}
    for lab, v in medoid_map.items():
        label_of.setdefault(v, set()).add(lab)
    all_labels = frozenset(medoid_map)
    parts = set()
    for u, v, _ in tree.edges:
        side_vertices = tree._component(u, blocked=(u, v))
        side = frozenset(lab for x in side_vertices for lab in label_of.get(x, ()))
        parts.add(frozenset({side, all_labels - side}))
    return frozenset(parts)


def rf_distance(
    t1: WeightedTree,
    t2: WeightedTree,
    medoids1: dict[str, int],
    medoids2: dict[str, int],
) -> RFResult:
    """Symmetric-difference count of the two bipartition sets, normalized by
    twice the number of shared bipartitions."""
    if set(medoids1) != set(medoids2):
        raise ValueError("trees must carry medoids for the same class labels")
    p1 = medoid_bipartitions(t1, medoids1)
    p2 = medoid_bipartitions(t2, medoids2)
    shared = len(p1 & p2)
    sym_diff = len(p1 ^ p2)
    if shared == 0:
        raise DegenerateTreesError("no shared bipartition; distance is undefined")
    return RFResult(distance=sym_diff / (2 * shared), shared=shared, sym_diff=sym_diff)


def default_noise_sd(data) -> float:
    """Scale-aware default: half the median nonzero pairwise distance over sqrt(p)."""
    pts = _as_points(data)
    d = pdist(pts)
    nonzero = d[d > 0]
    if nonzero.size == 0:
        raise ValueError("all points coincide")
    return 0.5 * float(np.median(nonzero)) / np.sqrt(pts.shape[1])


def _simplified_medoid_subtree(tree: WeightedTree, medoid_map: dict[str, int]) -> WeightedTree:
    return simplify_medoid_subtree(medoid_subtree(tree, medoid_map), medoid_map)


def stability_experiment(
    data,
    clustering: Clustering,
    noise_sd: float | None = None,
    reps: int = 30,
    seed: int = 0,
) -> tuple[list[float], list[float]]:
    """Distances from the original simplified medoid subtree under two kinds
    of perturbation.

    Noise arm: i.i.d. Gaussian noise added to every entry, MST and medoids
    rebuilt. Permutation arm: class labels uniformly permuted over the
    unchanged data, medoids recomputed on the same MST. Deterministic for a
    fixed seed; replicate r of each arm uses its own sub-seed.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    pts = _as_points(data)
    if noise_sd is None:
        noise_sd = default_noise_sd(pts)
    if not noise_sd > 0:
        raise ValueError("noise_sd must be positive")

    base_tree = build_mst(pts)
    base_medoids = medoids(pts, clustering)
    base_simplified = _simplified_medoid_subtree(base_tree, base_medoids)

    children = np.random.SeedSequence(seed).spawn(2 * reps)
    noise_distances: list[float] = []
    for r in range(reps):
        rng = np.random.default_rng(children[r])
        noisy = pts + rng.normal(0.0, noise_sd, size=pts.shape)
        tree_r = build_mst(noisy)
        medoids_r = medoids(noisy, clustering)
        simp_r = _simplified_medoid_subtree(tree_r, medoids_r)
        noise_distances.append(
            rf_distance(base_simplified, simp_r, base_medoids, medoids_r).distance
        )

    labels = np.array(clustering.labels, dtype=object)
    permutation_distances: list[float] = []
    for r in range(reps):
        rng = np.random.default_rng(children[reps + r])
        permuted = Clustering(tuple(labels[rng.permutation(len(labels))]))
        medoids_p = medoids(pts, permuted)
        simp_p = _simplified_medoid_subtree(base_tree, medoids_p)
        permutation_distances.append(
            rf_distance(base_simplified, simp_p, base_medoids, medoids_p).distance
        )
    return noise_distances, permutation_distances
