"""Independent reference implementations used only to check the engine.

These deliberately take different routes from the package code: spanning
trees are enumerated exhaustively, bipartitions come from networkx component
splits, and the extremal-density minimum is found by linear programming on a
fine grid."""

import itertools

import networkx as nx
import numpy as np
from scipy.optimize import linprog
from scipy.spatial.distance import cdist


def prufer_to_edges(seq, n):
    """Decode a Prufer sequence over vertices 0..n-1 into tree edges."""
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    leaves = sorted(v for v in range(n) if degree[v] == 1)
    import heapq

    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    edges.append((u, w))
    return edges


def all_spanning_trees(n):
    """Every labeled tree on n vertices (n^(n-2) of them; keep n small)."""
    if n == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield prufer_to_edges(seq, n)


def min_spanning_weight_bruteforce(points):
    d = cdist(points, points)
    n = len(points)
    return min(sum(d[u, v] for u, v in edges) for edges in all_spanning_trees(n))


def bfs_path(edges, a, b):
    g = nx.Graph()
    g.add_edges_from((u, v) for u, v, _ in edges)
    return nx.shortest_path(g, a, b)


def bruteforce_medoid(points, indices):
    d = cdist(points[indices], points[indices])
    sums = d.sum(axis=1)
    best = min(range(len(indices)), key=lambda i: (sums[i], indices[i]))
    return indices[best]


def path_union_subtree(edges, terminals):
    """Union of pairwise shortest paths between terminals."""
    g = nx.Graph()
    for u, v, w in edges:
        g.add_edge(u, v, weight=w)
    kept = set()
    terminals = list(terminals)
    for i, a in enumerate(terminals):
        for b in terminals[i + 1 :]:
            path = nx.shortest_path(g, a, b)
            kept.update(zip(path, path[1:]))
    return {(min(u, v), max(u, v)) for u, v in kept}


def bipartitions_by_deletion(edges, label_to_vertex):
    """For every edge, split with networkx and intersect with the labels."""
    g = nx.Graph()
    g.add_edges_from((u, v) for u, v, _ in edges)
    all_labels = frozenset(label_to_vertex)
    parts = set()
    for u, v, _ in edges:
        h = g.copy()
        h.remove_edge(u, v)
        comp = nx.node_connected_component(h, u)
        side = frozenset(lab for lab, vert in label_to_vertex.items() if vert in comp)
        parts.add(frozenset({side, all_labels - side}))
    return parts


def rf_distance_oracle(edges1, medoids1, edges2, medoids2):
    p1 = bipartitions_by_deletion(edges1, medoids1)
    p2 = bipartitions_by_deletion(edges2, medoids2)
    shared = len(p1 & p2)
    return len(p1 ^ p2) / (2 * shared), shared, len(p1 ^ p2)


def random_tree_edges(rng, n):
    if n == 2:
        return [(0, 1, float(rng.uniform(0.5, 2.0)))]
    seq = rng.integers(0, n, size=n - 2).tolist()
    return [(u, v, float(w)) for (u, v), w in zip(prufer_to_edges(seq, n), rng.uniform(0.5, 2.0, size=n - 1))]


def grid_min_crossing(n1, n2, c, eps, bins=200):
    """LP minimum of the mass in [-eps, eps] over gridded unimodal densities
    with the prescribed side masses.

    The peak is constrained to the bins touching the requested mode; if no
    such density exists the peak falls back to the origin, where the minimum
    over the remaining admissible modes is attained.
    """
    assert bins % 2 == 0
    edges = np.linspace(-1.0, 1.0, bins + 1)
    width = 2.0 / bins
    total = n1 + n2

    def overlap_weights(lo, hi):
        return np.clip(np.minimum(edges[1:], hi) - np.maximum(edges[:-1], lo), 0.0, None)

    objective = overlap_weights(-eps, eps)
    left = overlap_weights(-1.0, 0.0)
    right = overlap_weights(0.0, 1.0)

    def solve(peak_bin):
        a_ub, b_ub = [], []
        for i in range(bins - 1):
            row = np.zeros(bins)
            if i < peak_bin:  # f[i+1] >= f[i]
                row[i], row[i + 1] = 1.0, -1.0
            else:  # f[i+1] <= f[i]
                row[i], row[i + 1] = -1.0, 1.0
            a_ub.append(row)
            b_ub.append(0.0)
        a_eq = np.vstack([left, right])
        b_eq = np.array([n1 / total, n2 / total])
        res = linprog(
            objective,
            A_ub=np.array(a_ub),
            b_ub=np.array(b_ub),
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=[(0, None)] * bins,
            method="highs",
        )
        return res

    def peak_candidates(mode):
        js = {int(np.clip(np.searchsorted(edges, mode, side="right") - 1, 0, bins - 1))}
        if mode in edges:
            j = int(np.searchsorted(edges, mode))
            js.update({max(j - 1, 0), min(j, bins - 1)})
        return sorted(js)

    values = [solve(j) for j in peak_candidates(c)]
    feasible = [r.fun for r in values if r.status == 0]
    if feasible:
        return min(feasible)
    values = [solve(j) for j in peak_candidates(0.0)]
    feasible = [r.fun for r in values if r.status == 0]
    assert feasible, "grid problem infeasible even at the origin"
    return min(feasible)


def random_feasible_grid_density(rng, n1, n2, c, bins=200):
    """A random vertex of the gridded admissible-density polytope, or None
    when the mode-c family is empty."""
    edges = np.linspace(-1.0, 1.0, bins + 1)
    total = n1 + n2

    def overlap_weights(lo, hi):
        return np.clip(np.minimum(edges[1:], hi) - np.maximum(edges[:-1], lo), 0.0, None)

    peak_bin = int(np.clip(np.searchsorted(edges, c, side="right") - 1, 0, bins - 1))
    a_ub, b_ub = [], []
    for i in range(bins - 1):
        row = np.zeros(bins)
        if i < peak_bin:
            row[i], row[i + 1] = 1.0, -1.0
        else:
            row[i], row[i + 1] = -1.0, 1.0
        a_ub.append(row)
        b_ub.append(0.0)
    a_eq = np.vstack([overlap_weights(-1.0, 0.0), overlap_weights(0.0, 1.0)])
    b_eq = np.array([n1 / total, n2 / total])
    res = linprog(
        rng.normal(size=bins),
        A_ub=np.array(a_ub),
        b_ub=np.array(b_ub),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=[(0, 10.0)] * bins,
        method="highs",
    )
    if res.status != 0:
        return None
    return edges, res.x
