"""Euclidean minimum spanning trees and the tree surgery used to expose
inter-cluster structure: medoid subtrees, degree-2 collapses, mediator
merging, and the crossing-count statistic for a pair of vertex groups."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial.distance import cdist

from .dataset import Clustering, Dataset


class DuplicatePointsError(ValueError):
    """Two identical points were found while building an MST."""


Edge = tuple[int, int, float]

# Above this many points the full distance matrix is not materialized and
# Prim recomputes one distance row per step instead.
_FULL_MATRIX_LIMIT = 4000


def _as_points(data) -> np.ndarray:
    if isinstance(data, Dataset):
        return data.values
    pts = np.asarray(data, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must form a 2-D array")
    return pts


@dataclass(frozen=True)
class WeightedTree:
    """Undirected tree with positive edge weights, vertices keyed by point index."""

    vertices: frozenset[int]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple(
            sorted((int(min(u, v)), int(max(u, v)), float(w)) for u, v, w in self.edges)
        )
        vertices = frozenset(int(v) for v in self.vertices)
        if len(edges) != len(vertices) - 1:
            raise ValueError(f"{len(edges)} edges for {len(vertices)} vertices is not a tree")
        for u, v, w in edges:
            if u not in vertices or v not in vertices:
                raise ValueError(f"edge ({u},{v}) references unknown vertex")
            if not w > 0:
                raise ValueError(f"edge ({u},{v}) has non-positive weight {w}")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        if vertices and len(self._component(min(vertices))) != len(vertices):
            raise ValueError("edge set is not connected")

    @cached_property
    def adjacency(self) -> dict[int, dict[int, float]]:
        adj: dict[int, dict[int, float]] = {v: {} for v in self.vertices}
        for u, v, w in self.edges:
            adj[u][v] = w
            adj[v][u] = w
        return adj

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def _component(self, start: int, blocked: tuple[int, int] | None = None) -> set[int]:
        """Vertices reachable from `start`, optionally ignoring one edge."""
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v, _ in self.edges:
            if blocked and {u, v} == set(blocked):
                continue
            adj[u].append(v)
            adj[v].append(u)
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def has_vertex(self, v: int) -> bool:
        return v in self.vertices


def build_mst(data) -> WeightedTree:
    """Minimum spanning tree of the complete Euclidean graph over the rows.

    Dense Prim scan, O(n^2) time. Ties between candidate edges are broken
    lexicographically by (min endpoint, max endpoint) so the result is
    deterministic even on degenerate inputs.
    """
    pts = _as_points(data)
    n = pts.shape[0]
    if n < 2:
        raise ValueError("need at least 2 points")

    if n <= _FULL_MATRIX_LIMIT:
        dist = cdist(pts, pts)
        row = dist.__getitem__
    else:
        sq = np.einsum("ij,ij->i", pts, pts)

        def row(j: int) -> np.ndarray:
            d2 = sq + sq[j] - 2.0 * (pts @ pts[j])
            return np.sqrt(np.maximum(d2, 0.0))

    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = row(0).copy()
    best[0] = np.inf
    parent = np.zeros(n, dtype=int)
    edges: list[Edge] = []
    for _ in range(n - 1):
        masked = np.where(in_tree, np.inf, best)
        j = int(np.argmin(masked))
        w = masked[j]
        if w == 0.0:
            raise DuplicatePointsError(f"points {parent[j]} and {j} coincide (zero distance)")
        ties = np.flatnonzero(masked == w)
        if len(ties) > 1:
            j = min(ties, key=lambda v: (min(parent[v], v), max(parent[v], v)))
            w = masked[j]
        edges.append((min(parent[j], j), max(parent[j], j), float(w)))
        in_tree[j] = True
        dj = row(j)
        improved = dj < best
        best = np.where(improved, dj, best)
        tied = np.flatnonzero((dj == best) & ~improved & ~in_tree)
        parent = np.where(improved, j, parent)
        for v in tied:
            if (min(j, v), max(j, v)) < (min(parent[v], v), max(parent[v], v)):
                parent[v] = j
    return WeightedTree(frozenset(range(n)), tuple(edges))


def tree_path(tree: WeightedTree, a: int, b: int) -> list[int]:
    """The unique simple path from a to b."""
    if not tree.has_vertex(a):
        raise ValueError(f"unknown vertex {a}")
    if not tree.has_vertex(b):
        raise ValueError(f"unknown vertex {b}")
    if a == b:
        return [a]
    prev: dict[int, int] = {a: a}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for y in tree.adjacency[x]:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def _subset_medoid(pts: np.ndarray, indices: np.ndarray) -> int:
    """Member minimizing the sum of Euclidean distances to the rest of the set."""
    sub = pts[indices]
    sums = cdist(sub, sub).sum(axis=1)
    return int(indices[int(np.argmin(sums))])


def medoids(data, clustering: Clustering) -> dict[str, int]:
    """Per-class medoid vertex. Ties go to the lowest row index."""
    pts = _as_points(data)
    return {lab: _subset_medoid(pts, idx) for lab, idx in clustering.classes.items()}


def minimal_subtree(tree: WeightedTree, keep: set[int]) -> WeightedTree:
    """Smallest subtree of `tree` spanning all of `keep`."""
    unknown = keep - tree.vertices
    if unknown:
        raise ValueError(f"vertices not in tree: {sorted(unknown)}")
    adj = {v: dict(nbrs) for v, nbrs in tree.adjacency.items()}
    queue = deque(v for v in adj if len(adj[v]) == 1 and v not in keep)
    while queue:
        v = queue.popleft()
        if v not in adj or v in keep or len(adj[v]) != 1:
            continue
        (nbr,) = adj[v]
        del adj[v]
        del adj[nbr][v]
        if len(adj[nbr]) == 1 and nbr not in keep:
            queue.append(nbr)
    edges = tuple((u, v, w) for u, nbrs in adj.items() for v, w in nbrs.items() if u < v)
    return WeightedTree(frozenset(adj), edges)


def medoid_subtree(tree: WeightedTree, medoid_map: dict[str, int]) -> WeightedTree:
    """Minimal subtree of the MST containing every cluster medoid."""
    return minimal_subtree(tree, set(medoid_map.values()))


def _collapse_degree_two(tree: WeightedTree, protected: set[int]) -> WeightedTree:
    """Replace each unprotected degree-2 vertex by a single edge joining its
    neighbors, with weight equal to the sum of the removed edge weights."""
    adj = {v: dict(nbrs) for v, nbrs in tree.adjacency.items()}
    queue = deque(sorted(v for v in adj if v not in protected and len(adj[v]) == 2))
    while queue:
        v = queue.popleft()
        if v not in adj or len(adj[v]) != 2:
            continue
        (a, wa), (b, wb) = adj[v].items()
        del adj[v]
        del adj[a][v]
        del adj[b][v]
        adj[a][b] = wa + wb
        adj[b][a] = wa + wb
    edges = tuple((u, v, w) for u, nbrs in adj.items() for v, w in nbrs.items() if u < v)
    return WeightedTree(frozenset(adj), edges)


def simplify_medoid_subtree(subtree: WeightedTree, medoid_map: dict[str, int]) -> WeightedTree:
    """Collapse degree-2 non-medoid vertices of a medoid subtree into
    weighted edges; total tree weight is preserved."""
    return _collapse_degree_two(subtree, set(medoid_map.values()))


@dataclass(frozen=True)
class GroupSelection:
    """Two disjoint vertex groups under comparison plus the MST path joining them."""

    group1: frozenset[int]
    group2: frozenset[int]
    path: tuple[int, ...]

    def __post_init__(self):
        group1 = frozenset(int(v) for v in self.group1)
        group2 = frozenset(int(v) for v in self.group2)
        path = tuple(int(v) for v in self.path)
        if not group1 or not group2:
            raise ValueError("both groups must be non-empty")
        if group1 & group2:
            raise ValueError("groups overlap")
        if not path:
            raise ValueError("selection path is empty")
        if path[0] not in group1 or path[-1] not in group2:
            raise ValueError("path endpoints must lie in group 1 and group 2 respectively")
        object.__setattr__(self, "group1", group1)
        object.__setattr__(self, "group2", group2)
        object.__setattr__(self, "path", path)

    @property
    def members(self) -> frozenset[int]:
        return self.group1 | self.group2


def selection_from_endpoints(
    tree: WeightedTree, clustering: Clustering, a: int, b: int
) -> GroupSelection:
    """Selection whose groups are the classes of the two chosen endpoints."""
    if a == b:
        raise ValueError("endpoints must differ")
    lab_a, lab_b = clustering.label_of(a), clustering.label_of(b)
    if lab_a == lab_b:
        raise ValueError(f"endpoints belong to the same class {lab_a!r}")
    classes = clustering.classes
    return GroupSelection(
        frozenset(classes[lab_a].tolist()),
        frozenset(classes[lab_b].tolist()),
        tuple(tree_path(tree, a, b)),
    )


def selection_from_groups(tree: WeightedTree, data, rows1, rows2) -> GroupSelection:
    """Selection over two custom row sets; the path joins the group medoids."""
    pts = _as_points(data)
    g1 = sorted(set(int(v) for v in rows1))
    g2 = sorted(set(int(v) for v in rows2))
    if not g1 or not g2:
        raise ValueError("both groups must be non-empty")
    if set(g1) & set(g2):
        raise ValueError("groups overlap")
    m1 = _subset_medoid(pts, np.array(g1))
    m2 = _subset_medoid(pts, np.array(g2))
    return GroupSelection(frozenset(g1), frozenset(g2), tuple(tree_path(tree, m1, m2)))


def simplify_group_subtree(tree: WeightedTree, sel: GroupSelection) -> WeightedTree:
    """Minimal subtree spanning both groups, with degree-2 non-group vertices
    collapsed into weighted edges and adjacent non-group vertices merged.

    A merged vertex keeps the smallest of the original ids and is adjacent to
    every neighbor of the vertices it absorbed."""
    members = sel.members
    sub = _collapse_degree_two(minimal_subtree(tree, set(members)), set(members))
    adj = {v: dict(nbrs) for v, nbrs in sub.adjacency.items()}
    while True:
        pair = min(
            (
                (min(u, v), max(u, v))
                for u in adj
                if u not in members
                for v in adj[u]
                if v not in members
            ),
            default=None,
        )
        if pair is None:
            break
        u, v = pair
        for nbr, w in adj[v].items():
            if nbr == u:
                continue
            del adj[nbr][v]
            adj[nbr][u] = w
            adj[u][nbr] = w
        del adj[u][v]
        del adj[v]
    edges = tuple((u, v, w) for u, nbrs in adj.items() for v, w in nbrs.items() if u < v)
    return WeightedTree(frozenset(adj), edges)


@dataclass(frozen=True)
class CrossingStatistic:
    """Crossing count between two groups on the simplified group subtree.

    mediator_degrees lists (vertex, edges to group 1, edges to group 2) for
    every non-group vertex adjacent to both groups, so alternative mediator
    rules can be evaluated from the same breakdown.
    """

    total: int
    direct_edges: int
    mediator_contribution: int
    mediator_degrees: tuple[tuple[int, int, int], ...] = field(default=())

    def __post_init__(self):
        if self.total != self.direct_edges + self.mediator_contribution:
            raise ValueError("total must equal direct_edges + mediator_contribution")


def crossing_count(tree: WeightedTree, sel: GroupSelection) -> CrossingStatistic:
    """Count connections between the two groups on the simplified subtree:
    direct edges plus, per non-group vertex touching both groups, its maximal
    number of edges into either group."""
    simplified = simplify_group_subtree(tree, sel)
    direct = 0
    for u, v, _ in simplified.edges:
        if (u in sel.group1 and v in sel.group2) or (u in sel.group2 and v in sel.group1):
            direct += 1
    mediators = []
    contribution = 0
    for v in sorted(simplified.vertices - sel.members):
        nbrs = simplified.adjacency[v]
        d1 = sum(1 for x in nbrs if x in sel.group1)
        d2 = sum(1 for x in nbrs if x in sel.group2)
        if d1 > 0 and d2 > 0:
            mediators.append((v, d1, d2))
            contribution += max(d1, d2)
    return CrossingStatistic(direct + contribution, direct, contribution, tuple(mediators))


def tree_to_edgelist(tree: WeightedTree, row_ids=None) -> str:
    """Serialize as `u,v,weight` lines, vertices rendered by row id."""
    name = (lambda v: str(row_ids[v])) if row_ids is not None else str
    lines = [f"{name(u)},{name(v)},{_fmt_weight(w)}" for u, v, w in tree.edges]
    return "\n".join(lines) + ("\n" if lines else "")


def _fmt_weight(w: float) -> str:
    return repr(float(w))


def tree_from_edgelist(text: str, row_ids=None) -> WeightedTree:
    index = None
    if row_ids is not None:
        index = {str(rid): i for i, rid in enumerate(row_ids)}
    edges = []
    vertices = set()
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        u_s, v_s, w_s = line.split(",")
        u = index[u_s] if index is not None else int(u_s)
        v = index[v_s] if index is not None else int(v_s)
        edges.append((u, v, float(w_s)))
        vertices.update((u, v))
    return WeightedTree(frozenset(vertices), tuple(edges))
