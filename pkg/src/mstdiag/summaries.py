"""Engine-side payloads for the comparison panels: the group-difference
heatmap ordering and per-group metadata summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, MetaTable
from .mst import GroupSelection


@dataclass(frozen=True)
class HeatmapSpec:
    """Rows are the selected points (group 1 block then group 2 block);
    columns are features ordered by descending |difference in group means|."""

    feature_order: tuple[int, ...]
    feature_names: tuple[str, ...]
    rows: tuple[int, ...]
    row_groups: tuple[int, ...]
    matrix: np.ndarray
    group1_means: np.ndarray
    group2_means: np.ndarray

    def to_payload(self, row_ids=None) -> dict:
        rows = [row_ids[i] for i in self.rows] if row_ids is not None else list(self.rows)
        return {
            "feature_order": list(self.feature_order),
            "feature_names": list(self.feature_names),
            "rows": rows,
            "row_groups": list(self.row_groups),
            "matrix": self.matrix.tolist(),
            "group1_means": self.group1_means.tolist(),
            "group2_means": self.group2_means.tolist(),
        }


def heatmap_spec(
    data: Dataset,
    sel: GroupSelection,
    sub_rows=None,
    sub_features=None,
) -> HeatmapSpec:
    """Heatmap over the selection, optionally restricted to row/feature
    subsets; the ordering is recomputed on the subset. Ties in the ordering
    key fall back to the original feature index."""
    row_filter = None if sub_rows is None else set(int(r) for r in sub_rows)
    rows1 = [i for i in sorted(sel.group1) if row_filter is None or i in row_filter]
    rows2 = [i for i in sorted(sel.group2) if row_filter is None or i in row_filter]
    if not rows1 or not rows2:
        raise ValueError("row subset leaves a group empty")
    if sub_features is None:
        features = list(range(data.p))
    else:
        features = [int(f) for f in sub_features]
        if not features:
            raise ValueError("feature subset is empty")
        out_of_range = [f for f in features if not 0 <= f < data.p]
        if out_of_range:
            raise ValueError(f"feature indices out of range: {out_of_range}")

    sub = data.values[:, features]
    means1 = sub[rows1].mean(axis=0)
    means2 = sub[rows2].mean(axis=0)
    order_local = np.argsort(-np.abs(means1 - means2), kind="stable")
    order = tuple(features[j] for j in order_local)
    rows = tuple(rows1 + rows2)
    return HeatmapSpec(
        feature_order=order,
        feature_names=tuple(data.feature_names[j] for j in order),
        rows=rows,
        row_groups=tuple([1] * len(rows1) + [2] * len(rows2)),
        matrix=data.values[np.array(rows)][:, np.array(order)],
        group1_means=means1[order_local],
        group2_means=means2[order_local],
    )


def five_number(values) -> tuple[float, float, float, float, float]:
    """Min, lower hinge, median, upper hinge, max (median-of-halves hinges;
    an odd-length sample includes its median in both halves)."""
    v = np.sort(np.asarray(values, dtype=float))
    n = v.size
    if n == 0:
        raise ValueError("empty sample")
    med = float(np.median(v))
    half = n // 2
    lower = v[: half + 1] if n % 2 else v[:half]
    upper = v[half:] if n % 2 else v[half:]
    return (float(v[0]), float(np.median(lower)), med, float(np.median(upper)), float(v[-1]))


@dataclass(frozen=True)
class MetaSummary:
    """Per column and group: level proportions for categorical columns,
    five-number summaries for numeric ones."""

    categorical: dict[str, dict[str, dict[str, float]]]
    numeric: dict[str, dict[str, tuple[float, float, float, float, float]]]

    def to_payload(self) -> dict:
        return {
            "categorical": self.categorical,
            "numeric": {
                col: {grp: list(v) for grp, v in groups.items()}
                for col, groups in self.numeric.items()
            },
        }


def meta_summary(meta: MetaTable, sel: GroupSelection) -> MetaSummary:
    groups = {"group1": sorted(sel.group1), "group2": sorted(sel.group2)}
    categorical: dict[str, dict[str, dict[str, float]]] = {}
    numeric: dict[str, dict[str, tuple[float, float, float, float, float]]] = {}
    for name in meta.column_order:
        if name in meta.categorical:
            col = meta.categorical[name]
            categorical[name] = {}
            for grp, rows in groups.items():
                counts: dict[str, int] = {}
                for i in rows:
                    counts[col[i]] = counts.get(col[i], 0) + 1
                total = len(rows)
                categorical[name][grp] = {
                    level: count / total for level, count in sorted(counts.items())
                }
        else:
            col = meta.numeric[name]
            numeric[name] = {
                grp: five_number(col[np.array(rows)]) for grp, rows in groups.items()
            }
    return MetaSummary(categorical, numeric)
