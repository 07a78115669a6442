"""Crossing-count separation test for a selected pair of groups.

The observed statistic is compared against a bootstrapped null built from a
single unimodal cluster: the lesser-dense group's shape defines an
axis-aligned hyperrectangle, uniform samples are drawn from it, and MST edges
crossing the central hyperplane orthogonal to the first principal axis are
counted. The closed-form extremal densities justify using the lesser-dense
group: among unimodal densities on [-1, 1] with fixed mass on each side of
the origin, the density minimizing mass near the origin is flat at the
lesser side's level there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mst import GroupSelection, WeightedTree, build_mst, crossing_count, _as_points


class DegenerateGroupError(ValueError):
    """A group is too small or has no spatial extent."""


@dataclass(frozen=True)
class NullTheoryProblem:
    """One-dimensional extremal-density problem: sample sizes n1/n2 for the
    two sides of the origin, mode location c, and half-window eps."""

    n1: float
    n2: float
    c: float
    eps: float

    def __post_init__(self):
        if not (self.n1 > 0 and self.n2 > 0):
            raise ValueError("sample sizes must be positive")
        if not -1.0 <= self.c <= 1.0:
            raise ValueError(f"mode location must lie in [-1, 1], got {self.c}")
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")


@dataclass(frozen=True)
class PiecewiseDensity:
    """Piecewise-constant density on [-1, 1]; `mode` is its peak location."""

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    mode: float

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        if len(bp) < 2 or bp[0] != -1.0 or bp[-1] != 1.0:
            raise ValueError("breakpoints must run from -1 to 1")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(vals) != len(bp) - 1:
            raise ValueError("need one value per segment")
        if any(v < 0 for v in vals):
            raise ValueError("density values must be non-negative")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    def integral(self, a: float, b: float) -> float:
        total = 0.0
        for left, right, v in zip(self.breakpoints, self.breakpoints[1:], self.values):
            overlap = min(right, b) - max(left, a)
            if overlap > 0:
                total += overlap * v
        return total

    @property
    def total_mass(self) -> float:
        return self.integral(-1.0, 1.0)

    def is_unimodal_at(self, c: float, tol: float = 1e-12) -> bool:
        """True if the segment values rise to the segment(s) touching c and
        fall afterwards (weakly, with tolerance)."""
        peaks = [
            j
            for j in range(len(self.values))
            if self.breakpoints[j] <= c <= self.breakpoints[j + 1]
        ]
        for peak in peaks:
            rising = all(
                self.values[i + 1] >= self.values[i] - tol for i in range(peak)
            )
            falling = all(
                self.values[i + 1] <= self.values[i] + tol
                for i in range(peak, len(self.values) - 1)
            )
            if rising and falling:
                return True
        return False


def minimal_crossing_density(prob: NullTheoryProblem) -> tuple[PiecewiseDensity, float]:
    """Closed-form unimodal density minimizing the mass in [-eps, eps].

    Dispatch for c >= 0 (the c < 0 problem is solved by mirror symmetry):
    a two-piece density stepping at eps or at c when the mode-c family is
    feasible (c * n1 <= n2), and the limiting mode-0 density otherwise, where
    the minimum over the remaining feasible modes is attained.
    """
    if prob.c < 0:
        mirrored, mi = minimal_crossing_density(
            NullTheoryProblem(prob.n2, prob.n1, -prob.c, prob.eps)
        )
        bp = tuple(sorted(-b for b in mirrored.breakpoints))
        vals = tuple(reversed(mirrored.values))
        return PiecewiseDensity(bp, vals, -mirrored.mode), mi

    n1, n2, c, eps = prob.n1, prob.n2, prob.c, prob.eps
    total = n1 + n2
    v1 = n1 / total

    def two_piece(step: float, v2: float, mode: float) -> PiecewiseDensity:
        return PiecewiseDensity((-1.0, step, 1.0), (v1, v2), mode)

    if c == 0.0:
        return two_piece(0.0, n2 / total, 0.0), eps
    if n2 < c * n1:
        # No unimodal density with mode exactly c satisfies the side masses;
        # the infimum over the feasible modes is attained at zero.
        return two_piece(0.0, n2 / total, 0.0), eps
    if c >= eps:
        step = eps if n2 >= n1 else c
        v2 = (n2 - step * n1) / ((1.0 - step) * total)
        return two_piece(step, v2, c), 2.0 * eps * v1
    v2 = (n2 - c * n1) / ((1.0 - c) * total)
    minimum = eps * v1 + c * v1 + (eps - c) * (n2 - c * n1) / ((1.0 - c) * total)
    return two_piece(c, v2, c), minimum


@dataclass(frozen=True)
class GroupDensity:
    """Group size and per-axis spreads after noise-dimension removal.

    sigmas are the standard deviations along the group's principal axes
    (descending); density is n over their product."""

    n: int
    sigmas: tuple[float, ...]
    density: float

    def __post_init__(self):
        if self.n < 2:
            raise DegenerateGroupError("group must have at least 2 members")
        if not all(s > 0 for s in self.sigmas):
            raise DegenerateGroupError("retained spreads must be positive")
        if not self.density > 0:
            raise DegenerateGroupError("density must be positive")


def estimate_group_density(data, members, variance_threshold: float = 0.90) -> GroupDensity:
    """Approximate a group's density as n over the volume spanned by its
    leading principal-axis spreads.

    The smallest leading set of axes explaining at least `variance_threshold`
    of the variance is retained; trailing noise axes are dropped so they do
    not bias the volume estimate.
    """
    if not 0.0 < variance_threshold <= 1.0:
        raise ValueError("variance_threshold must be in (0, 1]")
    pts = _as_points(data)
    idx = np.array(sorted(int(v) for v in members), dtype=int)
    if idx.size < 2:
        raise DegenerateGroupError(f"group has {idx.size} members, need at least 2")
    sub = pts[idx]
    centered = sub - sub.mean(axis=0)
    singular = np.linalg.svd(centered, compute_uv=False)
    sd = singular / np.sqrt(idx.size - 1)
    variances = sd**2
    total = float(variances.sum())
    if total <= 0.0:
        raise DegenerateGroupError("all group members coincide")
    cumulative = np.cumsum(variances) / total
    rank = int(np.count_nonzero(sd > 1e-12 * sd[0]))
    keep = min(int(np.searchsorted(cumulative, variance_threshold - 1e-12) + 1), rank)
    kept = tuple(float(s) for s in sd[:keep])
    return GroupDensity(n=int(idx.size), sigmas=kept, density=idx.size / float(np.prod(kept)))


def _null_params(d1: GroupDensity, d2: GroupDensity) -> GroupDensity:
    return min(d1, d2, key=lambda d: (d.density, d.n, d.sigmas))


def simulate_null(
    d1: GroupDensity, d2: GroupDensity, replicates: int, seed: int = 0
) -> list[int]:
    """Crossing counts under the single-cluster null.

    The lesser-dense group's n points are sampled uniformly from the
    axis-aligned hyperrectangle with side lengths sqrt(12) * sigma_i, so the
    sample variance per axis matches the group's per-axis variance in
    expectation; each replicate records the MST edges crossing the central
    hyperplane orthogonal to the first axis.
    """
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    g = _null_params(d1, d2)
    sides = np.sqrt(12.0) * np.array(g.sigmas)
    children = np.random.SeedSequence(seed).spawn(replicates)
    counts: list[int] = []
    for child in children:
        rng = np.random.default_rng(child)
        pts = rng.uniform(-0.5, 0.5, size=(g.n, sides.size)) * sides
        tree = build_mst(pts)
        neg = pts[:, 0] < 0.0
        counts.append(sum(1 for u, v, _ in tree.edges if neg[u] != neg[v]))
    return counts


@dataclass(frozen=True)
class TestResult:
    observed: int
    null_mean: float
    null_sd: float
    p_value: float
    replicates: int
    seed: int

    def to_payload(self) -> dict:
        return {
            "observed": self.observed,
            "null_mean": self.null_mean,
            "null_sd": self.null_sd,
            "p_value": self.p_value,
            "replicates": self.replicates,
            "seed": self.seed,
        }


def mst_test(
    data,
    tree: WeightedTree,
    sel: GroupSelection,
    replicates: int = 100,
    variance_threshold: float = 0.90,
    seed: int = 0,
) -> TestResult:
    """One-sided bootstrap test of group separation.

    Small crossing counts are evidence of separation, so the p-value is the
    left-tail position of the observed count within the simulated null, with
    the add-one correction (#{null <= observed} + 1) / (replicates + 1).
    """
    observed = crossing_count(tree, sel).total
    d1 = estimate_group_density(data, sel.group1, variance_threshold)
    d2 = estimate_group_density(data, sel.group2, variance_threshold)
    counts = np.array(simulate_null(d1, d2, replicates, seed))
    p_value = (int(np.count_nonzero(counts <= observed)) + 1) / (replicates + 1)
    null_sd = float(np.std(counts, ddof=1)) if replicates > 1 else 0.0
    return TestResult(
        observed=int(observed),
        null_mean=float(np.mean(counts)),
        null_sd=null_sd,
        p_value=float(p_value),
        replicates=int(replicates),
        seed=int(seed),
    )
