"""Simulation harnesses: power/size of the separation test over a grid of
gap widths and dimensions, on top of the box-pair sampler."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mst import build_mst, selection_from_groups
from .separation import mst_test
from .synthetic import box_pair


@dataclass(frozen=True)
class PowerRow:
    c: float
    p: int
    trials: int
    rejections: int

    @property
    def rate(self) -> float:
        return self.rejections / self.trials


def power_experiment(
    c_values,
    p_values,
    trials: int = 100,
    n_per: int = 50,
    replicates: int = 100,
    alpha: float = 0.05,
    seed: int = 0,
) -> list[PowerRow]:
    """Rejection rates of the separation test on sampled box pairs.

    At c = 0 the two groups form one box, so the rate estimates the size of
    the test; for c > 0 it estimates power at gap 2c."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rows: list[PowerRow] = []
    master = np.random.default_rng(seed)
    for c in c_values:
        for p in p_values:
            rejections = 0
            for _ in range(trials):
                sample_seed, test_seed = (int(s) for s in master.integers(2**63, size=2))
                values, _ = box_pair(c, p, n_per, seed=sample_seed)
                tree = build_mst(values)
                sel = selection_from_groups(
                    tree, values, range(n_per), range(n_per, 2 * n_per)
                )
                result = mst_test(values, tree, sel, replicates=replicates, seed=test_seed)
                if result.p_value <= alpha:
                    rejections += 1
            rows.append(PowerRow(c=float(c), p=int(p), trials=trials, rejections=rejections))
    return rows
