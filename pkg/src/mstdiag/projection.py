"""Two-dimensional "unwinding" of an MST path.

PCA removes noise dimensions from the points of interest, then regularized
CCA aligns the path's scores with a polynomial in the path order. The two
leading canonical directions on the data side span the projection plane for
every point of interest. A product-kernel 2-D density estimate supports the
bandwidth-calibration workflow (shrink the bandwidth until two modes appear).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .dataset import pca_scores


@dataclass(frozen=True)
class ProjectionConfig:
    pca_dims: int
    degree: int = 2
    lam: float | None = None  # ridge for the path block; None selects by CV
    bandwidth: float | None = None

    def to_payload(self) -> dict:
        return {
            "pca_dims": self.pca_dims,
            "degree": self.degree,
            "lambda": self.lam,
            "bandwidth": self.bandwidth,
        }


@dataclass(frozen=True)
class ProjectionResult:
    coords: np.ndarray
    path_coords: np.ndarray
    variance_retained: float
    canonical_correlations: tuple[float, float]
    lambda_used: float
    config: ProjectionConfig

    def to_payload(self) -> dict:
        return {
            "coords": self.coords.tolist(),
            "path_coords": self.path_coords.tolist(),
            "variance_retained": self.variance_retained,
            "canonical_correlations": list(self.canonical_correlations),
            "lambda_used": self.lambda_used,
            "config": self.config.to_payload(),
        }


def polynomial_design(k: int, degree: int) -> np.ndarray:
    """k x degree matrix with row i = (i, i^2, ..., i^degree), i = 1..k."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if k < 2:
        raise ValueError("need at least 2 rows")
    i = np.arange(1, k + 1, dtype=float)
    return i[:, None] ** np.arange(1, degree + 1)


def _center(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = m.mean(axis=0)
    return m - mean, mean


def _inv_sqrt(cov: np.ndarray, min_rel_eig: float = 1e-12) -> np.ndarray:
    eigvals, eigvecs = scipy.linalg.eigh(cov)
    if eigvals[-1] <= 0 or eigvals[0] < min_rel_eig * eigvals[-1]:
        raise ValueError("covariance block is singular")
    return eigvecs @ np.diag(1.0 / np.sqrt(eigvals)) @ eigvecs.T


def _cca_weights(x: np.ndarray, y: np.ndarray, lam: float, pairs: int):
    """Canonical weights for centered blocks x (ridge lam) and y (no ridge).

    Returns (correlations, x_weights, y_weights) for the leading `pairs`.
    Correlations are the realized Pearson correlations of the variate pairs,
    not the ridge-shrunk singular values, and are sorted descending with the
    weight columns permuted to match."""
    k = x.shape[0]
    sxx = x.T @ x / (k - 1) + lam * np.eye(x.shape[1])
    syy = y.T @ y / (k - 1)
    sxy = x.T @ y / (k - 1)
    isx = _inv_sqrt(sxx)
    try:
        isy = _inv_sqrt(syy)
    except ValueError:
        raise ValueError(
            "design-side covariance is singular; the polynomial degree is too "
            "high for this path length"
        ) from None
    u, _, vt = np.linalg.svd(isx @ sxy @ isy)
    pairs = min(pairs, u.shape[1], vt.shape[0])
    wx = isx @ u[:, :pairs]
    wy = isy @ vt.T[:, :pairs]
    corrs = np.empty(pairs)
    for i in range(pairs):
        a, b = x @ wx[:, i], y @ wy[:, i]
        denom = np.linalg.norm(a) * np.linalg.norm(b)
        corrs[i] = 0.0 if denom == 0 else abs(float(a @ b)) / denom
    order = np.argsort(-corrs, kind="stable")
    return np.clip(corrs[order], 0.0, 1.0), wx[:, order], wy[:, order]


def interleaved_folds(k: int, folds: int) -> list[np.ndarray]:
    """Validation index sets: point i goes to fold i mod folds."""
    if not 2 <= folds <= k:
        raise ValueError(f"folds must be in [2, {k}], got {folds}")
    idx = np.arange(k)
    return [idx[idx % folds == f] for f in range(folds)]


def default_lambda_grid(path_scores: np.ndarray, size: int = 8) -> list[float]:
    """Log-spaced ridge grid spanning 1e-4 to 1e2 times the mean diagonal of
    the path-score covariance."""
    centered, _ = _center(np.asarray(path_scores, dtype=float))
    k = centered.shape[0]
    base = float(np.mean(np.sum(centered**2, axis=0) / max(k - 1, 1)))
    if base <= 0:
        base = 1.0
    return [float(v) for v in base * np.logspace(-4, 2, size)]


def cv_select_lambda(path_scores, design, grid, folds: int = 5) -> float:
    """Ridge value maximizing the mean held-out first canonical correlation.

    Validation variates are centered with the training means so tiny folds
    still carry signal; ties resolve to the largest ridge.
    """
    path_scores = np.asarray(path_scores, dtype=float)
    design = np.asarray(design, dtype=float)
    grid = sorted(float(g) for g in grid)
    if not grid:
        raise ValueError("lambda grid is empty")
    k = path_scores.shape[0]
    fold_sets = interleaved_folds(k, folds)

    best_lam, best_score = grid[0], -np.inf
    for lam in grid:
        scores = []
        for val in fold_sets:
            train = np.setdiff1d(np.arange(k), val)
            if train.size < 2:
                continue
            x_train, x_mean = _center(path_scores[train])
            y_train, y_mean = _center(design[train])
            try:
                _, wx, wy = _cca_weights(x_train, y_train, lam, 1)
            except ValueError:
                scores.append(-np.inf)
                continue
            a, b = wx[:, 0], wy[:, 0]
            if float((x_train @ a) @ (y_train @ b)) < 0:
                b = -b
            u = (path_scores[val] - x_mean) @ a
            v = (design[val] - y_mean) @ b
            denom = np.linalg.norm(u) * np.linalg.norm(v)
            scores.append(0.0 if denom == 0 else float(u @ v) / denom)
        mean_score = float(np.mean(scores)) if scores else -np.inf
        if mean_score >= best_score:
            best_lam, best_score = lam, mean_score
    return best_lam


def pca_rcca_project(x, path, config: ProjectionConfig) -> ProjectionResult:
    """Project all points of interest onto the plane that best unwinds the path.

    Steps: PCA of x to pca_dims; path rows mapped by the same transform; CCA
    between the ridge-regularized path scores and the centered polynomial
    design; the two leading data-side canonical directions, orthonormalized,
    define the plane.
    """
    x = np.asarray(x, dtype=float)
    path = np.asarray(path, dtype=float)
    k = path.shape[0]
    if k < 2:
        raise ValueError("path must contain at least 2 points")
    if path.shape[1] != x.shape[1]:
        raise ValueError("path and points of interest live in different spaces")
    if config.pca_dims < 2:
        raise ValueError("pca_dims must be at least 2 for a planar projection")

    scores, components, mean, retained = pca_scores(x, config.pca_dims)
    path_scores = (path - mean) @ components.T

    degree = config.degree
    max_degree = k - 2 if k > 2 else 1
    if degree > max_degree:
        warnings.warn(
            f"degree {degree} too high for a {k}-point path; reducing to {max_degree}",
            stacklevel=2,
        )
        degree = max_degree
    if degree < 2:
        raise ValueError("path too short for two canonical pairs (need degree >= 2)")

    design = polynomial_design(k, degree)
    x_c, _ = _center(path_scores)
    y_c, _ = _center(design)

    if config.lam is not None:
        lam = float(config.lam)
    else:
        grid = default_lambda_grid(path_scores)
        try:
            lam = cv_select_lambda(path_scores, design, grid, folds=min(5, k))
        except ValueError as exc:
            lam = float(np.mean(grid))
            warnings.warn(f"lambda cross-validation failed ({exc}); using {lam:.3g}", stacklevel=2)

    corrs, wx, _ = _cca_weights(x_c, y_c, lam, 2)
    basis, r = np.linalg.qr(wx[:, :2])
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    basis = basis * signs

    if len(corrs) < 2:
        corrs = np.pad(corrs, (0, 2 - len(corrs)))
    return ProjectionResult(
        coords=scores @ basis,
        path_coords=path_scores @ basis,
        variance_retained=retained,
        canonical_correlations=(float(corrs[0]), float(corrs[1])),
        lambda_used=lam,
        config=config,
    )


@dataclass(frozen=True)
class KDESurface:
    """Gaussian product-kernel density on a regular grid.

    density[i, j] is the estimate at (x[j], y[i])."""

    x: np.ndarray
    y: np.ndarray
    density: np.ndarray
    bandwidth: float

    @property
    def total_mass(self) -> float:
        dx = self.x[1] - self.x[0]
        dy = self.y[1] - self.y[0]
        return float(self.density.sum() * dx * dy)

    def to_payload(self) -> dict:
        return {
            "x": self.x.tolist(),
            "y": self.y.tolist(),
            "density": self.density.tolist(),
            "bandwidth": self.bandwidth,
        }


def kde2d(coords, bandwidth: float, grid_size: int = 128) -> KDESurface:
    """Product-kernel KDE on the bounding box padded by three bandwidths."""
    coords = np.asarray(coords, dtype=float)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise ValueError("coords must be an (n, 2) array")
    if not bandwidth > 0:
        raise ValueError("bandwidth must be positive")
    if grid_size < 4:
        raise ValueError("grid too coarse")
    pad = 3.0 * bandwidth
    gx = np.linspace(coords[:, 0].min() - pad, coords[:, 0].max() + pad, grid_size)
    gy = np.linspace(coords[:, 1].min() - pad, coords[:, 1].max() + pad, grid_size)
    inv = 1.0 / (2.0 * bandwidth**2)
    # Product kernel separates per axis: accumulate outer products per point
    # in chunks to bound memory.
    density = np.zeros((grid_size, grid_size))
    chunk = max(1, 2_000_000 // (grid_size * grid_size))
    for start in range(0, coords.shape[0], chunk):
        block = coords[start : start + chunk]
        ex = np.exp(-inv * (gx[None, :] - block[:, 0:1]) ** 2)
        ey = np.exp(-inv * (gy[None, :] - block[:, 1:2]) ** 2)
        density += np.einsum("ni,nj->ij", ey, ex)
    density /= coords.shape[0] * 2.0 * np.pi * bandwidth**2
    return KDESurface(gx, gy, density, float(bandwidth))


def mode_count(surface: KDESurface) -> int:
    """Strict local maxima of the gridded density over the 8-neighborhood."""
    from scipy.ndimage import maximum_filter

    d = surface.density
    footprint = np.ones((3, 3), dtype=bool)
    footprint[1, 1] = False
    neighbor_max = maximum_filter(d, footprint=footprint, mode="constant", cval=-np.inf)
    return int(np.count_nonzero(d > neighbor_max))
