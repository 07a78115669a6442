import numpy as np
import pytest
from scipy.spatial import procrustes
from scipy.stats import ortho_group

from mstdiag import (
    ProjectionConfig,
    cv_select_lambda,
    global_pca,
    kde2d,
    mode_count,
    pca_rcca_project,
    polynomial_design,
)
from mstdiag.dataset import Dataset
from mstdiag.projection import default_lambda_grid, interleaved_folds


def parabola_case(ambient_dims, noise_sd, k=30, n_extra=60, seed=0):
    """A parabolic path plus nearby points, rotated into `ambient_dims`."""
    rng = np.random.default_rng(seed)
    t = np.linspace(-1.0, 1.0, k)
    path2d = np.column_stack([t, t**2])
    extra = path2d[rng.integers(0, k, size=n_extra)] + rng.normal(0, 0.05, size=(n_extra, 2))
    plane = np.vstack([path2d, extra])
    basis = ortho_group.rvs(ambient_dims, random_state=rng)[:, :2]
    x = plane @ basis.T + rng.normal(0, noise_sd, size=(plane.shape[0], ambient_dims))
    return x, x[:k], path2d


class TestPolynomialDesign:
    def test_k3_d2(self):
        assert polynomial_design(3, 2).tolist() == [[1, 1], [2, 4], [3, 9]]

    def test_degree_one_column(self):
        assert polynomial_design(5, 1).ravel().tolist() == [1, 2, 3, 4, 5]

    def test_centered_columns_sum_to_zero(self):
        design = polynomial_design(9, 3)
        centered = design - design.mean(axis=0)
        assert np.all(np.abs(centered.sum(axis=0)) < 1e-9)

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            polynomial_design(1, 2)
        with pytest.raises(ValueError):
            polynomial_design(5, 0)


class TestProjection:
    def test_exact_parabola_in_plane(self):
        x, path, truth = parabola_case(2, noise_sd=0.0)
        config = ProjectionConfig(pca_dims=2, degree=2, lam=1e-10)
        result = pca_rcca_project(x, path, config)
        assert result.canonical_correlations[0] >= 0.999
        _, _, disparity = procrustes(truth, result.path_coords)
        assert disparity < 1e-6

    def test_shape_contract(self):
        x, path, _ = parabola_case(10, noise_sd=0.01, k=12, n_extra=20)
        result = pca_rcca_project(x, path, ProjectionConfig(pca_dims=5, degree=3, lam=0.01))
        assert result.coords.shape == (32, 2)
        assert result.path_coords.shape == (12, 2)
        assert 0.0 <= result.variance_retained <= 1.0

    def test_constant_coordinate_ignored(self):
        x, path, _ = parabola_case(4, noise_sd=0.0, k=10, n_extra=15)
        config = ProjectionConfig(pca_dims=3, degree=2, lam=1e-8)
        base = pca_rcca_project(x, path, config)
        x_aug = np.hstack([x, np.full((x.shape[0], 1), 7.0)])
        path_aug = np.hstack([path, np.full((path.shape[0], 1), 7.0)])
        aug = pca_rcca_project(x_aug, path_aug, config)
        for col in range(2):
            assert np.allclose(base.coords[:, col], aug.coords[:, col], atol=1e-6) or np.allclose(
                base.coords[:, col], -aug.coords[:, col], atol=1e-6
            )

    def test_correlations_sorted_within_unit_interval(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=(40, 8))
        path = x[:10]
        result = pca_rcca_project(x, path, ProjectionConfig(pca_dims=6, degree=3, lam=0.1))
        c1, c2 = result.canonical_correlations
        assert -1e-9 <= c2 <= c1 <= 1.0 + 1e-9

    def test_orthogonal_equivariance(self):
        x, path, _ = parabola_case(6, noise_sd=0.0, k=15, n_extra=25, seed=3)
        rotation = ortho_group.rvs(6, random_state=11)
        config = ProjectionConfig(pca_dims=4, degree=2, lam=1e-9)
        base = pca_rcca_project(x, path, config)
        rotated = pca_rcca_project(x @ rotation, path @ rotation, config)
        _, _, disparity = procrustes(base.coords, rotated.coords)
        assert disparity < 1e-6

    def test_high_dimensional_noisy_recovery(self):
        x, path, truth = parabola_case(50, noise_sd=0.01, seed=1)
        result = pca_rcca_project(x, path, ProjectionConfig(pca_dims=10, degree=2))
        assert result.canonical_correlations[0] >= 0.99
        _, _, disparity = procrustes(truth, result.path_coords)
        assert disparity < 0.05

    def test_degree_reduced_for_short_paths(self):
        x, path, _ = parabola_case(5, noise_sd=0.0, k=6, n_extra=10)
        with pytest.warns(UserWarning, match="reducing"):
            result = pca_rcca_project(x, path, ProjectionConfig(pca_dims=3, degree=5, lam=0.01))
        assert result.coords.shape[1] == 2

    def test_path_of_three_points_cannot_span_plane(self):
        x, path, _ = parabola_case(4, noise_sd=0.0, k=3, n_extra=10)
        with pytest.raises(ValueError, match="too short"), pytest.warns(UserWarning):
            pca_rcca_project(x, path, ProjectionConfig(pca_dims=3, degree=2, lam=0.01))

    def test_variance_retained_matches_global_pca(self):
        rng = np.random.default_rng(6)
        values = rng.normal(size=(30, 7)) * np.arange(1, 8)
        x = values
        path = values[:8]
        result = pca_rcca_project(x, path, ProjectionConfig(pca_dims=3, degree=2, lam=0.05))
        dataset = Dataset(tuple(map(str, range(30))), tuple(f"f{j}" for j in range(7)), values)
        _, retained = global_pca(dataset, 3)
        assert result.variance_retained == pytest.approx(retained, abs=1e-12)


class TestLambdaSelection:
    def test_single_value_grid(self):
        x, path, _ = parabola_case(4, noise_sd=0.0, k=10, n_extra=5)
        design = polynomial_design(10, 2)
        assert cv_select_lambda(path[:, :3], design, [0.25], folds=2) == 0.25

    def test_noiseless_path_prefers_smallest_lambda(self):
        # exact polynomial signal plus a deterministic nuisance direction the
        # weights must suppress: any ridge pulls weight into the nuisance and
        # degrades the held-out fit, so the grid minimum wins
        t = np.linspace(-1.0, 1.0, 20)
        path = np.column_stack([t, t**2, 2.0 * np.sin(5.0 * t)])
        design = polynomial_design(20, 2)
        grid = [1e-8, 1e-2, 1.0, 100.0]
        assert cv_select_lambda(path, design, grid, folds=5) == 1e-8

    def test_fold_arithmetic(self):
        folds = interleaved_folds(10, 5)
        assert all(len(f) == 2 for f in folds)
        assert sorted(v for f in folds for v in f) == list(range(10))

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            cv_select_lambda(np.zeros((6, 2)), polynomial_design(6, 2), [], folds=2)

    def test_default_grid_scales_with_data(self):
        rng = np.random.default_rng(8)
        scores = rng.normal(size=(12, 4))
        grid = default_lambda_grid(scores)
        scaled = default_lambda_grid(scores * 10)
        assert len(grid) == 8
        assert scaled[0] == pytest.approx(grid[0] * 100)


class TestKDE:
    def test_total_mass_near_one(self):
        rng = np.random.default_rng(0)
        coords = rng.normal(size=(200, 2))
        surface = kde2d(coords, bandwidth=0.5, grid_size=128)
        assert 0.99 <= surface.total_mass <= 1.01

    def test_single_point_peak_location_and_symmetry(self):
        surface = kde2d(np.array([[1.0, -2.0]]), bandwidth=0.7, grid_size=65)
        iy, ix = np.unravel_index(np.argmax(surface.density), surface.density.shape)
        assert surface.x[ix] == pytest.approx(1.0, abs=0.05)
        assert surface.y[iy] == pytest.approx(-2.0, abs=0.05)
        assert mode_count(surface) == 1

    def test_two_points_merge_at_large_bandwidth(self):
        coords = np.array([[-2.0, 0.0], [2.0, 0.0]])
        assert mode_count(kde2d(coords, bandwidth=0.4, grid_size=101)) == 2
        assert mode_count(kde2d(coords, bandwidth=5.0, grid_size=101)) == 1

    def test_mixture_mode_transition_as_bandwidth_shrinks(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=(250, 2))
        b = rng.normal(size=(250, 2)) + np.array([7.0, 0.0])
        coords = np.vstack([a, b])
        counts = [mode_count(kde2d(coords, h, grid_size=96)) for h in (8.0, 1.0)]
        assert counts[0] == 1 and counts[1] == 2

    def test_plateau_has_no_strict_maxima(self):
        from mstdiag import KDESurface

        flat = KDESurface(np.linspace(0, 1, 10), np.linspace(0, 1, 10), np.ones((10, 10)), 1.0)
        assert mode_count(flat) == 0

    def test_invalid_bandwidth(self):
        with pytest.raises(ValueError):
            kde2d(np.zeros((3, 2)), bandwidth=0.0)
