import numpy as np
import pytest
from scipy.special import ndtr
from scipy.stats import chisquare

from distprofile import (
    MetricSpec,
    ScenarioSpec,
    ValidationError,
    distance_matrix,
    gen_gauss2d_distributions,
    gen_gauss2d_pair,
    gen_mixture_pair,
    gen_mvnorm_pair,
    gen_prefattach,
    gen_prefattach_pair,
    gen_t_pair,
    generate_pair,
    power_study,
)
from distprofile.simulate import _orthogonal_from_ones, scenario_metric


class TestScenarioSpec:
    def test_unknown_name(self):
        with pytest.raises(ValidationError):
            ScenarioSpec("brownian", 0.1)

    def test_out_of_range_needs_flag(self):
        with pytest.raises(ValidationError, match="extrapolation"):
            ScenarioSpec("mvnorm_mean_shift", 2.0)
        ScenarioSpec("mvnorm_mean_shift", 2.0, extrapolation=True)


class TestMvnormPair:
    def test_eigenvalue_spectrum_p4(self):
        lam = np.cos(np.arange(1, 5) * np.pi / 4) + 1.5
        want = [1.5 + np.sqrt(2) / 2, 1.5, 1.5 - np.sqrt(2) / 2, 0.5]
        assert lam == pytest.approx(want, abs=1e-12)

    def test_orthogonal_completion(self):
        for p in [2, 5, 17]:
            u = _orthogonal_from_ones(p)
            assert np.allclose(u @ u.T, np.eye(p), atol=1e-12)
            assert np.allclose(u[:, 0], p**-0.5, atol=1e-15)

    def test_null_case_shapes(self):
        spec = ScenarioSpec("mvnorm_mean_shift", 0.0, n=7, m=9, p=4)
        x, y = gen_mvnorm_pair(spec, 1)
        assert x.objects.shape == (7, 4)
        assert y.objects.shape == (9, 4)

    def test_sample_covariance_matches_target(self):
        p = 4
        spec = ScenarioSpec("mvnorm_mean_shift", 0.3, n=100_000, m=2, p=p)
        x, _ = gen_mvnorm_pair(spec, 7)
        lam = np.cos(np.arange(1, p + 1) * np.pi / p) + 1.5
        u = _orthogonal_from_ones(p)
        target = u @ np.diag(lam) @ u.T
        sample_cov = np.cov(x.objects, rowvar=False)
        assert np.abs(sample_cov - target).max() < 0.05

    def test_mean_shift_applied(self):
        spec = ScenarioSpec("mvnorm_mean_shift", 1.0, n=2, m=50_000, p=3)
        _, y = gen_mvnorm_pair(spec, 3)
        assert np.abs(y.objects.mean(axis=0) - 1.0).max() < 0.05

    def test_scale_change_bound(self):
        with pytest.raises(ValidationError):
            gen_mvnorm_pair(
                ScenarioSpec("mvnorm_scale_change", 0.85, extrapolation=True), 0
            )

    def test_scale_change_variances(self):
        spec = ScenarioSpec("mvnorm_scale_change", 0.4, n=50_000, m=50_000, p=2)
        x, y = gen_mvnorm_pair(spec, 11)
        assert np.abs(np.var(x.objects, axis=0) - 0.8).max() < 0.03
        assert np.abs(np.var(y.objects, axis=0) - 0.4).max() < 0.03

    def test_reproducible(self):
        spec = ScenarioSpec("mvnorm_mean_shift", 0.2, n=5, m=5, p=3)
        a = gen_mvnorm_pair(spec, 9)
        b = gen_mvnorm_pair(spec, 9)
        assert np.array_equal(a[0].objects, b[0].objects)
        assert np.array_equal(a[1].objects, b[1].objects)


class TestMixturePair:
    def test_zero_param_collapses_to_normal(self):
        spec = ScenarioSpec("mvnorm_vs_mixture", 0.0, n=2, m=60_000, p=10)
        _, y = gen_mixture_pair(spec, 5)
        assert np.abs(y.objects.mean(axis=0)).max() < 0.05
        assert np.abs(np.var(y.objects, axis=0) - 1.0).max() < 0.05

    def test_overall_mean_zero(self):
        spec = ScenarioSpec("mvnorm_vs_mixture", 1.0, n=2, m=100_000, p=10)
        _, y = gen_mixture_pair(spec, 6)
        assert np.abs(y.objects.mean(axis=0)).max() < 0.02

    def test_shifted_block_has_inflated_variance(self):
        spec = ScenarioSpec("mvnorm_vs_mixture", 1.0, n=2, m=60_000, p=10)
        _, y = gen_mixture_pair(spec, 8)
        var = np.var(y.objects, axis=0)
        assert var[0] > 1.5  # 1 + param^2
        assert abs(var[-1] - 1.0) < 0.05


class TestTPair:
    def test_large_df_near_normal_kurtosis(self):
        spec = ScenarioSpec("mvnorm_vs_t", 200.0, n=2, m=100_000, p=2,
                            extrapolation=True)
        _, y = gen_t_pair(spec, 4)
        v = y.objects.ravel()
        kurt = np.mean((v - v.mean()) ** 4) / np.var(v) ** 2
        assert abs(kurt - 3.0) < 0.2

    def test_invalid_df(self):
        with pytest.raises(ValidationError):
            gen_t_pair(ScenarioSpec("mvnorm_vs_t", -1.0, extrapolation=True), 0)


class TestGauss2d:
    def test_center_value_quarter(self):
        # 65-point grid contains the origin exactly
        sample = gen_gauss2d_distributions(1, (0.0, 0.0), 0.0, 1, grid_size=65)
        grid = sample.objects[0]
        assert grid[32, 32] == pytest.approx(0.25, abs=1e-9)

    def test_corner_and_monotonicity(self):
        sample = gen_gauss2d_distributions(20, (0.5, 0.0), 0.5, 2, grid_size=32)
        grids = sample.objects
        assert np.all(grids[:, -1, -1] == 1.0)
        assert np.all(np.diff(grids, axis=1) >= -1e-15)
        assert np.all(np.diff(grids, axis=2) >= -1e-15)
        # raw (unnormalized) corner is within the tail bound of one
        assert grids.min() >= 0.0

    def test_matches_product_of_marginals(self):
        sample = gen_gauss2d_distributions(1, (0.3, -0.2), 0.0, 3, grid_size=16)
        grid = sample.objects[0]
        axis = np.linspace(-4.0, 4.0, 16)
        fx = ndtr((axis - 0.3) / 0.5)
        fy = ndtr((axis + 0.2) / 0.5)
        want = np.outer(fx, fy)
        want /= want[-1, -1]
        assert np.abs(grid - want).max() < 1e-12

    def test_resolution_floor(self):
        with pytest.raises(ValidationError):
            gen_gauss2d_distributions(1, (0.0, 0.0), 0.5, 0, grid_size=8)

    def test_pair_scenarios(self):
        spec = ScenarioSpec("gauss2d_distn_scale_change", 0.2, n=4, m=5, grid_size=16)
        x, y = gen_gauss2d_pair(spec, 5)
        assert x.objects.shape == (4, 16, 16)
        assert y.objects.shape == (5, 16, 16)


class TestPrefattach:
    def test_edge_count_exact(self):
        sample = gen_prefattach(6, 40, 0.7, 2)
        sums = sample.objects.sum(axis=(1, 2))
        assert np.all(sums == 2 * 39)

    def test_binary_symmetric(self):
        sample = gen_prefattach(3, 25, 0.0, 3)
        adj = sample.objects
        assert np.array_equal(adj, adj.transpose(0, 2, 1))
        assert set(np.unique(adj)) <= {0.0, 1.0}
        assert np.all(np.diagonal(adj, axis1=1, axis2=2) == 0.0)

    def test_uniform_attachment_chi_square(self):
        # with theta = 0 the third node picks each of the first two uniformly;
        # aggregate over many networks and positions
        rng_seed = 10
        sample = gen_prefattach(5000, 4, 0.0, rng_seed)
        # node 2 attached to node 0 or 1 uniformly
        counts = np.array(
            [sample.objects[:, 2, 0].sum(), sample.objects[:, 2, 1].sum()]
        )
        assert chisquare(counts).pvalue > 0.001

    def test_hub_dominance_grows_with_theta(self):
        flat = gen_prefattach(200, 60, 0.0, 4)
        spiky = gen_prefattach(200, 60, 5.0, 5)
        max_flat = flat.objects.sum(axis=1).max(axis=1).mean()
        max_spiky = spiky.objects.sum(axis=1).max(axis=1).mean()
        assert max_spiky > max_flat

    def test_pair_reproducible(self):
        spec = ScenarioSpec("prefattach_network", 0.5, n=3, m=3, nodes=20)
        a = gen_prefattach_pair(spec, 6)
        b = gen_prefattach_pair(spec, 6)
        assert np.array_equal(a[1].objects, b[1].objects)


class TestGeneratePair:
    @pytest.mark.parametrize(
        "name,param",
        [
            ("mvnorm_mean_shift", 0.1),
            ("mvnorm_scale_change", 0.2),
            ("mvnorm_vs_mixture", 0.5),
            ("mvnorm_vs_t", 5.0),
            ("gauss2d_distn_mean_shift", 0.1),
            ("gauss2d_distn_scale_change", 0.1),
            ("prefattach_network", 0.3),
        ],
    )
    def test_dispatch_and_metric_compatibility(self, name, param):
        spec = ScenarioSpec(name, param, n=3, m=3, p=4, nodes=12, grid_size=16)
        x, y = generate_pair(spec, 1)
        metric = scenario_metric(spec)
        d = distance_matrix(metric, x)
        assert d.shape == (3, 3)
        assert np.all(d >= 0)


class TestPowerStudy:
    def test_single_run_rate_binary(self):
        spec = ScenarioSpec("mvnorm_scale_change", 0.0, n=10, m=10, p=3)
        curve = power_study(spec, [0.0], test="dp", runs=1, k=20, seed=0)
        assert curve.rates[0] in (0.0, 1.0)

    def test_deterministic(self):
        spec = ScenarioSpec("mvnorm_mean_shift", 0.0, n=8, m=8, p=3)
        a = power_study(spec, [0.0, 0.5], test="energy", runs=3, k=20, seed=5)
        b = power_study(spec, [0.0, 0.5], test="energy", runs=3, k=20, seed=5)
        assert np.array_equal(a.rates, b.rates)

    def test_se_formula(self):
        spec = ScenarioSpec("mvnorm_mean_shift", 0.0, n=8, m=8, p=3)
        curve = power_study(spec, [0.8], test="dp", runs=5, k=20, seed=2)
        r = curve.rates[0]
        assert curve.ses[0] == pytest.approx(np.sqrt(r * (1 - r) / 5), abs=1e-12)

    def test_hotelling_needs_vectors(self):
        spec = ScenarioSpec("prefattach_network", 0.2, n=4, m=4, nodes=10)
        with pytest.raises(ValidationError):
            power_study(spec, [0.2], test="hotelling", runs=1, k=10)

    def test_strong_signal_rejects(self):
        spec = ScenarioSpec("mvnorm_scale_change", 0.4, n=30, m=30, p=10)
        curve = power_study(spec, [0.4], test="dp", runs=5, k=100, seed=3)
        assert curve.rates[0] >= 0.8
