import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothrank.kde import (COSINE_KERNEL_SD, EvaluationGrid, bandwidth,
                            cosine_kernel, estimate_density, make_grid)


class TestKernel:
    def test_integrates_to_one(self):
        # fine trapezoid quadrature over the support
        u = np.linspace(-1.0, 1.0, 200_001)
        mass = np.trapezoid(cosine_kernel(u), u)
        assert abs(mass - 1.0) < 1e-10

    def test_standard_deviation_constant(self):
        u = np.linspace(-1.0, 1.0, 200_001)
        var = np.trapezoid(u * u * cosine_kernel(u), u)
        assert abs(np.sqrt(var) - COSINE_KERNEL_SD) < 1e-10

    def test_symmetric_nonnegative_compact(self):
        u = np.linspace(-2.0, 2.0, 4001)
        k = cosine_kernel(u)
        assert np.all(k >= 0.0)
        assert np.allclose(k, k[::-1])
        assert np.all(k[np.abs(u) > 1.0] == 0.0)


class TestBandwidth:
    def test_two_point_sample(self):
        # hand-derived: sd = sqrt(1/2), type-7 IQR of {0,1} = 0.5, so the
        # spread term is IQR/1.34 and bw = 0.9 * (0.5/1.34) * 2^(-1/5)
        expected = 0.9 * (0.5 / 1.34) * 2.0 ** (-0.2)
        assert bandwidth([0.0, 1.0]) == pytest.approx(expected, rel=1e-12)
        assert bandwidth([0.0, 1.0]) == pytest.approx(0.29234906976362374, rel=1e-12)

    def test_zero_iqr_falls_back_to_sd(self):
        x = [0.0, 0.0, 0.0, 0.0, 1.0]
        sd = float(np.std(x, ddof=1))
        assert bandwidth(x) == pytest.approx(0.9 * sd * 5.0 ** (-0.2), rel=1e-12)

    def test_shrinks_with_sample_size(self):
        rng = np.random.default_rng(0)
        small = bandwidth(rng.normal(size=50))
        large = bandwidth(rng.normal(size=5000))
        assert large < small

    def test_errors(self):
        with pytest.raises(ValueError):
            bandwidth([1.0])
        with pytest.raises(ValueError):
            bandwidth([2.0, 2.0, 2.0])

    def test_scale_equivariant(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=40)
        assert bandwidth(7.0 * x) == pytest.approx(7.0 * bandwidth(x), rel=1e-12)


class TestGrid:
    def test_spans_both_classes_with_margin(self):
        grid = make_grid([0.0, 1.0], [2.0, 3.0])
        h = max(bandwidth([0.0, 1.0]), bandwidth([2.0, 3.0]))
        assert grid.lo == pytest.approx(0.0 - 3.0 * h)
        assert grid.hi == pytest.approx(3.0 + 3.0 * h)
        assert grid.n_points == 512

    def test_contains_all_samples(self):
        rng = np.random.default_rng(2)
        s1, s2 = rng.normal(0, 1, 50), rng.normal(1, 1, 50)
        grid = make_grid(s1, s2)
        assert grid.lo < min(s1.min(), s2.min())
        assert grid.hi > max(s1.max(), s2.max())

    def test_identical_samples_error(self):
        with pytest.raises(ValueError):
            make_grid([1.0, 1.0, 1.0], [1.0, 1.0])

    def test_uniform_spacing(self):
        grid = make_grid([0.0, 1.0, 2.0], [0.5, 1.5, 2.5])
        steps = np.diff(grid.points)
        assert np.allclose(steps, steps[0], rtol=1e-12, atol=0.0)

    def test_rejects_uneven_points(self):
        with pytest.raises(ValueError):
            EvaluationGrid(lo=0.0, hi=1.0, points=np.array([0.0, 0.3, 1.0]))


class TestDensity:
    def test_single_sample_symmetric_peak(self):
        h = 0.5
        grid = EvaluationGrid(lo=-3 * h, hi=3 * h, points=np.linspace(-3 * h, 3 * h, 513))
        est = estimate_density([0.0], grid, h)
        assert np.allclose(est.values, est.values[::-1], atol=1e-14)
        assert np.argmax(est.values) == np.argmin(np.abs(grid.points))

    @pytest.mark.parametrize("seed,dist", [(0, "normal"), (1, "uniform"), (2, "binary")])
    def test_mass_close_to_one(self, seed, dist):
        rng = np.random.default_rng(seed)
        if dist == "normal":
            s = rng.normal(size=200)
        elif dist == "uniform":
            s = rng.uniform(size=200)
        else:
            s = (rng.uniform(size=200) < 0.3).astype(float)
        grid = make_grid(s[:100], s[100:])
        est = estimate_density(s, grid, bandwidth(s))
        # trapezoid quadrature may exceed the true unit mass by its own
        # discretization error (~1e-8 at 512 points)
        assert 0.95 <= est.mass() <= 1.0 + 1e-6

    def test_uniform_density_level(self):
        # Monte-Carlo oracle: averaged over repeated draws, the estimate at
        # the center of U(0,1) should be close to the true density 1.0
        values = []
        for seed in range(20):
            s = np.random.default_rng(seed).uniform(size=100)
            grid = make_grid(s[:50], s[50:])
            est = estimate_density(s, grid, bandwidth(s))
            values.append(np.interp(0.5, grid.points, est.values))
        assert abs(np.mean(values) - 1.0) < 0.15

    def test_translation_equivariance(self):
        rng = np.random.default_rng(3)
        s = rng.normal(size=60)
        h = bandwidth(s)
        grid = make_grid(s[:30], s[30:])
        base = estimate_density(s, grid, h)
        c = 17.25
        shifted_grid = EvaluationGrid(lo=grid.lo + c, hi=grid.hi + c, points=grid.points + c)
        shifted = estimate_density(s + c, shifted_grid, h)
        assert np.allclose(base.values, shifted.values, atol=1e-12)

    def test_scale_equivariance(self):
        rng = np.random.default_rng(4)
        s = rng.normal(size=60)
        h = bandwidth(s)
        grid = make_grid(s[:30], s[30:])
        base = estimate_density(s, grid, h)
        c = 3.5
        scaled_grid = EvaluationGrid(lo=grid.lo * c, hi=grid.hi * c, points=grid.points * c)
        scaled = estimate_density(s * c, scaled_grid, h * c)
        assert np.allclose(scaled.values, base.values / c, rtol=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.floats(-50, 50), min_size=1, max_size=40),
           st.floats(0.01, 10.0))
    def test_nonnegative_everywhere(self, samples, h):
        grid = EvaluationGrid(lo=-60.0, hi=60.0, points=np.linspace(-60, 60, 256))
        est = estimate_density(samples, grid, h)
        assert np.all(est.values >= 0.0)

    def test_errors(self):
        grid = EvaluationGrid(lo=0.0, hi=1.0, points=np.linspace(0, 1, 16))
        with pytest.raises(ValueError):
            estimate_density([], grid, 0.5)
        with pytest.raises(ValueError):
            estimate_density([0.5], grid, 0.0)
