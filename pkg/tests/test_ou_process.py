"""Damped response to the noise: samplers, transition laws, generator stencils."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import stats

from levy_ou import (
    GreenKernel,
    LevyTriplet,
    NoisePath,
    OUParams,
    TimeGrid,
    brownian_density,
    char_function_xt,
    fit_loglog_slope,
    generate_path,
    generator_apply,
    green,
    heat_residual,
    jump_snap_error,
    mehler_density,
    psi,
    simulate_exact_gaussian,
    simulate_from_noise,
    terminal_samples_exact,
    terminal_samples_from_noise,
)


def jumpy_triplet():
    return LevyTriplet(1, 0.0, 0.5, 1.0, [0.5, 0.5], [1.0, -2.0])


class TestGreen:
    def test_causality_and_values(self):
        assert green(1.0, -0.5) == 0.0
        assert green(2.0, 0.0) == 1.0
        assert_allclose(green(2.0, 0.75), np.exp(-1.5))
        out = green(1.0, np.array([-1.0, 0.0, 1.0]))
        assert_allclose(out, [0.0, 1.0, np.exp(-1.0)])

    def test_kernel_wrapper(self):
        k = GreenKernel(1.5)
        ts = np.linspace(-1.0, 2.0, 7)
        assert np.array_equal(k(ts), green(1.5, ts))
        with pytest.raises(ValueError):
            GreenKernel(0.0)
        with pytest.raises(ValueError):
            green(-1.0, 1.0)

    def test_half_life(self):
        assert_allclose(green(1.0, np.log(2.0)), 0.5, rtol=1e-14)

    def test_defining_equation_residual_is_second_order(self):
        # forward difference plus m G at the midpoint cancels the O(h) term
        m, t = 1.3, 0.3
        resid = [
            (green(m, t + h) - green(m, t)) / h + m * green(m, t + h / 2.0)
            for h in (0.1, 0.05, 0.025)
        ]
        for coarse, fine in zip(resid, resid[1:]):
            assert 3.4 < abs(coarse) / abs(fine) < 4.6


class TestParams:
    def test_coercion(self):
        params = OUParams(2.0, 0.5)
        assert params.dim == 1
        assert params.x0.shape == (1,)
        assert OUParams(1.0, [0.1, 0.2]).dim == 2

    def test_damping_must_be_positive(self):
        with pytest.raises(ValueError):
            OUParams(0.0, 1.0)
        with pytest.raises(ValueError):
            OUParams(-1.0, 1.0)


class TestExactSampler:
    def test_zero_noise_is_pure_decay(self):
        params = OUParams(1.0, 2.0)
        grid = TimeGrid.from_step(0.01, 1.0)
        path = simulate_exact_gaussian(params, LevyTriplet.gaussian(0.0), grid, 0)
        assert_allclose(path.states[:, 0], 2.0 * np.exp(-grid.nodes), rtol=1e-12)

    def test_drift_relaxes_to_its_fixed_point(self):
        # a > 0, Sigma = 0: X(t) = (a/m)(1 - e^{-mt}) from X(0) = 0
        params = OUParams(2.0, 0.0)
        trip = LevyTriplet.gaussian(0.0, drift=1.5)
        grid = TimeGrid.from_step(0.05, 2.0)
        path = simulate_exact_gaussian(params, trip, grid, 0)
        want = 0.75 * (1.0 - np.exp(-2.0 * grid.nodes))
        assert_allclose(path.states[:, 0], want, rtol=1e-12, atol=1e-14)

    def test_rejects_jump_triplets(self):
        grid = TimeGrid.from_step(0.1, 1.0)
        with pytest.raises(ValueError, match="jumps"):
            simulate_exact_gaussian(OUParams(1.0, 0.0), jumpy_triplet(), grid, 0)

    def test_terminal_moments(self):
        m, sig, x0, t, n = 2.0, 1.3, -1.0, 0.7, 100_000
        samples = terminal_samples_exact(
            OUParams(m, x0), LevyTriplet.gaussian(sig), t, n, seed=31
        )[:, 0]
        mean = x0 * np.exp(-m * t)
        var = sig * (1.0 - np.exp(-2.0 * m * t)) / (2.0 * m)
        assert abs(samples.mean() - mean) < 3.0 * np.sqrt(var / n)
        assert abs(samples.var() - var) < 3.0 * var * np.sqrt(2.0 / n)

    def test_step_count_leaves_the_law_alone(self):
        # the one step and the sixteen step samplers target the same normal law
        m, sig, x0, t, n = 1.0, 0.5, 2.0, 1.0, 50_000
        samples = terminal_samples_exact(
            OUParams(m, x0), LevyTriplet.gaussian(sig), t, n, seed=32, n_steps=16
        )[:, 0]
        mean = x0 * np.exp(-m * t)
        scale = np.sqrt(sig * (1.0 - np.exp(-2.0 * m * t)) / (2.0 * m))
        d, _ = stats.kstest(samples, "norm", args=(mean, scale))
        assert d < 1.5 / np.sqrt(n)


class TestNoiseDrivenSampler:
    def test_zero_triplet_decays(self):
        zero = LevyTriplet(1, 0.0, 0.0)
        grid = TimeGrid.from_step(1e-3, 1.0)
        path = generate_path(zero, grid, 0)
        states = simulate_from_noise(OUParams(1.0, 1.0), path).states[:, 0]
        assert_allclose(states, np.exp(-grid.nodes), rtol=1e-10)

    def test_dimension_mismatch(self):
        path = generate_path(jumpy_triplet(), TimeGrid.from_step(0.1, 1.0), 0)
        with pytest.raises(ValueError, match="dimension"):
            simulate_from_noise(OUParams(1.0, [0.0, 0.0]), path)

    def test_terminal_moments_match_the_lattice_law(self):
        # X_K = sum_j e^{-m (t - t_j - dt/2)} dL_j with E dL = -dt/2 and
        # Var dL = 3 dt - (dt/2)^2 for this triplet; bands are Monte Carlo only
        trip = jumpy_triplet()
        m, dt, t, n = 1.0, 1e-3, 1.0, 20_000
        grid = TimeGrid.from_step(dt, t)
        samples = terminal_samples_from_noise(
            OUParams(m, 0.0), trip, grid, n, seed=33
        )[:, 0]
        beta = np.exp(-m * dt / 2.0)
        inc_mean = -0.5 * dt
        inc_var = 3.0 * dt - inc_mean**2
        mean = beta * inc_mean * -np.expm1(-m * t) / -np.expm1(-m * dt)
        var = beta**2 * inc_var * -np.expm1(-2 * m * t) / -np.expm1(-2 * m * dt)
        kurt = 8.5 * dt * beta**4 * -np.expm1(-4 * m * t) / -np.expm1(-4 * m * dt)
        assert abs(samples.mean() - mean) < 3.0 * np.sqrt(var / n)
        assert abs(samples.var() - var) < 3.0 * np.sqrt((kurt + 2 * var**2) / n)

    def test_pure_drift_reproduces_the_convolution(self):
        # deterministic unit-rate noise: X_1 = int e^{-(1-s)} ds = 1 - 1/e
        trip = LevyTriplet(1, 1.0, 0.0, 0.0, [], [])
        path = generate_path(trip, TimeGrid.from_lattice(10_000, 1.0), seed=0)
        got = float(simulate_from_noise(OUParams(1.0, 0.0), path).states[-1, 0])
        assert abs(got - (1.0 - np.exp(-1.0))) < 1e-3

    def test_self_refinement_is_at_least_first_order(self):
        # smooth deterministic increments; exact limit by antiderivative
        silent = LevyTriplet(1, 0.0, 0.0, 0.0, [], [])
        exact = (np.cos(3.0) + 3.0 * np.sin(3.0)) / 10.0 - np.exp(-1.0) / 10.0
        errs, dts = [], []
        for n in (50, 100, 200, 400):
            grid = TimeGrid.from_lattice(n, 1.0)
            edges = np.arange(n + 1) / n
            inc = (np.sin(3.0 * edges[1:]) - np.sin(3.0 * edges[:-1])) / 3.0
            path = NoisePath(grid, inc.reshape(-1, 1), silent, 0)
            got = float(simulate_from_noise(OUParams(1.0, 0.0), path).states[-1, 0])
            errs.append(abs(got - exact))
            dts.append(grid.dt)
        assert fit_loglog_slope(dts, errs) > 0.9


class TestCharFunction:
    def test_gaussian_closed_form_short_horizon(self):
        params = OUParams(1.0, 1.3)
        trip = LevyTriplet.gaussian(0.6)
        p = 1.7
        got = char_function_xt(params, trip, 0.2, [p], n_quad=10001)
        want = np.exp(
            1j * p * 1.3 * np.exp(-0.2) - p * p * 0.6 * -np.expm1(-0.4) / 4.0
        )
        assert abs(got - want) < 1e-10

    def test_gaussian_closed_form_unit_horizon(self):
        params = OUParams(1.0, 1.3)
        trip = LevyTriplet.gaussian(0.6)
        p = 1.7
        got = char_function_xt(params, trip, 1.0, [p], n_quad=10001)
        want = np.exp(
            1j * p * 1.3 * np.exp(-1.0) - p * p * 0.6 * -np.expm1(-2.0) / 4.0
        )
        assert abs(got - want) < 1e-8

    def test_zero_frequency_is_exactly_one(self):
        params = OUParams(1.0, 2.0)
        assert char_function_xt(params, jumpy_triplet(), 1.0, [0.0]) == 1.0 + 0.0j

    def test_quadrature_is_second_order(self):
        params = OUParams(1.0, 1.3)
        trip = LevyTriplet.gaussian(0.6)
        p = 1.7
        want = np.exp(
            1j * p * 1.3 * np.exp(-1.0) - p * p * 0.6 * -np.expm1(-2.0) / 4.0
        )
        ns = np.array([11, 101, 1001])
        gaps = np.array(
            [abs(char_function_xt(params, trip, 1.0, [p], n_quad=n) - want) for n in ns]
        )
        slope = fit_loglog_slope(ns, gaps)
        assert 1.8 < -slope < 2.2

    def test_modulus_never_exceeds_one(self):
        params = OUParams(1.0, 1.5)
        trip = jumpy_triplet()
        for p in np.linspace(-6.0, 6.0, 25):
            assert abs(char_function_xt(params, trip, 1.0, [p])) <= 1.0 + 1e-12

    def test_long_horizon_reaches_the_stationary_law(self):
        # t >> 1/m: exponent tends to -p^2 Sigma / (4 m) and x0 washes out
        got = char_function_xt(
            OUParams(1.0, 0.0), LevyTriplet.gaussian(1.0), 40.0, [1.0],
            n_quad=200_001,
        )
        assert abs(got - np.exp(-0.25)) < 1e-8

    def test_frequency_shape_checked(self):
        with pytest.raises(ValueError):
            char_function_xt(OUParams(1.0, 0.0), jumpy_triplet(), 1.0, [1.0, 2.0])


class TestDensities:
    def test_mehler_matches_the_normal_law(self):
        params = OUParams(1.0, 2.0)
        xs = np.linspace(-3.0, 5.0, 9)
        mean = 2.0 * np.exp(-0.8)
        var = 0.5 * -np.expm1(-1.6)
        want = np.exp(-0.5 * (xs - mean) ** 2 / var) / np.sqrt(2 * np.pi * var)
        assert_allclose(mehler_density(params, 0.5, 0.8, xs), want, rtol=1e-12)

    def test_mehler_normalization(self):
        params = OUParams(1.0, 2.0)
        xs = np.linspace(-6.0, 8.0, 2801)
        total = np.trapezoid(mehler_density(params, 0.5, 0.8, xs), xs)
        assert_allclose(total, 1.0, rtol=1e-9)

    def test_brownian_by_hand(self):
        xs = np.linspace(-2.0, 2.0, 5)
        want = np.exp(-((xs - 0.5) ** 2) / (4 * 0.3 * 0.7)) / np.sqrt(
            4 * np.pi * 0.3 * 0.7
        )
        assert_allclose(brownian_density(0.3, 0.7, xs, 0.5), want, rtol=1e-12)

    def test_small_damping_approaches_brownian(self):
        params = OUParams(1e-8, 1.0)
        xs = np.linspace(-4.0, 4.0, 101)
        meh = mehler_density(params, 0.5, 1.0, xs)
        bro = brownian_density(0.5, 1.0, xs, 1.0)
        assert np.max(np.abs(meh - bro) / bro) < 1e-4

    def test_two_dimensional_densities(self):
        d_mat = np.array([[0.5, 0.1], [0.1, 0.8]])
        x0 = np.array([0.3, -0.2])
        x = np.array([0.5, 0.5])
        t = 0.9
        want = stats.multivariate_normal.pdf(x, mean=x0, cov=2 * t * d_mat)
        assert_allclose(brownian_density(d_mat, t, x, x0), want, rtol=1e-12)
        m = 0.7
        params = OUParams(m, x0)
        cov = -np.expm1(-2 * m * t) * d_mat / m
        want = stats.multivariate_normal.pdf(x, mean=x0 * np.exp(-m * t), cov=cov)
        assert_allclose(mehler_density(params, d_mat, t, x), want, rtol=1e-12)

    def test_mehler_peak_value(self):
        # at the mean the density is 1 / sqrt(2 pi var)
        var = 0.5 * -np.expm1(-2.0)
        got = mehler_density(OUParams(1.0, 2.0), 0.5, 1.0, 2.0 * np.exp(-1.0))
        assert_allclose(got, 1.0 / np.sqrt(2.0 * np.pi * var), rtol=1e-12)

    def test_mehler_variance_by_quadrature(self):
        var = 0.5 * -np.expm1(-2.0)
        mean = 2.0 * np.exp(-1.0)
        xs = np.linspace(mean - 12.0 * np.sqrt(var), mean + 12.0 * np.sqrt(var), 4001)
        dens = mehler_density(OUParams(1.0, 2.0), 0.5, 1.0, xs)
        got = np.trapezoid((xs - mean) ** 2 * dens, xs)
        assert_allclose(got, var, rtol=1e-9)

    def test_brownian_second_moment_by_quadrature(self):
        xs = np.linspace(-12.0, 12.0, 4001)
        dens = brownian_density(0.5, 1.0, xs, 0.0)
        got = np.trapezoid(xs**2 * dens, xs)
        assert_allclose(got, 1.0, rtol=1e-9)


class TestGenerator:
    def test_quadratic_with_drift_and_diffusion(self):
        trip = LevyTriplet(1, 0.3, 0.8)
        xs = np.linspace(0.0, 3.0, 31)
        vals = xs**2
        i = 15  # x = 1.5
        # -a 2x + Sigma/2 * 2 = -0.9 + 0.8
        assert_allclose(generator_apply(trip, xs, vals, i), -0.1, atol=1e-9)

    def test_quadratic_with_jumps(self):
        # z sum w ((x+s)^2 - x^2) adds 3 - x - 2Dx' terms: total 3 - x here
        trip = jumpy_triplet()
        xs = np.linspace(-6.0, 6.0, 25)  # h = 0.5, jumps land on nodes
        vals = xs**2
        for i, x in ((12, 0.0), (16, 2.0), (8, -2.0)):
            assert_allclose(generator_apply(trip, xs, vals, i), 3.0 - x, atol=1e-9)

    def test_complex_exponential_recovers_the_symbol(self):
        trip = jumpy_triplet()
        k = 0.8
        xs = np.arange(-801, 802) * 0.005  # jumps are multiples of h
        vals = np.exp(1j * k * xs)
        i = xs.size // 2 + 200  # x = 1.0
        a = float(trip.drift[0])
        sig = float(trip.diffusion[0, 0])
        symbol = -1j * a * k - 0.5 * sig * k * k + trip.jump_rate * (
            trip.jump_weights @ (np.exp(1j * k * trip.jump_vectors[:, 0]) - 1.0)
        )
        got = generator_apply(trip, xs, vals, i) / vals[i]
        assert abs(got - symbol) < 1e-4

    def test_boundary_and_off_grid_jumps_rejected(self):
        trip = jumpy_triplet()
        xs = np.linspace(-6.0, 6.0, 25)
        vals = xs**2
        with pytest.raises(ValueError, match="boundary"):
            generator_apply(trip, xs, vals, 0)
        with pytest.raises(ValueError, match="leaves the grid"):
            generator_apply(trip, xs, vals, 23)  # +1 jump exits on the right

    def test_grid_validation(self):
        trip = LevyTriplet.gaussian(1.0)
        with pytest.raises(ValueError, match="uniform"):
            generator_apply(trip, np.array([0.0, 1.0, 3.0]), np.zeros(3), 1)
        with pytest.raises(ValueError, match="sampled on the grid"):
            generator_apply(trip, np.linspace(0, 1, 5), np.zeros(4), 1)

    def test_jump_snap_error(self):
        trip = jumpy_triplet()
        assert jump_snap_error(trip, 0.5) == 0.0
        assert_allclose(jump_snap_error(trip, 0.3), 0.1, rtol=1e-12)
        assert jump_snap_error(LevyTriplet.gaussian(1.0), 0.3) == 0.0

    def test_constant_field_is_annihilated(self):
        # derivative, diffusion, and jump-difference terms all vanish
        xs = np.arange(-10.0, 10.5, 0.5)
        vals = np.full(xs.size, 3.7)
        i = int(np.flatnonzero(xs == 0.0)[0])
        assert generator_apply(jumpy_triplet(), xs, vals, i) == 0.0


class TestHeatResidual:
    def test_exact_affine_field_has_no_residual(self):
        d_coef = 0.7
        xs = np.linspace(-4.0, 4.0, 101)

        def field(t):
            return xs**2 + 2.0 * d_coef * t

        assert heat_residual(d_coef, xs, [0.5, 1.0], field=field) < 1e-9

    def test_default_field_residual_is_second_order(self):
        coarse = heat_residual(0.5, np.linspace(-4.0, 4.0, 101), [0.5])
        fine = heat_residual(0.5, np.linspace(-4.0, 4.0, 201), [0.5])
        assert 3.0 < coarse / fine < 5.0

    def test_time_step_validation(self):
        xs = np.linspace(-4.0, 4.0, 101)
        with pytest.raises(ValueError, match="time_step"):
            heat_residual(0.5, xs, [0.5], time_step=0.0)
        with pytest.raises(ValueError, match="exceed"):
            heat_residual(0.5, xs, [1e-5])

    def test_symbol_and_psi_are_consistent_for_pure_diffusion(self):
        # for a symmetric Gaussian law the generator symbol equals psi(k)
        trip = LevyTriplet.gaussian(0.9)
        k = 0.6
        xs = np.arange(-401, 402) * 0.01
        vals = np.exp(1j * k * xs)
        i = xs.size // 2
        got = generator_apply(trip, xs, vals, i) / vals[i]
        assert abs(got - psi(trip, k)) < 1e-4

    def test_static_field_with_no_diffusion(self):
        # D = 0 turns the equation into d/dt P = 0
        xs = np.linspace(-3.0, 3.0, 121)
        got = heat_residual(0.0, xs, [0.5], field=lambda t: np.exp(-xs**2))
        assert got == 0.0
