"""Lattice noise: grids, seeded paths, pairings, and the mollified kernels."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from levy_ou import (
    LevyTriplet,
    NoisePath,
    TestFunction,
    TimeGrid,
    causal_kernel_value,
    char_functional,
    chi_transition,
    empirical_cf,
    generate_path,
    increment_fluctuation,
    l2_cauchy_gap,
    log_cf_riemann,
    make_rng,
    mollified_kernel,
    mollified_kernel_value,
    pair,
    sample_increments,
    unit_interval_covariance,
)


def jumpy_triplet():
    return LevyTriplet(1, 0.0, 0.5, 1.0, [0.5, 0.5], [1.0, -2.0])


class TestTimeGrid:
    def test_lattice_constructor(self):
        grid = TimeGrid.from_lattice(8, 2.0)
        assert grid.dt == 0.125
        assert grid.n_steps == 16
        assert grid.t_end == 2.0
        assert_allclose(grid.nodes, np.arange(17) * 0.125)
        assert_allclose(grid.interval_starts, np.arange(16) * 0.125)

    def test_step_constructor(self):
        grid = TimeGrid.from_step(0.25, 1.0)
        assert grid.n_steps == 4

    def test_invalid_grids(self):
        with pytest.raises(ValueError):
            TimeGrid(-0.1, 5)
        with pytest.raises(ValueError):
            TimeGrid(0.1, 0)
        with pytest.raises(ValueError, match="multiple"):
            TimeGrid.from_lattice(4, 0.3)
        with pytest.raises(ValueError, match="multiple"):
            TimeGrid.from_step(0.3, 1.0)


class TestPaths:
    def test_seeded_generation_is_reproducible(self):
        trip = jumpy_triplet()
        grid = TimeGrid.from_step(0.01, 1.0)
        a = generate_path(trip, grid, 5)
        b = generate_path(trip, grid, 5)
        c = generate_path(trip, grid, 6)
        assert np.array_equal(a.increments, b.increments)
        assert not np.array_equal(a.increments, c.increments)
        assert a.increments.shape == (100, 1)
        assert a.seed == 5

    def test_increments_are_read_only(self):
        path = generate_path(jumpy_triplet(), TimeGrid.from_step(0.1, 1.0), 0)
        with pytest.raises(ValueError):
            path.increments[0, 0] = 0.0

    def test_shape_enforced(self):
        grid = TimeGrid.from_step(0.1, 1.0)
        with pytest.raises(ValueError, match="shape"):
            NoisePath(grid, np.zeros((7, 1)), jumpy_triplet(), 0)


class TestPairing:
    def test_scalar_pairing_matches_direct_sum(self):
        trip = jumpy_triplet()
        grid = TimeGrid.from_step(0.05, 1.0)
        path = generate_path(trip, grid, 1)
        f = TestFunction.from_callable(lambda t: np.cos(t), 1.0, 21)
        got = pair(path, f)
        want = np.cos(grid.interval_starts) @ path.increments[:, 0]
        assert got.shape == (1,)
        assert_allclose(got[0], want, rtol=1e-14)

    def test_finer_test_function_grid_is_subsampled(self):
        trip = jumpy_triplet()
        grid = TimeGrid.from_step(0.1, 1.0)
        path = generate_path(trip, grid, 2)
        coarse = TestFunction.from_callable(lambda t: t + 1.0, 1.0, 11)
        fine = TestFunction.from_callable(lambda t: t + 1.0, 1.0, 101)
        assert pair(path, coarse)[0] == pair(path, fine)[0]

    def test_vector_pairing(self):
        trip = LevyTriplet.gaussian(1.0, dim=2)
        grid = TimeGrid.from_step(0.1, 1.0)
        path = generate_path(trip, grid, 3)
        f = TestFunction.from_callable(
            lambda t: np.stack([np.ones_like(t), t], axis=-1), 1.0, 11
        )
        fvals = np.stack([np.ones(10), grid.interval_starts], axis=-1)
        want = float(np.sum(fvals * path.increments))
        assert_allclose(pair(path, f), want, rtol=1e-14)

    def test_coverage_and_alignment_errors(self):
        path = generate_path(jumpy_triplet(), TimeGrid.from_step(0.1, 1.0), 0)
        short = TestFunction.constant(1.0, 0.5, num=6)
        with pytest.raises(ValueError, match="cover"):
            pair(path, short)
        misaligned = TestFunction.constant(1.0, 1.2, num=5)  # dt = 0.3
        with pytest.raises(ValueError, match="align"):
            pair(path, misaligned)

    def test_zero_function_pairs_to_zero(self):
        path = generate_path(jumpy_triplet(), TimeGrid.from_step(0.1, 1.0), 3)
        assert pair(path, TestFunction.constant(0.0, 1.0, num=11))[0] == 0.0

    def test_unit_function_sums_a_pure_drift_exactly(self):
        # four increments of exactly 0.25 each
        trip = LevyTriplet(1, 1.0, 0.0, 0.0, [], [])
        path = generate_path(trip, TimeGrid.from_step(0.25, 1.0), 0)
        assert pair(path, TestFunction.constant(1.0, 1.0, num=5))[0] == 1.0


class TestEmpiricalCF:
    def test_matches_functional_within_monte_carlo_band(self):
        trip = LevyTriplet.gaussian(1.0)
        grid = TimeGrid.from_step(0.01, 2.0)
        f = TestFunction.from_callable(lambda t: np.exp(-t), 2.0, 201)
        emp = empirical_cf(trip, grid, f, 20_000, seed=21)
        assert abs(emp - char_functional(trip, f)) < 0.03

    def test_deterministic(self):
        trip = jumpy_triplet()
        grid = TimeGrid.from_step(0.05, 1.0)
        f = TestFunction.constant(0.5, 1.0, num=21)
        assert empirical_cf(trip, grid, f, 500, seed=4) == empirical_cf(
            trip, grid, f, 500, seed=4
        )

    def test_zero_function_gives_unit_cf(self):
        grid = TimeGrid.from_step(0.05, 1.0)
        f = TestFunction.constant(0.0, 1.0, num=21)
        assert empirical_cf(jumpy_triplet(), grid, f, 256, seed=0) == 1.0 + 0.0j

    def test_large_ensemble_meets_the_root_n_band(self):
        # 1e5 paths on the dt = 0.05 lattice against the fine quadrature value
        trip = LevyTriplet.gaussian(1.0)
        grid = TimeGrid.from_lattice(20, 10.0)
        nodes = np.linspace(0.0, 10.0, 201)
        f = TestFunction(nodes, np.exp(-nodes))
        want = char_functional(
            trip, TestFunction.from_callable(lambda t: np.exp(-t), 10.0, 20001)
        )
        emp = empirical_cf(trip, grid, f, 100_000, seed=62)
        assert abs(emp - want) < 5.0 / np.sqrt(100_000)


class TestRiemannLog:
    def test_constant_function_value(self):
        # the scale-n lattice sums (Tn + 1) equal terms psi(c)/n
        from levy_ou import psi

        trip = jumpy_triplet()
        f = TestFunction.constant(0.7, 10.0, num=101)
        for n in (3, 10, 47):
            want = (10 * n + 1) * psi(trip, 0.7) / n
            assert_allclose(log_cf_riemann(trip, f, n), want, rtol=1e-13)

    def test_gap_shrinks_with_the_lattice(self):
        trip = LevyTriplet.gaussian(1.0)
        f = TestFunction.from_callable(lambda t: np.exp(-t), 10.0, 10001)
        log_ref = complex(np.log(char_functional(trip, f)))
        gaps = [abs(log_cf_riemann(trip, f, n) - log_ref) for n in (10, 100, 1000)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 3e-4

    def test_zero_function_is_zero(self):
        f = TestFunction.constant(0.0, 1.0, num=11)
        assert log_cf_riemann(jumpy_triplet(), f, 7) == 0j


class TestMomentHelpers:
    def test_unit_interval_covariance_by_hand(self):
        got = unit_interval_covariance(jumpy_triplet())
        assert got.shape == (1, 1)
        assert got[0, 0] == 3.0

    def test_unit_interval_covariance_2d(self):
        trip = LevyTriplet(
            2, [0.0, 0.0], np.diag([1.0, 2.0]), 2.0, [0.5, 0.5],
            [[1.0, 0.0], [0.5, -1.0]],
        )
        s = trip.jump_vectors
        want = np.diag([1.0, 2.0]) + 2.0 * (
            0.5 * np.outer(s[0], s[0]) + 0.5 * np.outer(s[1], s[1])
        )
        assert_allclose(unit_interval_covariance(trip), want, rtol=1e-15)

    def test_fluctuation_halves_exactly(self):
        trip = jumpy_triplet()
        assert increment_fluctuation(trip, 1) == 3.0
        for n in (1, 2, 3, 5, 10, 64, 100):
            assert increment_fluctuation(trip, 2 * n) == increment_fluctuation(
                trip, n
            ) / 2.0
        with pytest.raises(ValueError):
            increment_fluctuation(trip, 0)

    def test_lattice_sums_reproduce_the_unit_covariance(self):
        # variance of the summed cell increments over [0, 1] is v = 3
        trip = jumpy_triplet()
        n_paths, n = 10_000, 16
        inc = sample_increments(trip, 1.0 / n, n_paths * n, make_rng(51))
        totals = inc.reshape(n_paths, n).sum(axis=1)
        # 3 sigma band for a variance estimate, kurtosis term included
        band = 3.0 * np.sqrt((8.5 + 2.0 * 9.0) / n_paths)
        assert abs(totals.var() - 3.0) < band


class TestKernels:
    def test_chi_transition_profile(self):
        n = 4
        assert chi_transition(-1.0, n) == 0.0
        assert chi_transition(0.0, n) == 0.0
        assert chi_transition(1.0 / n, n) == 1.0
        assert chi_transition(2.0, n) == 1.0
        assert chi_transition(0.5 / n, n) == 0.5
        inside = chi_transition(np.linspace(0.0, 0.25, 50), n)
        assert np.all(np.diff(inside) > 0.0)

    def test_causal_kernel(self):
        assert causal_kernel_value(1.0, 2.0, 3.0) == 0.0
        assert causal_kernel_value(1.0, 2.0, 2.0) == 1.0
        assert_allclose(causal_kernel_value(2.0, 1.0, 0.25), np.exp(-1.5))

    def test_mollified_kernel_values(self):
        m, t, n = 1.5, 2.0, 8
        # zero at and beyond the evaluation time
        assert mollified_kernel_value(m, t, n, t) == 0.0
        assert mollified_kernel_value(m, t, n, t + 0.5) == 0.0
        # matches the sharp kernel outside the transition window
        for tp in (0.0, 1.0, t - 1.0 / n):
            assert mollified_kernel_value(m, t, n, tp) == np.exp(-m * (t - tp))
        # half height at half window depth
        tp = t - 0.5 / n
        assert_allclose(
            mollified_kernel_value(m, t, n, tp), 0.5 * np.exp(-m * 0.5 / n), rtol=1e-15
        )

    def test_mollified_kernel_function_wraps_the_values(self):
        m, t, n = 1.0, 1.5, 16
        f = mollified_kernel(m, t, n)
        pts = np.array([0.0, 0.3, 1.4, 1.45, 1.5])
        assert np.array_equal(f.value_at(pts), mollified_kernel_value(m, t, n, pts))
        assert f.times.size >= 1025

    def test_kernels_increase_toward_the_sharp_one(self):
        m, t = 1.0, 1.0
        tps = np.linspace(0.0, t, 501)
        lo = mollified_kernel_value(m, t, 8, tps)
        hi = mollified_kernel_value(m, t, 32, tps)
        sharp = causal_kernel_value(m, t, tps)
        assert np.all(lo <= hi + 1e-15)
        assert np.all(hi <= sharp + 1e-15)

    def test_l2_gap_shrinks_fast(self):
        trip = jumpy_triplet()
        g1 = l2_cauchy_gap(trip, 1.0, 1.0, 8, 16)
        g2 = l2_cauchy_gap(trip, 1.0, 1.0, 64, 128)
        assert 0.0 < g2 < g1
        assert g1 / g2 > 4.0

    def test_l2_gap_sees_the_mean(self):
        base = l2_cauchy_gap(LevyTriplet.gaussian(1.0), 1.0, 1.0, 8, 16)
        drifted = l2_cauchy_gap(LevyTriplet.gaussian(1.0, drift=2.0), 1.0, 1.0, 8, 16)
        assert drifted > base

    def test_l2_gap_vanishes_without_noise(self):
        silent = LevyTriplet(1, 0.0, 0.0, 0.0, [], [])
        assert l2_cauchy_gap(silent, 1.0, 1.0, 4, 8) == 0.0
        assert l2_cauchy_gap(silent, 1.0, 1.0, 8, 128) == 0.0

    def test_adjacent_scale_gaps_decrease(self):
        gaps = [
            l2_cauchy_gap(LevyTriplet.gaussian(1.0), 1.0, 1.0, n, 2 * n)
            for n in (4, 8, 16, 32)
        ]
        assert gaps[0] > gaps[1] > gaps[2] > gaps[3]

    def test_l2_gap_rejects_bad_scales(self):
        with pytest.raises(ValueError, match="differ"):
            l2_cauchy_gap(jumpy_triplet(), 1.0, 1.0, 8, 8)
        with pytest.raises(ValueError, match="dimension 1"):
            l2_cauchy_gap(LevyTriplet.gaussian(1.0, dim=2), 1.0, 1.0, 8, 16)
