import math

import numpy as np
import pytest

from oscbath import (BathGrid, IntegrationFailure, SystemConfig,
                     build_bath_grid, build_generator, evolve_exact,
                     evolve_rk4, gershgorin_bound, norm_residual)


class TestGenerator:
    def test_two_mode_resonant(self, two_mode_grid):
        gen = build_generator(two_mode_grid)
        assert np.array_equal(gen, [[0.0, 0.1], [0.1, 0.0]])

    def test_three_by_three_entries(self):
        grid = BathGrid(1.0, [0.5, 1.5], [0.1, 0.1], [0.25, -0.25])
        gen = build_generator(grid)
        expected = [[0.0, 0.1, 0.1],
                    [0.1, -0.5, 0.0],
                    [0.1, 0.0, 0.5]]
        assert np.allclose(gen, expected, atol=0)

    def test_reference_generator_shape(self, reference_gen):
        assert reference_gen.shape == (1001, 1001)
        gamma = 0.1 / math.sqrt(1000)
        assert np.all(reference_gen[0, 1:] == gamma)
        assert np.all(reference_gen[1:, 0] == gamma)
        assert reference_gen[0, 0] == 0.0
        assert np.array_equal(reference_gen, reference_gen.T)
        off_arrow = reference_gen[1:, 1:].copy()
        np.fill_diagonal(off_arrow, 0.0)
        assert np.all(off_arrow == 0.0)

    def test_gershgorin_bound(self, reference_gen):
        bound = gershgorin_bound(reference_gen)
        eigmax = np.abs(np.linalg.eigvalsh(np.array(reference_gen))).max()
        assert bound >= eigmax


class TestEvolveExact:
    def test_identity_at_t0(self, small_grid):
        traj = evolve_exact(build_generator(small_grid), [0.0])
        unit = np.zeros(small_grid.n + 1)
        unit[0] = 1.0
        assert np.abs(traj.states[0] - unit).max() < 1e-12

    def test_two_mode_full_transfer(self, two_mode_grid):
        # analytic solution: f = cos(gamma t), g = -i sin(gamma t)
        gen = build_generator(two_mode_grid)
        t = np.linspace(0.0, 5 * math.pi, 101)
        traj = evolve_exact(gen, t)
        assert np.abs(traj.f - np.cos(0.1 * t)).max() < 1e-12
        assert np.abs(traj.g[:, 0] + 1j * np.sin(0.1 * t)).max() < 1e-12
        assert abs(traj.f[-1]) < 1e-12
        assert abs(abs(traj.g[-1, 0]) - 1.0) < 1e-12

    def test_norm_conserved_at_scale(self, reference_traj):
        assert norm_residual(reference_traj) < 1e-9

    def test_near_complete_transfer_at_t100(self, reference_traj):
        assert abs(reference_traj.f[-1]) ** 2 < 0.01

    def test_time_reversal(self, small_grid):
        gen = build_generator(small_grid)
        forward = evolve_exact(gen, [0.0, 7.3])
        # the propagator for -t is the propagator of the negated generator
        back = evolve_exact(-np.array(gen), [0.0, 7.3], u0=forward.states[-1])
        unit = np.zeros(small_grid.n + 1, dtype=complex)
        unit[0] = 1.0
        assert np.abs(back.states[-1] - unit).max() < 1e-9

    def test_linearity_exact_for_power_of_two_scales(self, small_grid):
        gen = build_generator(small_grid)
        times = np.linspace(0.0, 5.0, 11)
        base = evolve_exact(gen, times)
        n = small_grid.n + 1
        for scale in (2.0, 0.5, 2.0j, -2.0):
            u0 = np.zeros(n, dtype=complex)
            u0[0] = scale
            scaled = evolve_exact(gen, times, u0=u0)
            assert np.array_equal(scaled.states, scale * base.states)

    def test_linearity_general_scale(self, small_grid):
        gen = build_generator(small_grid)
        times = np.linspace(0.0, 5.0, 11)
        base = evolve_exact(gen, times)
        n = small_grid.n + 1
        u0 = np.zeros(n, dtype=complex)
        u0[0] = 0.3 - 0.7j
        scaled = evolve_exact(gen, times, u0=u0)
        assert np.abs(scaled.states - u0[0] * base.states).max() < 1e-13

    def test_rejects_asymmetric_generator(self, small_grid):
        gen = np.array(build_generator(small_grid))
        gen[0, 1] *= 2.0
        with pytest.raises(ValueError, match="symmetric"):
            evolve_exact(gen, [0.0, 1.0])

    def test_rejects_bad_times(self, two_mode_grid):
        gen = build_generator(two_mode_grid)
        with pytest.raises(ValueError):
            evolve_exact(gen, [1.0, 0.5])
        with pytest.raises(ValueError):
            evolve_exact(gen, [-1.0, 0.5])
        with pytest.raises(ValueError):
            evolve_exact(gen, [])


class TestEvolveRK4:
    def test_two_mode_matches_analytic(self, two_mode_grid):
        gen = build_generator(two_mode_grid)
        traj = evolve_rk4(gen, 5 * math.pi, 0.01, sample_every=10)
        assert np.abs(traj.f - np.cos(0.1 * traj.times)).max() < 1e-8

    def test_zero_horizon_single_sample(self, two_mode_grid):
        traj = evolve_rk4(build_generator(two_mode_grid), 0.0, 0.01)
        assert traj.times.tolist() == [0.0]
        assert traj.states[0, 0] == 1.0 + 0j

    def test_matches_exact_on_small_bath(self, small_grid):
        gen = build_generator(small_grid)
        rk4 = evolve_rk4(gen, 20.0, 0.01, sample_every=100)
        exact = evolve_exact(gen, rk4.times)
        assert np.abs(rk4.states - exact.states).max() < 1e-6

    def test_includes_final_partial_block(self, two_mode_grid):
        gen = build_generator(two_mode_grid)
        traj = evolve_rk4(gen, 0.25, 0.1, sample_every=2)
        # steps land at 0.1, 0.2, 0.3; samples at every 2nd step plus the last
        assert np.allclose(traj.times, [0.0, 0.2, 0.3])

    def test_rejects_nonpositive_dt(self, two_mode_grid):
        with pytest.raises(ValueError):
            evolve_rk4(build_generator(two_mode_grid), 1.0, 0.0)
        with pytest.raises(ValueError):
            evolve_rk4(build_generator(two_mode_grid), 1.0, -0.1)

    def test_unstable_step_raises(self, small_grid):
        gen = build_generator(small_grid)
        with pytest.raises(IntegrationFailure):
            evolve_rk4(gen, 50.0, 1.0)

    def test_norm_drift_small_for_recommended_step(self, small_grid):
        gen = build_generator(small_grid)
        traj = evolve_rk4(gen, 50.0, 0.01, sample_every=100)
        assert norm_residual(traj) < 1e-6


class TestNormResidual:
    def test_exactly_zero_for_unit_sample(self):
        from oscbath import AmplitudeTrajectory
        traj = AmplitudeTrajectory([0.0], [[1.0 + 0j, 0.0, 0.0]], "exact")
        assert norm_residual(traj) == 0.0

    def test_roundoff_at_t0_evolution(self, two_mode_grid):
        traj = evolve_exact(build_generator(two_mode_grid), [0.0])
        assert norm_residual(traj) < 1e-14
