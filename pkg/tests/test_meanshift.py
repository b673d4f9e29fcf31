import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from modeseek.density import DensityModel, SampleSet, density_at, density_gradient_at
from modeseek.errors import DegenerateWeightsError
from modeseek.kernel import EPANECHNIKOV_PROFILE, GAUSSIAN_PROFILE
from modeseek.meanshift import (
    IterationConfig,
    Termination,
    Trajectory,
    map_derivative,
    mean_shift_scalar,
    mode_update,
    polish_fixed_point,
    run,
)

E2 = math.exp(-2.0)


def gauss(points, h=1.0):
    return DensityModel(SampleSet(points), GAUSSIAN_PROFILE, h)


def epan(points, h=1.0):
    return DensityModel(SampleSet(points), EPANECHNIKOV_PROFILE, h)


def hand_update(points, h, y):
    """The weighted mean written out with g(u) = exp(-u/2)/2, no shortcuts."""
    w = [0.5 * math.exp(-(((y - x) / h) ** 2) / 2) for x in points]
    return sum(wi * x for wi, x in zip(w, points)) / sum(w)


class TestIterationConfig:
    def test_defaults(self):
        cfg = IterationConfig()
        assert cfg.epsilon == 0.0005 and cfg.max_iterations == 10_000

    @pytest.mark.parametrize("kw", [{"epsilon": 0}, {"epsilon": -1}, {"max_iterations": 0}, {"max_iterations": 2.5}])
    def test_rejects_invalid(self, kw):
        with pytest.raises(ValueError):
            IterationConfig(**kw)


class TestMeanShiftScalar:
    @pytest.mark.parametrize("model", [gauss([2.5]), epan([2.5])])
    def test_single_point(self, model):
        assert mean_shift_scalar(model, 2.2) == pytest.approx(0.3, abs=1e-15)
        assert mode_update(model, 2.2) == 2.5

    @pytest.mark.parametrize("model", [gauss([-1.3, 1.3], 0.7), epan([-1.3, 1.3], 2.0)])
    def test_symmetric_pair_at_centre(self, model):
        assert mean_shift_scalar(model, 0.0) == 0.0

    def test_two_points_gaussian(self):
        expected = 2 * E2 / (1 + E2)
        # independent evaluation with g(0) = 1/2, g(4) = exp(-2)/2
        assert hand_update([0.0, 2.0], 1.0, 0.0) == pytest.approx(expected, abs=1e-15)
        assert mean_shift_scalar(gauss([0.0, 2.0]), 0.0) == pytest.approx(expected, abs=1e-12)
        assert round(mean_shift_scalar(gauss([0.0, 2.0]), 0.0), 5) == 0.23841

    def test_degenerate_weights(self):
        with pytest.raises(DegenerateWeightsError):
            mean_shift_scalar(epan([0.0]), 5.0)


class TestModeUpdate:
    def test_epanechnikov_in_window_mean(self):
        assert mode_update(epan([0.0, 0.5, 3.0]), 0.2) == 0.25

    def test_epanechnikov_boundary_point_excluded(self):
        # the sample exactly one bandwidth away has weight g(1) = 0
        assert mode_update(epan([0.0, 1.0]), 0.0) == 0.0

    @pytest.mark.parametrize("y", [-1e3, -3.0, 7.0, 12.5, 1e3])
    def test_single_point_gaussian(self, y):
        assert mode_update(gauss([7.0]), y) == 7.0

    def test_two_points(self):
        assert mode_update(gauss([0.0, 2.0]), 0.0) == pytest.approx(2 * E2 / (1 + E2), abs=1e-12)

    def test_far_start_does_not_underflow(self):
        # exp(-u/2) underflows for every sample here; the shifted weights do not
        assert mode_update(gauss([0.0, 1.0], 0.1), 500.0) == 1.0

    def test_matches_hand_evaluation(self):
        rng = np.random.default_rng(21)
        pts = rng.normal(size=15)
        model = gauss(pts, 0.6)
        for y in rng.uniform(-2, 2, 20):
            assert mode_update(model, y) == pytest.approx(hand_update(pts, 0.6, y), rel=1e-13, abs=1e-14)

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.floats(-20, 20), min_size=1, max_size=30), st.floats(0.1, 5), st.floats(-40, 40))
    def test_result_inside_hull(self, pts, h, y):
        m = mode_update(gauss(pts, h), y)
        assert min(pts) <= m <= max(pts)


class TestRun:
    @pytest.mark.parametrize("start", [-4.0, 0.0, 3.3, 9.0])
    def test_single_point_converges_after_one_update(self, start):
        traj = run(gauss([3.3]), start)
        assert traj.converged
        assert traj.y[0] == start
        assert traj.y[1] == 3.3
        assert traj.final == 3.3
        assert traj.iterations == (1 if start == 3.3 else 2)

    def test_fixed_point_terminates_immediately(self):
        traj = run(gauss([-1.0, 1.0]), 0.0)
        assert traj.converged
        assert list(traj.y) == [0.0, 0.0]
        assert traj.step[-1] == 0.0

    def test_records_density_and_gradient(self):
        model = gauss(np.linspace(-2, 3, 12), 0.8)
        traj = run(model, -2.0)
        for rec in traj.steps:
            assert rec.f_hat == pytest.approx(density_at(model, rec.y), rel=1e-14)
            assert rec.f_hat_prime == pytest.approx(density_gradient_at(model, rec.y), rel=1e-12, abs=1e-15)
        assert math.isnan(traj.steps[-1].step)

    def test_converged_final_step_below_epsilon(self):
        traj = run(gauss([0.0, 0.4, 1.1, 2.0]), 2.0, IterationConfig(epsilon=1e-4))
        assert traj.converged and traj.step[-1] < 1e-4
        assert np.all(traj.step[:-1] >= 1e-4)

    def test_max_iterations_is_reported(self):
        traj = run(gauss([0.0, 2.0]), 0.0, IterationConfig(epsilon=1e-12, max_iterations=5))
        assert traj.terminated_by is Termination.MAX_ITERATIONS
        assert traj.iterations == 5

    def test_degenerate_start_keeps_partial_trajectory(self):
        traj = run(epan([0.0, 0.5]), 3.0)
        assert traj.terminated_by is Termination.DEGENERATE_WEIGHTS
        assert list(traj.y) == [3.0]

    def test_start_must_be_finite(self):
        with pytest.raises(ValueError):
            run(gauss([0.0]), math.inf)

    def test_deterministic(self, replica_model):
        assert run(replica_model, 6.045) == run(replica_model, 6.045)

    def test_replica_start_reaches_positive_mode(self, replica_model):
        traj = run(replica_model, 6.045)
        assert traj.converged
        assert abs(traj.final - 3.0) <= 0.35
        assert np.all(np.diff(traj.y) < 0)

    def test_epanechnikov_run(self):
        traj = run(epan([0.0, 0.5, 3.0]), 0.2)
        assert list(traj.y) == [0.2, 0.25, 0.25]
        assert traj.converged

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(st.floats(-10, 10), min_size=2, max_size=40),
        st.floats(0.2, 3.0),
        st.data(),
    )
    def test_containment_and_ascent(self, pts, h, data):
        model = gauss(pts, h)
        start = data.draw(st.sampled_from(pts))
        traj = run(model, start, IterationConfig(epsilon=1e-6, max_iterations=2000))
        assert np.all(traj.y[1:] >= min(pts)) and np.all(traj.y[1:] <= max(pts))
        assert np.all(np.diff(traj.f_hat) >= -1e-12)


class TestTrajectory:
    def test_validation(self):
        with pytest.raises(ValueError):
            Trajectory(0.0, [], [], [], "converged", 0.1)
        with pytest.raises(ValueError):
            Trajectory(0.0, [0.0, 1.0], [0.0], [0.0, 0.0], "converged", 0.1)

    def test_read_only(self):
        traj = run(gauss([0.0]), 1.0)
        with pytest.raises(ValueError):
            traj.y[0] = 5.0


class TestMapDerivative:
    def test_single_point_map_is_constant(self):
        assert map_derivative(gauss([4.0]), 1.0) == 0.0

    @pytest.mark.parametrize("a, h", [(0.5, 1.0), (1.0, 1.0), (3.0, 1.0), (1.0, 0.7)])
    def test_symmetric_pair(self, a, h):
        # m(y) = a tanh(a y / h^2), so m'(0) = a^2 / h^2
        model = gauss([-a, a], h)
        ladder = [map_derivative(model, 0.0, s) for s in (1e-4, 1e-5, 1e-6)]
        assert max(ladder) - min(ladder) <= 1e-3 * abs(ladder[1])
        assert map_derivative(model, 0.0) == pytest.approx(a * a / (h * h), rel=1e-6)

    def test_midpoint_of_zero_two(self):
        model = gauss([0.0, 2.0])
        assert mode_update(model, 1.0) == 1.0
        ladder = [map_derivative(model, 1.0, s) for s in (1e-4, 1e-5, 1e-6)]
        assert max(ladder) - min(ladder) <= 1e-3
        # m(y) = 1 + tanh(y - 1)
        assert map_derivative(model, 1.0) == pytest.approx(1.0, rel=1e-6)

    def test_array_input(self):
        model = gauss([-1.0, 1.0])
        d = map_derivative(model, np.array([0.0, 0.5]))
        assert d.shape == (2,)
        assert d[1] == pytest.approx(1 / math.cosh(0.5) ** 2, rel=1e-6)

    def test_degenerate_neighbourhood(self):
        with pytest.raises(DegenerateWeightsError):
            map_derivative(epan([0.0]), 1.0, 1e-3)


def test_polish_fixed_point(replica_model):
    traj = run(replica_model, 6.045)
    x = polish_fixed_point(replica_model, traj.final)
    assert abs(mode_update(replica_model, x) - x) < 1e-12
    assert abs(x - traj.final) < 5 * traj.epsilon
