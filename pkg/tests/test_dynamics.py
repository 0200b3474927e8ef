"""Continuous dynamics tests.

The flow integrator is checked against an independently coded pure-Python
Euler oracle at a finer step, the time average against a from-scratch
quadrature, and the qualitative decay facts against long-horizon runs.
"""

import math

import numpy as np
import pytest

from qvi.dynamics import (
    FlowSystem,
    IntegratorConfig,
    Scheme,
    Trajectory,
    continuous_ergodic_average,
    fbf_residual_series,
    integrate_flow,
    lyapunov_energy,
)
from qvi.errors import IntegrationDiverged, RangeError
from qvi.geometry import Box
from qvi.problems import EXAMPLE_5_1_MATRIX, VIProblem, example_5_1


# ---------------------------------------------------------------------------
# oracles


def _euler_oracle_5_1(x0, lam, h, T):
    """Independent Euler integrator for the box problem, no numpy."""
    m = [[1.0, 0.0, -1.0], [0.0, 1.5, 0.0], [-1.0, 0.0, 2.0]]
    q = 0.2

    def op(v):
        s = math.exp(-(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])) + q
        return [s * sum(m[i][j] * v[j] for j in range(3)) for i in range(3)]

    def clip(v):
        return [min(5.0, max(-5.0, c)) for c in v]

    x = list(map(float, x0))
    steps = round(T / h)
    for _ in range(steps):
        fx = op(x)
        y = clip([x[i] - lam * fx[i] for i in range(3)])
        fy = op(y)
        x = [x[i] + h * (-x[i] + y[i] + lam * (fx[i] - fy[i])) for i in range(3)]
    return np.array(x)


def test_integrator_agrees_with_independent_fine_euler_oracle():
    problem = example_5_1()
    x0 = [-5.0, 4.0, 7.0]
    traj = integrate_flow(problem, FlowSystem.FBF, 0.2, x0, IntegratorConfig(h=1e-3, T=50.0))
    oracle = _euler_oracle_5_1(x0, 0.2, 1e-4, 50.0)
    assert np.linalg.norm(traj.xs[-1] - oracle) <= 1e-3


# ---------------------------------------------------------------------------
# stationarity and trivial values


def test_equilibrium_is_stationary():
    problem = example_5_1()
    for system in (FlowSystem.FBF, FlowSystem.PROJECTED_GRADIENT):
        traj = integrate_flow(
            problem, system, 0.2, np.zeros(3), IntegratorConfig(h=1e-3, T=1.0, record_stride=100)
        )
        assert float(np.max(np.abs(traj.xs))) <= 1e-12
        assert float(np.max(fbf_residual_series(traj))) <= 1e-12


def test_lyapunov_energy_values():
    single = Trajectory(
        times=np.array([0.0]), xs=np.array([[1.0, 1.0, 1.0]]), ys=np.array([[1.0, 1.0, 1.0]]), lam=0.1
    )
    np.testing.assert_allclose(lyapunov_energy(single, np.zeros(3)), [1.5])
    const = Trajectory(
        times=np.array([0.0, 1.0]),
        xs=np.array([[2.0, 0.0], [2.0, 0.0]]),
        ys=np.array([[2.0, 0.0], [2.0, 0.0]]),
        lam=0.1,
    )
    np.testing.assert_allclose(lyapunov_energy(const, np.array([2.0, 0.0])), [0.0, 0.0])


def test_continuous_ergodic_average_trivials():
    const = Trajectory(
        times=np.array([0.0, 1.0, 2.0]),
        xs=np.tile([3.0, -1.0], (3, 1)),
        ys=np.tile([3.0, -1.0], (3, 1)),
        lam=0.1,
    )
    np.testing.assert_allclose(continuous_ergodic_average(const, 2.0), [3.0, -1.0])
    two = Trajectory(
        times=np.array([0.0, 1.0]),
        xs=np.array([[0.0], [2.0]]),
        ys=np.array([[0.0], [2.0]]),
        lam=0.1,
    )
    np.testing.assert_allclose(continuous_ergodic_average(two, 1.0), [1.0])
    with pytest.raises(RangeError):
        continuous_ergodic_average(two, 5.0)
    with pytest.raises(RangeError):
        continuous_ergodic_average(two, 1e-9)


def test_continuous_ergodic_average_matches_manual_quadrature():
    problem = example_5_1()
    traj = integrate_flow(
        problem, FlowSystem.FBF, 0.2, [-5.0, 4.0, 7.0], IntegratorConfig(h=1e-3, T=5.0)
    )
    got = continuous_ergodic_average(traj, 5.0)
    # from-scratch trapezoid
    acc = np.zeros(3)
    for i in range(len(traj.times) - 1):
        dt = traj.times[i + 1] - traj.times[i]
        acc += 0.5 * dt * (traj.xs[i] + traj.xs[i + 1])
    np.testing.assert_allclose(got, acc / 5.0, atol=1e-12)
    # interpolated endpoint between grid points
    mid = continuous_ergodic_average(traj, 2.505)
    assert np.all(np.isfinite(mid))


# ---------------------------------------------------------------------------
# qualitative decay facts for the box problem


@pytest.fixture(scope="module")
def flow_runs():
    problem = example_5_1()
    cfg = IntegratorConfig(h=1e-3, T=50.0, record_stride=10)
    return {
        lam: integrate_flow(problem, FlowSystem.FBF, lam, [-5.0, 4.0, 7.0], cfg)
        for lam in (0.05, 0.1, 0.2)
    }


def test_energy_monotone_and_ordered_in_step_size(flow_runs):
    x_star = np.zeros(3)
    energies = {lam: lyapunov_energy(t, x_star) for lam, t in flow_runs.items()}
    for v in energies.values():
        assert float(np.max(np.diff(v))) <= 1e-12
    t = flow_runs[0.2].times
    mask = t >= 5.0
    assert np.all(energies[0.2][mask] <= energies[0.1][mask])
    assert np.all(energies[0.1][mask] <= energies[0.05][mask])


def test_trajectory_bounded_by_initial_distance(flow_runs):
    x0 = np.array([-5.0, 4.0, 7.0])
    for traj in flow_runs.values():
        dists = np.linalg.norm(traj.xs, axis=1)
        assert float(dists.max()) <= float(np.linalg.norm(x0)) + 1e-6


def test_long_horizon_decay_to_solution():
    problem = example_5_1()
    traj = integrate_flow(
        problem, FlowSystem.FBF, 0.2, [-5.0, 4.0, 7.0], IntegratorConfig(h=1e-3, T=150.0)
    )
    assert float(np.linalg.norm(traj.xs[-1])) <= 1e-3
    assert float(fbf_residual_series(traj)[-1]) <= 1e-3


def test_residual_series_tail_and_square_integral():
    problem = example_5_1()
    lam = 0.2
    traj = integrate_flow(
        problem, FlowSystem.FBF, lam, [-5.0, 4.0, 7.0], IntegratorConfig(h=1e-3, T=50.0, record_stride=1)
    )
    res = fbf_residual_series(traj)
    t = traj.times
    # decreasing tail: late maxima below the mid-run plateau
    assert res[t >= 40.0].max() <= res[(t >= 10.0) & (t <= 20.0)].max()
    # square-integral bound with the Jacobian-supremum constant: the largest
    # singular value of the local Jacobian over the box is attained at the
    # origin, where the Jacobian is 1.2 M.
    lip = 1.2 * float(np.linalg.eigvalsh(EXAMPLE_5_1_MATRIX).max())
    assert lam * lip < 1.0
    integral = float(np.sum(res[:-1] ** 2 * np.diff(t)))
    x0_energy = 0.5 * float(np.linalg.norm([-5.0, 4.0, 7.0])) ** 2
    assert integral <= x0_energy / (1.0 - lam * lip) + 0.1


# ---------------------------------------------------------------------------
# schemes and failure modes


def test_euler_halving_is_first_order():
    problem = example_5_1()
    ends = {}
    for h in (2e-2, 1e-2, 5e-3):
        cfg = IntegratorConfig(h=h, T=10.0, record_stride=100000)
        ends[h] = integrate_flow(problem, FlowSystem.FBF, 0.2, [-5.0, 4.0, 7.0], cfg).xs[-1]
    d1 = np.linalg.norm(ends[2e-2] - ends[1e-2])
    d2 = np.linalg.norm(ends[1e-2] - ends[5e-3])
    assert d2 < d1
    assert d2 <= 0.75 * d1


def test_rk4_matches_fine_euler():
    problem = example_5_1()
    rk = integrate_flow(
        problem,
        FlowSystem.FBF,
        0.2,
        [-5.0, 4.0, 7.0],
        IntegratorConfig(scheme=Scheme.RUNGE_KUTTA4, h=1e-2, T=10.0, record_stride=1000),
    )
    fine = integrate_flow(
        problem, FlowSystem.FBF, 0.2, [-5.0, 4.0, 7.0], IntegratorConfig(h=1e-4, T=10.0, record_stride=10000)
    )
    assert np.linalg.norm(rk.xs[-1] - fine.xs[-1]) <= 1e-3


def test_projected_gradient_flow_decays():
    problem = example_5_1()
    traj = integrate_flow(
        problem, FlowSystem.PROJECTED_GRADIENT, 0.2, [-5.0, 4.0, 7.0], IntegratorConfig(h=1e-3, T=20.0)
    )
    v = lyapunov_energy(traj, np.zeros(3))
    assert v[-1] < v[0]
    assert float(np.max(np.diff(v))) <= 1e-12


def test_divergence_raises_with_partial_trajectory():
    box = Box(lo=-1e12 * np.ones(1), hi=1e12 * np.ones(1))
    stiff = VIProblem(dim=1, operator=lambda x: 1e6 * x**3, feasible_set=box)
    with pytest.raises(IntegrationDiverged) as exc_info:
        integrate_flow(
            stiff, FlowSystem.FBF, 1.0, [10.0], IntegratorConfig(h=0.5, T=100.0, record_stride=1)
        )
    partial = exc_info.value.trajectory
    assert partial is not None
    assert len(partial.times) >= 1
    assert np.all(np.isfinite(partial.xs))


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(h=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(h=2.0, T=1.0)
    with pytest.raises(ValueError):
        IntegratorConfig(record_stride=0)


def test_trajectory_validation():
    with pytest.raises(ValueError):
        Trajectory(times=np.array([1.0, 2.0]), xs=np.zeros((2, 1)), ys=np.zeros((2, 1)), lam=0.1)
    with pytest.raises(ValueError):
        Trajectory(times=np.array([0.0, 0.0]), xs=np.zeros((2, 1)), ys=np.zeros((2, 1)), lam=0.1)
