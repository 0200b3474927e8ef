"""Numerical integration of the projected and FBF dynamical systems.

Both flows use the Euclidean metric projection.  Writing ``y(x) = P_K(x -
lam F(x))``, the right-hand sides are

* FBF system:            ``dx/dt = -x + y + lam (F(x) - F(y))``
* projected gradient:    ``dx/dt = -x + y``

Integration is single-threaded and deterministic; trajectories are immutable
once returned and safe to pass between threads.  A non-finite state aborts
the run with :class:`~qvi.errors.IntegrationDiverged` carrying the partial
trajectory.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IntegrationDiverged, RangeError
from .geometry import SQUARED_NORM, bregman_project
from .problems import VIProblem

__all__ = [
    "Scheme",
    "FlowSystem",
    "IntegratorConfig",
    "Trajectory",
    "integrate_flow",
    "lyapunov_energy",
    "continuous_ergodic_average",
    "fbf_residual_series",
]


class Scheme(enum.Enum):
    EXPLICIT_EULER = "euler"
    RUNGE_KUTTA4 = "rk4"


class FlowSystem(enum.Enum):
    FBF = "fbf"
    PROJECTED_GRADIENT = "projected_gradient"


@dataclass(frozen=True)
class IntegratorConfig:
    """Time-stepping choices: scheme, step ``h``, horizon ``T``, record stride."""

    scheme: Scheme = Scheme.EXPLICIT_EULER
    h: float = 1e-3
    T: float = 50.0
    record_stride: int = 10

    def __post_init__(self):
        if not (self.h > 0.0 and self.T > 0.0 and self.h <= self.T):
            raise ValueError("need 0 < h <= T")
        if self.record_stride < 1:
            raise ValueError("record_stride must be a positive integer")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded states of a flow: times, primal ``x(t)``, projected ``y(t)``."""

    times: np.ndarray
    xs: np.ndarray
    ys: np.ndarray
    lam: float

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if t.ndim != 1 or xs.ndim != 2 or ys.ndim != 2:
            raise ValueError("times must be 1-D and states 2-D")
        if not (len(t) == len(xs) == len(ys)):
            raise ValueError("times, xs and ys must have equal length")
        if len(t) and (t[0] != 0.0 or np.any(np.diff(t) <= 0.0)):
            raise ValueError("times must increase strictly from 0")
        for a in (t, xs, ys):
            a.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)


def integrate_flow(
    problem: VIProblem,
    system: FlowSystem,
    lam: float,
    x0,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> Trajectory:
    """Advance the chosen flow from ``x0`` and record every ``record_stride`` steps.

    The final state is always recorded.  Raises
    :class:`~qvi.errors.IntegrationDiverged` on a non-finite state, with the
    partial trajectory attached.
    """
    if not lam > 0.0:
        raise ValueError("lam must be positive")
    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (problem.dim,):
        raise ValueError(f"x0 must have length {problem.dim}")
    if not np.all(np.isfinite(x)):
        raise ValueError("x0 must be finite")

    op = problem.operator
    fs = problem.feasible_set
    fbf = system is FlowSystem.FBF

    def rhs(state: np.ndarray) -> np.ndarray:
        fx = op(state)
        y = bregman_project(SQUARED_NORM, fs, state - lam * fx)
        if fbf:
            return -state + y + lam * (fx - op(y))
        return -state + y

    def projected(state: np.ndarray) -> np.ndarray:
        return bregman_project(SQUARED_NORM, fs, state - lam * op(state))

    n_steps = int(round(cfg.T / cfg.h))
    h = cfg.h
    times = [0.0]
    xs = [x.copy()]
    ys = [projected(x)]
    euler = cfg.scheme is Scheme.EXPLICIT_EULER
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(1, n_steps + 1):
            try:
                if euler:
                    x = x + h * rhs(x)
                else:
                    k1 = rhs(x)
                    k2 = rhs(x + 0.5 * h * k1)
                    k3 = rhs(x + 0.5 * h * k2)
                    k4 = rhs(x + h * k3)
                    x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                diverged = not np.all(np.isfinite(x))
                if not diverged and (i % cfg.record_stride == 0 or i == n_steps):
                    y_rec = projected(x)
                    times.append(i * h)
                    xs.append(x.copy())
                    ys.append(y_rec)
            except DomainError:
                diverged = True
            if diverged:
                partial = Trajectory(np.array(times), np.array(xs), np.array(ys), lam)
                raise IntegrationDiverged(
                    f"non-finite state at t = {i * h:.6g}", trajectory=partial
                )
    return Trajectory(np.array(times), np.array(xs), np.array(ys), lam)


def lyapunov_energy(traj: Trajectory, x_star) -> np.ndarray:
    """Energy ``V(t) = 0.5 ||x(t) - x_star||^2`` at each recorded time."""
    p = np.asarray(x_star, dtype=float)
    if p.shape != (traj.xs.shape[1],):
        raise ValueError("x_star length does not match the trajectory")
    d = traj.xs - p
    return 0.5 * np.sum(d * d, axis=1)


def continuous_ergodic_average(traj: Trajectory, T: float) -> np.ndarray:
    """Time average ``(1/T) integral_0^T x(t) dt`` by trapezoidal quadrature.

    ``T`` must not exceed the last recorded time and the window must contain
    at least two recorded points; the value at ``T`` is interpolated when it
    falls between grid points.
    """
    t = traj.times
    if not T > 0.0:
        raise RangeError("T must be positive")
    if T > t[-1] + 1e-12:
        raise RangeError(f"T = {T:g} beyond the recorded horizon {t[-1]:g}")
    T = min(T, float(t[-1]))
    mask = t <= T + 1e-15
    if int(mask.sum()) < 2:
        raise RangeError("need at least two recorded points in [0, T]")
    tt = t[mask]
    xx = traj.xs[mask]
    if tt[-1] < T - 1e-15:
        j = int(mask.sum())
        frac = (T - t[j - 1]) / (t[j] - t[j - 1])
        x_interp = traj.xs[j - 1] + frac * (traj.xs[j] - traj.xs[j - 1])
        tt = np.append(tt, T)
        xx = np.vstack([xx, x_interp])
    return np.trapezoid(xx, tt, axis=0) / T


def fbf_residual_series(traj: Trajectory) -> np.ndarray:
    """Projection residual ``||x(t) - y(t)||`` at each recorded time."""
    if len(traj.times) == 0:
        raise ValueError("trajectory is empty")
    return np.linalg.norm(traj.xs - traj.ys, axis=1)
