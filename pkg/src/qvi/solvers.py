"""Discrete solvers: Bregman golden-ratio FBF, relaxed FBF, and a
golden-ratio projection baseline.

The main iteration interleaves three maps in the chosen Bregman geometry
(``gp`` and ``gps`` denote the gradient of the generating function and of
its conjugate):

* extrapolation   ``w_k = gps(((psi - 1) gp(x_k) + gp(w_{k-1})) / psi)``
* projection      ``y_k = proj_K(gps(gp(w_k) - lam_k F(w_k)))``
* correction      ``x_{k+1} = gps((1 - gamma) gp(x_k)
  + gamma [gp(y_k) - lam_k (F(y_k) - F(w_k))])``

with the nonmonotone adaptive step

``lam_{k+1} = min(mu ||w_k - y_k|| / ||F(w_k) - F(y_k)||, lam_k + eta_k)``

falling back to ``lam_k + eta_k`` when the operator values coincide.  The
perturbations ``eta_k`` are summable, so steps stay bounded by
``lam_1 + sum(eta)`` while still being allowed to grow.

Every run is deterministic given the problem, configuration and initial
points; distinct runs share no mutable state. Traces are immutable outputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import zeta

from .errors import DomainError
from .geometry import (
    SQUARED_NORM,
    BregmanGeometry,
    GeometryKind,
    bregman_distance,
    bregman_project,
    exp_saturated,
    floor_to_domain,
    grad_phi,
    grad_phi_star,
)
from .problems import VIProblem, eval_operator, natural_residual

__all__ = [
    "GOLDEN_RATIO",
    "StopReason",
    "EtaSpec",
    "StepSizeState",
    "update_stepsize",
    "Alg1Config",
    "SolverTrace",
    "solve_alg1",
    "solve_relaxed_fbf",
    "solve_graal_baseline",
    "discrete_ergodic_average",
]

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0

# Two operator values are treated as equal below this gap.
_F_EQUAL_TOL = 1e-14


class StopReason(enum.Enum):
    TOLERANCE = "tolerance"
    MAX_ITER = "max_iter"
    DIVERGED = "diverged"


@dataclass(frozen=True)
class EtaSpec:
    """Summable step perturbations ``eta_k``.

    ``power_law(c, p)`` yields ``eta_k = c / k**p`` with ``p > 1`` so the
    series converges; ``zero()`` disables growth entirely.
    """

    c: float
    p: float

    def __post_init__(self):
        if self.c < 0.0:
            raise ValueError("c must be nonnegative")
        if not self.p > 1.0:
            raise ValueError("p must exceed 1 for a summable sequence")

    @classmethod
    def power_law(cls, c: float, p: float) -> "EtaSpec":
        return cls(c=c, p=p)

    @classmethod
    def zero(cls) -> "EtaSpec":
        return cls(c=0.0, p=2.0)

    def value(self, k: int) -> float:
        """Perturbation at iteration ``k >= 1``."""
        if k < 1:
            raise ValueError("iterations are numbered from 1")
        return self.c / float(k) ** self.p if self.c else 0.0

    @property
    def total(self) -> float:
        """Full series sum ``Xi = sum_k eta_k``."""
        return self.c * float(zeta(self.p)) if self.c else 0.0


DEFAULT_ETA = EtaSpec.power_law(0.001, 1.1)


@dataclass(frozen=True)
class StepSizeState:
    """Current step ``lam``, iteration index, and unused perturbation budget."""

    lam: float
    k: int
    eta_sum_remaining: float

    def __post_init__(self):
        if not self.lam > 0.0:
            raise ValueError("lam must be positive")
        if self.k < 1:
            raise ValueError("k is numbered from 1")


def update_stepsize(
    state: StepSizeState,
    spec: EtaSpec,
    mu: float,
    w: np.ndarray,
    y: np.ndarray,
    fw: np.ndarray,
    fy: np.ndarray,
) -> StepSizeState:
    """One application of the adaptive step rule.

    The denominator is guarded by the equality test, so no division by zero
    can occur.
    """
    eta_k = spec.value(state.k)
    grown = state.lam + eta_k
    gap = float(np.linalg.norm(np.asarray(fw, float) - np.asarray(fy, float)))
    wy_gap = float(np.linalg.norm(np.asarray(w, float) - np.asarray(y, float)))
    # Coincident points imply equal operator values; any measured operator
    # gap there is numerical noise, so take the growth branch.
    if gap > _F_EQUAL_TOL and wy_gap > 0.0:
        new_lam = min(mu * wy_gap / gap, grown)
    else:
        new_lam = grown
    return StepSizeState(
        lam=new_lam, k=state.k + 1, eta_sum_remaining=state.eta_sum_remaining - eta_k
    )


@dataclass(frozen=True)
class Alg1Config:
    """Parameters of the golden-ratio Bregman FBF iteration."""

    lambda1: float = 0.15
    mu: float = 0.8
    gamma: float = 0.9
    psi: float = GOLDEN_RATIO
    eta: EtaSpec = DEFAULT_ETA
    tol: float = 1e-5
    max_iter: int = 1000
    geometry: BregmanGeometry = SQUARED_NORM

    def __post_init__(self):
        if not self.lambda1 > 0.0:
            raise ValueError("lambda1 must be positive")
        if not 0.0 < self.mu < 1.0:
            raise ValueError("mu must be in (0,1)")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must be in (0,1)")
        if not self.psi > 1.0:
            raise ValueError("psi must exceed 1")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")


@dataclass(frozen=True, eq=False)
class SolverTrace:
    """Per-iteration record of a discrete run.

    Arrays are aligned by iteration: row ``j`` holds iteration ``ks[j]`` with
    its iterate ``xs[j]``, extrapolated point ``ws[j]``, projected point
    ``ys[j]``, step ``lams[j]``, displacement ``e_norms[j] = ||x_{k+1} -
    x_k||`` and fixed-point residual.  ``dists`` holds the Bregman distance
    to the known solution when one exists.  ``final_x`` is the iterate
    produced by the stopping iteration.
    """

    ks: np.ndarray
    xs: np.ndarray
    ws: np.ndarray
    ys: np.ndarray
    lams: np.ndarray
    e_norms: np.ndarray
    residuals: np.ndarray
    dists: np.ndarray | None
    saturated: np.ndarray
    stop_reason: StopReason
    final_x: np.ndarray

    def __post_init__(self):
        for name in ("ks", "xs", "ws", "ys", "lams", "e_norms", "residuals", "saturated"):
            a = np.asarray(getattr(self, name))
            a.flags.writeable = False
            object.__setattr__(self, name, a)
        if self.dists is not None:
            d = np.asarray(self.dists)
            d.flags.writeable = False
            object.__setattr__(self, "dists", d)
        f = np.asarray(self.final_x, dtype=float)
        f.flags.writeable = False
        object.__setattr__(self, "final_x", f)

    @property
    def iterations(self) -> int:
        return int(self.ks[-1]) if len(self.ks) else 0

    def __len__(self) -> int:
        return len(self.ks)


class _TraceBuilder:
    def __init__(self, problem: VIProblem, geom: BregmanGeometry):
        self.problem = problem
        self.geom = geom
        self.p = problem.known_solution
        self.ks: list[int] = []
        self.xs: list[np.ndarray] = []
        self.ws: list[np.ndarray] = []
        self.ys: list[np.ndarray] = []
        self.lams: list[float] = []
        self.e_norms: list[float] = []
        self.residuals: list[float] = []
        self.dists: list[float] = []
        self.saturated: list[bool] = []

    def add(self, k, x, w, y, lam, e, saturated):
        self.ks.append(k)
        self.xs.append(np.array(x))
        self.ws.append(np.array(w))
        self.ys.append(np.array(y))
        self.lams.append(float(lam))
        self.e_norms.append(float(e))
        try:
            residual = natural_residual(self.problem, self.geom, x, lam)
        except DomainError:
            # iterate left the operator or geometry domain; the run is about
            # to be reported as diverged
            residual = float("nan")
        self.residuals.append(residual)
        if self.p is not None:
            self.dists.append(bregman_distance(self.geom, self.p, x))
        self.saturated.append(bool(saturated))

    def build(self, stop_reason: StopReason, final_x: np.ndarray) -> SolverTrace:
        return SolverTrace(
            ks=np.array(self.ks, dtype=int),
            xs=np.array(self.xs),
            ws=np.array(self.ws),
            ys=np.array(self.ys),
            lams=np.array(self.lams),
            e_norms=np.array(self.e_norms),
            residuals=np.array(self.residuals),
            dists=np.array(self.dists) if self.p is not None else None,
            saturated=np.array(self.saturated, dtype=bool),
            stop_reason=stop_reason,
            final_x=np.array(final_x),
        )


def solve_alg1(
    problem: VIProblem,
    cfg: Alg1Config,
    x0,
    x1,
    extrapolation: bool = True,
) -> SolverTrace:
    """Run the golden-ratio Bregman FBF iteration from ``(x0, x1)``.

    ``w_0`` is initialized to ``x_0``.  Stops when ``||x_{k+1} - x_k|| <
    tol`` (Tolerance), after ``max_iter`` iterations (MaxIter), or on a
    domain error or non-finite iterate (Diverged, with the partial trace).
    With ``extrapolation=False`` the extrapolated point is replaced by the
    current iterate and everything else is unchanged.
    """
    geom = cfg.geometry
    entropy = geom.kind is GeometryKind.NEGATIVE_ENTROPY
    w_prev = floor_to_domain(geom, np.asarray(x0, dtype=float))
    x = floor_to_domain(geom, np.asarray(x1, dtype=float))
    if x.shape != (problem.dim,) or w_prev.shape != (problem.dim,):
        raise ValueError(f"initial points must have length {problem.dim}")

    tb = _TraceBuilder(problem, geom)
    state = StepSizeState(lam=cfg.lambda1, k=1, eta_sum_remaining=cfg.eta.total)
    fs = problem.feasible_set
    stop = StopReason.MAX_ITER
    final_x = x
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, cfg.max_iter + 1):
            lam = state.lam
            try:
                saturated = False
                if extrapolation:
                    dual_w = (
                        (cfg.psi - 1.0) * grad_phi(geom, x) + grad_phi(geom, w_prev)
                    ) / cfg.psi
                    saturated |= exp_saturated(geom, dual_w)
                    w = floor_to_domain(geom, grad_phi_star(geom, dual_w))
                else:
                    w = x
                fw = eval_operator(problem, w)
                dual_y = grad_phi(geom, w) - lam * fw
                saturated |= exp_saturated(geom, dual_y)
                y = bregman_project(geom, fs, grad_phi_star(geom, dual_y))
                fy = eval_operator(problem, y)
                dual_x = (1.0 - cfg.gamma) * grad_phi(geom, x) + cfg.gamma * (
                    grad_phi(geom, y) - lam * (fy - fw)
                )
                saturated |= exp_saturated(geom, dual_x)
                x_next = grad_phi_star(geom, dual_x)
                if entropy:
                    x_next = floor_to_domain(geom, x_next)
            except DomainError:
                stop = StopReason.DIVERGED
                break
            if not np.all(np.isfinite(x_next)):
                stop = StopReason.DIVERGED
                break
            e = float(np.linalg.norm(x_next - x))
            tb.add(k, x, w, y, lam, e, saturated)
            state = update_stepsize(state, cfg.eta, cfg.mu, w, y, fw, fy)
            final_x = x_next
            if e < cfg.tol:
                stop = StopReason.TOLERANCE
                break
            x, w_prev = x_next, w
    return tb.build(stop, final_x)


def solve_relaxed_fbf(
    problem: VIProblem,
    lam: float,
    gamma_seq: Callable[[int], float],
    x0,
    tol: float = 1e-5,
    max_iter: int = 1000,
) -> SolverTrace:
    """Relaxed forward-backward-forward iteration in the Euclidean metric.

    ``x_{k+1} = gamma_k (y_k + lam (F(x_k) - F(y_k))) + (1 - gamma_k) x_k``
    with ``y_k = P_K(x_k - lam F(x_k))``.  A constant relaxation of 1
    recovers the classical FBF iteration.
    """
    if not lam > 0.0:
        raise ValueError("lam must be positive")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    geom = SQUARED_NORM
    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (problem.dim,):
        raise ValueError(f"x0 must have length {problem.dim}")
    tb = _TraceBuilder(problem, geom)
    fs = problem.feasible_set
    stop = StopReason.MAX_ITER
    final_x = x
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, max_iter + 1):
            g = float(gamma_seq(k))
            if not 0.0 < g <= 1.0:
                raise ValueError("relaxation parameters must lie in (0, 1]")
            try:
                fx = eval_operator(problem, x)
                y = bregman_project(geom, fs, x - lam * fx)
                fy = eval_operator(problem, y)
                x_next = g * (y + lam * (fx - fy)) + (1.0 - g) * x
            except DomainError:
                stop = StopReason.DIVERGED
                break
            if not np.all(np.isfinite(x_next)):
                stop = StopReason.DIVERGED
                break
            e = float(np.linalg.norm(x_next - x))
            tb.add(k, x, x, y, lam, e, False)
            final_x = x_next
            if e < tol:
                stop = StopReason.TOLERANCE
                break
            x = x_next
    return tb.build(stop, final_x)


def solve_graal_baseline(
    problem: VIProblem,
    lam: float,
    psi: float,
    x0,
    tol: float = 1e-5,
    max_iter: int = 1000,
) -> SolverTrace:
    """Fixed-step golden-ratio projection baseline.

    ``xbar_k = ((psi - 1) x_k + xbar_{k-1}) / psi`` followed by
    ``x_{k+1} = P_K(xbar_k - lam F(x_k))``, with ``xbar_0 = x_0`` and the
    same stopping rule as the other solvers.  The trace stores ``xbar_k`` in
    the extrapolated-point column and ``x_{k+1}`` in the projected-point
    column.
    """
    if not lam > 0.0:
        raise ValueError("lam must be positive")
    if not psi > 1.0:
        raise ValueError("psi must exceed 1")
    geom = SQUARED_NORM
    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (problem.dim,):
        raise ValueError(f"x0 must have length {problem.dim}")
    xbar = x.copy()
    tb = _TraceBuilder(problem, geom)
    fs = problem.feasible_set
    stop = StopReason.MAX_ITER
    final_x = x
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, max_iter + 1):
            try:
                xbar = ((psi - 1.0) * x + xbar) / psi
                x_next = bregman_project(geom, fs, xbar - lam * eval_operator(problem, x))
            except DomainError:
                stop = StopReason.DIVERGED
                break
            if not np.all(np.isfinite(x_next)):
                stop = StopReason.DIVERGED
                break
            e = float(np.linalg.norm(x_next - x))
            tb.add(k, x, xbar, x_next, lam, e, False)
            final_x = x_next
            if e < tol:
                stop = StopReason.TOLERANCE
                break
            x = x_next
    return tb.build(stop, final_x)


def discrete_ergodic_average(
    trace: SolverTrace, weights: Callable[[int], float] | None = None
) -> np.ndarray:
    """Weighted average ``sum(s_k x_k) / sum(s_k)`` over recorded iterates.

    Uniform weights by default; all weights must be positive.
    """
    if len(trace) == 0:
        raise ValueError("trace is empty")
    if weights is None:
        return trace.xs.mean(axis=0)
    s = np.array([float(weights(int(k))) for k in trace.ks])
    if np.any(s <= 0.0):
        raise ValueError("weights must be positive")
    return (s[:, None] * trace.xs).sum(axis=0) / s.sum()
