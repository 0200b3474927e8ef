"""Variational inequality problem definitions and operator diagnostics.

A :class:`VIProblem` bundles an operator ``F``, a feasible set ``K`` and
optional metadata.  The built-in catalog exposes three problems addressable
by name from the CLI and config files:

* ``example-5.1``: ``F(x) = (exp(-||x||^2) + q) M x`` on the box
  ``[-5, 5]^3`` with a known solution at the origin;
* ``example-5.2``: ``F(x) = (b - ||x||) x`` on a centered ball, a
  quasimonotone operator whose dual solution set is ``{0}`` (finite
  truncation of a square-summable sequence space);
* ``example-5.3``: route-cost operator ``F_i(x) = c_i + x_i^q`` on the
  probability simplex, continuous but not Lipschitz.

Diagnostics are sampling based and seeded, so every report is reproducible.
Problems are immutable and operator evaluation is pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .geometry import (
    SQUARED_NORM,
    Ball,
    Box,
    BregmanGeometry,
    FeasibleSet,
    Simplex,
    bregman_project,
    grad_phi,
    grad_phi_star,
)

__all__ = [
    "MonotonicityClass",
    "VIProblem",
    "ProblemCatalogEntry",
    "CATALOG",
    "build_problem",
    "example_5_1",
    "example_5_2",
    "example_5_3",
    "EXAMPLE_5_1_MATRIX",
    "eval_operator",
    "natural_residual",
    "sample_feasible",
    "QuasimonotonicityReport",
    "sampled_quasimonotonicity_check",
    "estimate_lipschitz_constant",
    "uniform_continuity_bound",
    "minty_gap_minimum",
    "c5_gap_series",
]


class MonotonicityClass(enum.Enum):
    MONOTONE = "monotone"
    STRONGLY_PSEUDOMONOTONE = "strongly_pseudomonotone"
    PSEUDOMONOTONE = "pseudomonotone"
    QUASIMONOTONE = "quasimonotone"
    UNKNOWN = "unknown"


@dataclass(frozen=True, eq=False)
class VIProblem:
    """Find ``x* in K`` with ``<F(x*), y - x*> >= 0`` for all ``y in K``.

    ``class_label`` is advisory metadata only; no solver branches on it.
    ``default_start`` is the initial point used by the harness and CLI when
    none is supplied.
    """

    dim: int
    operator: Callable[[np.ndarray], np.ndarray]
    feasible_set: FeasibleSet
    known_solution: np.ndarray | None = None
    class_label: MonotonicityClass = MonotonicityClass.UNKNOWN
    name: str = ""
    default_start: np.ndarray | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        for attr in ("known_solution", "default_start"):
            v = getattr(self, attr)
            if v is None:
                continue
            v = np.asarray(v, dtype=float)
            if v.shape != (self.dim,):
                raise ValueError(f"{attr} must have length {self.dim}")
            v.flags.writeable = False
            object.__setattr__(self, attr, v)
        if self.known_solution is not None and not self.feasible_set.contains(
            self.known_solution, tol=1e-12
        ):
            raise ValueError("known_solution does not lie in the feasible set")


def eval_operator(problem: VIProblem, x) -> np.ndarray:
    """Evaluate ``F`` with shape and finiteness checks.

    Deterministic: repeated calls on the same input agree bitwise.
    """
    v = np.asarray(x, dtype=float)
    if v.shape != (problem.dim,):
        raise ValueError(f"x must have length {problem.dim}, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError("x has a non-finite component")
    fx = np.asarray(problem.operator(v), dtype=float)
    if fx.shape != (problem.dim,):
        raise ValueError("operator returned a vector of the wrong length")
    return fx


def natural_residual(problem: VIProblem, geom: BregmanGeometry, x, lam: float) -> float:
    """Fixed-point residual ``||x - proj_K(grad_phi_star(grad_phi(x) - lam F(x)))||``.

    Zero exactly at solutions of the variational inequality.
    """
    if not lam > 0.0:
        raise ValueError("lam must be positive")
    xv = np.asarray(x, dtype=float)
    step = grad_phi(geom, xv) - lam * eval_operator(problem, xv)
    z = bregman_project(geom, problem.feasible_set, grad_phi_star(geom, step))
    return float(np.linalg.norm(xv - z))


# ---------------------------------------------------------------------------
# catalog


EXAMPLE_5_1_MATRIX = np.array([[1.0, 0.0, -1.0], [0.0, 1.5, 0.0], [-1.0, 0.0, 2.0]])
EXAMPLE_5_1_MATRIX.flags.writeable = False


def example_5_1(q: float = 0.2) -> VIProblem:
    """Gaussian-damped linear operator on the box ``[-5, 5]^3``.

    The damping factor ``exp(-||x||^2) + q`` is positive, so the origin is
    the unique solution.
    """
    if not q > 0.0:
        raise ValueError("q must be positive")
    m = EXAMPLE_5_1_MATRIX

    def op(x: np.ndarray) -> np.ndarray:
        return (np.exp(-float(x @ x)) + q) * (m @ x)

    return VIProblem(
        dim=3,
        operator=op,
        feasible_set=Box(lo=-5.0 * np.ones(3), hi=5.0 * np.ones(3)),
        known_solution=np.zeros(3),
        class_label=MonotonicityClass.STRONGLY_PSEUDOMONOTONE,
        name="example-5.1",
        default_start=np.array([-5.0, 4.0, 7.0]),
    )


def example_5_2(a: float = 2.0, b: float = 3.0, dim: int = 10) -> VIProblem:
    """Radial shell operator ``F(x) = (b - ||x||) x`` on the ball of radius ``a``.

    Requires ``0 < b/2 < a``.  Quasimonotone; the dual solution set is the
    origin.  ``dim`` is the truncation dimension of the sequence space; the
    default start has components ``1/i`` rescaled into the ball when needed.
    """
    if not (0.0 < b / 2.0 < a):
        raise ValueError("parameters must satisfy 0 < b/2 < a")
    if dim < 2:
        raise ValueError("dim must be at least 2")

    def op(x: np.ndarray) -> np.ndarray:
        return (b - float(np.linalg.norm(x))) * x

    start = 1.0 / np.arange(1, dim + 1)
    r = float(np.linalg.norm(start))
    if r > a:
        start = (a / r) * start

    return VIProblem(
        dim=dim,
        operator=op,
        feasible_set=Ball(center=np.zeros(dim), radius=a),
        known_solution=np.zeros(dim),
        class_label=MonotonicityClass.QUASIMONOTONE,
        name="example-5.2",
        default_start=start,
    )


def example_5_3(q: float = 0.2, base_costs=(1.0, 1.5, 2.0)) -> VIProblem:
    """Route-choice cost operator on the probability simplex.

    ``F_i(x) = c_i + x_i^q`` with ``x_i^q`` defined as 0 at ``x_i = 0``.  The
    fractional power has unbounded slope at the boundary, so the operator is
    not Lipschitz.  Negative components are a domain error.
    """
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie in (0, 1)")
    base = np.asarray(base_costs, dtype=float)
    n = base.size

    def op(x: np.ndarray) -> np.ndarray:
        if np.any(x < 0.0):
            raise DomainError("negative component into fractional power")
        return base + np.power(x, q)

    return VIProblem(
        dim=n,
        operator=op,
        feasible_set=Simplex(dim=n),
        known_solution=None,
        class_label=MonotonicityClass.PSEUDOMONOTONE,
        name="example-5.3",
        default_start=np.array([0.3, 0.4, 0.3]),
    )


@dataclass(frozen=True)
class ProblemCatalogEntry:
    name: str
    builder: Callable[..., VIProblem]
    description: str


CATALOG = {
    "example-5.1": ProblemCatalogEntry(
        "example-5.1", example_5_1, "damped linear operator on a box"
    ),
    "example-5.2": ProblemCatalogEntry(
        "example-5.2", example_5_2, "radial shell operator on a ball"
    ),
    "example-5.3": ProblemCatalogEntry(
        "example-5.3", example_5_3, "route costs on the probability simplex"
    ),
}


def build_problem(name: str, **params) -> VIProblem:
    """Build a catalog problem by name, forwarding builder parameters."""
    try:
        entry = CATALOG[name]
    except KeyError:
        known = ", ".join(sorted(CATALOG))
        raise KeyError(f"unknown problem {name!r}; catalog has: {known}") from None
    return entry.builder(**params)


# ---------------------------------------------------------------------------
# sampling and diagnostics


def sample_feasible(feasible_set: FeasibleSet, rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw ``count`` points from ``K`` (rows of the returned array).

    Box: componentwise uniform.  Ball: uniform by radial rescaling of a
    spherical direction.  Simplex: flat Dirichlet.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if isinstance(feasible_set, Box):
        return rng.uniform(feasible_set.lo, feasible_set.hi, size=(count, feasible_set.dim))
    if isinstance(feasible_set, Ball):
        d = feasible_set.dim
        dirs = rng.standard_normal((count, d))
        dirs /= np.maximum(np.linalg.norm(dirs, axis=1, keepdims=True), 1e-300)
        radii = feasible_set.radius * rng.uniform(0.0, 1.0, size=(count, 1)) ** (1.0 / d)
        return feasible_set.center + radii * dirs
    if isinstance(feasible_set, Simplex):
        return rng.dirichlet(np.ones(feasible_set.dim), size=count)
    raise TypeError(f"unsupported feasible set {type(feasible_set).__name__}")


@dataclass(frozen=True)
class QuasimonotonicityReport:
    """Outcome of a sampled quasimonotonicity check."""

    violations: int
    witnesses: list[tuple[np.ndarray, np.ndarray]]
    sample_count: int
    seed: int


def sampled_quasimonotonicity_check(
    problem: VIProblem, sample_count: int, seed: int
) -> QuasimonotonicityReport:
    """Count sampled pairs violating the quasimonotonicity implication.

    A pair ``(xi, eta)`` is a violation when ``<F(xi), eta - xi>`` exceeds
    1e-10 while ``<F(eta), eta - xi>`` is below -1e-10.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    rng = np.random.default_rng(seed)
    xis = sample_feasible(problem.feasible_set, rng, sample_count)
    etas = sample_feasible(problem.feasible_set, rng, sample_count)
    tol = 1e-10
    witnesses: list[tuple[np.ndarray, np.ndarray]] = []
    for xi, eta in zip(xis, etas):
        d = eta - xi
        if float(eval_operator(problem, xi) @ d) > tol and float(
            eval_operator(problem, eta) @ d
        ) < -tol:
            witnesses.append((xi.copy(), eta.copy()))
    return QuasimonotonicityReport(
        violations=len(witnesses),
        witnesses=witnesses,
        sample_count=sample_count,
        seed=seed,
    )


def _set_diameter(feasible_set: FeasibleSet) -> float:
    if isinstance(feasible_set, Box):
        return float(np.linalg.norm(feasible_set.hi - feasible_set.lo))
    if isinstance(feasible_set, Ball):
        return 2.0 * feasible_set.radius
    return float(np.sqrt(2.0))


def _probe_directions(feasible_set: FeasibleSet, dim: int) -> np.ndarray:
    # Rows span the directions along which difference quotients are probed;
    # for the simplex they must stay inside the sum-zero tangent plane.
    if isinstance(feasible_set, Simplex):
        dirs = np.zeros((dim - 1, dim))
        for i in range(dim - 1):
            dirs[i, i] = 1.0
            dirs[i, dim - 1] = -1.0
        return dirs / np.sqrt(2.0)
    return np.eye(dim)


def _tangentize(feasible_set: FeasibleSet, v: np.ndarray) -> np.ndarray:
    if isinstance(feasible_set, Simplex):
        v = v - v.mean()
    n = float(np.linalg.norm(v))
    return v / n if n > 0.0 else v


def estimate_lipschitz_constant(
    problem: VIProblem,
    sample_count: int,
    seed: int,
    near_pair_range: tuple[float, float] = (1e-6, 1e-3),
) -> float:
    """Largest sampled difference quotient ``||F(x)-F(y)|| / ||x-y||``.

    The pair budget is spent three ways: independent far pairs, near-coincident
    fans around sampled base points (spacing drawn from ``near_pair_range``)
    that probe local Jacobian norms and then re-evaluate along the top
    singular direction, and shrinking-neighborhood refinement rounds around
    the best base point found so far.  The result is a lower bound on any
    true Lipschitz constant; for operators with unbounded slope it grows as
    the pair floor shrinks.
    """
    if sample_count < 2:
        raise ValueError("sample_count must be at least 2")
    lo, hi = near_pair_range
    if not (0.0 < lo < hi):
        raise ValueError("near_pair_range must be increasing and positive")
    rng = np.random.default_rng(seed)
    fs = problem.feasible_set
    dim = problem.dim
    dist_floor = 1e-9

    def quotient(x: np.ndarray, fx: np.ndarray, y: np.ndarray) -> float:
        d = float(np.linalg.norm(x - y))
        if d < dist_floor:
            return -1.0
        return float(np.linalg.norm(fx - eval_operator(problem, y))) / d

    best = 0.0
    best_x = sample_feasible(fs, rng, 1)[0]

    # Phase 1: independent pairs across the whole set.
    n_far = max(sample_count // 2, 1)
    xs = sample_feasible(fs, rng, n_far)
    ys = sample_feasible(fs, rng, n_far)
    for x, y in zip(xs, ys):
        r = quotient(x, eval_operator(problem, x), y)
        if r > best:
            best, best_x = r, x

    dirs = _probe_directions(fs, dim)
    pairs_per_probe = dirs.shape[0] + 1

    def probe(x: np.ndarray) -> float:
        """Fan of near pairs at x; returns the best quotient found."""
        nonlocal best, best_x
        delta = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
        fx = eval_operator(problem, x)
        disps = []
        diffs = []
        local = 0.0
        for d in dirs:
            # Project candidates back into K; identity for interior points.
            y = bregman_project(SQUARED_NORM, fs, x + delta * d)
            if float(np.linalg.norm(y - x)) < dist_floor:
                y = bregman_project(SQUARED_NORM, fs, x - delta * d)
                if float(np.linalg.norm(y - x)) < dist_floor:
                    continue
            disps.append(y - x)
            fy = eval_operator(problem, y)
            diffs.append(fy - fx)
            r = float(np.linalg.norm(fy - fx)) / float(np.linalg.norm(y - x))
            local = max(local, r)
        if disps:
            # Least-squares local Jacobian from the fan (rows: disp @ J^T =
            # diff), then one honest pair along its top singular direction.
            jac_t, *_ = np.linalg.lstsq(np.array(disps), np.array(diffs), rcond=None)
            _, _, vt = np.linalg.svd(jac_t.T)
            v = _tangentize(fs, vt[0])
            y = bregman_project(SQUARED_NORM, fs, x + delta * v)
            r = quotient(x, fx, y)
            local = max(local, r)
        if local > best:
            best, best_x = local, x
        return local

    remaining = sample_count - n_far
    n_probe = max(remaining // pairs_per_probe, 1)
    n_seed_probes = max((7 * n_probe) // 10, 1)
    for x in sample_feasible(fs, rng, n_seed_probes):
        probe(x)

    # Phase 3: refine around the incumbent with a shrinking neighborhood.
    n_refine = max(n_probe - n_seed_probes, 1)
    rounds = 12
    per_round = max(n_refine // rounds, 1)
    sigma = _set_diameter(fs) / 3.0
    for _ in range(rounds):
        anchor = best_x.copy()
        for _ in range(per_round):
            x = bregman_project(SQUARED_NORM, fs, anchor + sigma * rng.standard_normal(dim))
            probe(x)
        sigma *= 0.6
    return best


def uniform_continuity_bound(
    problem: VIProblem, epsilon: float, sample_count: int, seed: int
) -> float:
    """Minimal sampled ``M`` with ``||F(x)-F(y)|| <= M ||x-y|| + epsilon``.

    Finite for uniformly continuous operators even when no Lipschitz constant
    exists, since the additive slack absorbs short-range steepness.
    """
    if epsilon < 0.0:
        raise ValueError("epsilon must be nonnegative")
    rng = np.random.default_rng(seed)
    fs = problem.feasible_set
    n_far = sample_count // 2
    n_near = sample_count - n_far
    m = 0.0
    xs = sample_feasible(fs, rng, n_far)
    ys = sample_feasible(fs, rng, n_far)
    for x, y in zip(xs, ys):
        d = float(np.linalg.norm(x - y))
        if d < 1e-9:
            continue
        excess = float(np.linalg.norm(eval_operator(problem, x) - eval_operator(problem, y))) - epsilon
        if excess > 0.0:
            m = max(m, excess / d)
    for x in sample_feasible(fs, rng, n_near):
        delta = float(np.exp(rng.uniform(np.log(1e-6), np.log(1e-3))))
        v = _tangentize(fs, rng.standard_normal(problem.dim))
        y = bregman_project(SQUARED_NORM, fs, x + delta * v)
        d = float(np.linalg.norm(x - y))
        if d < 1e-9:
            continue
        excess = float(np.linalg.norm(eval_operator(problem, x) - eval_operator(problem, y))) - epsilon
        if excess > 0.0:
            m = max(m, excess / d)
    return m


def minty_gap_minimum(problem: VIProblem, u, sample_count: int, seed: int) -> float:
    """Minimum of ``<F(y), y - u>`` over sampled ``y in K``.

    Nonnegative (up to tolerance) exactly when ``u`` looks like a dual
    solution on the sample.
    """
    rng = np.random.default_rng(seed)
    uv = np.asarray(u, dtype=float)
    ys = sample_feasible(problem.feasible_set, rng, sample_count)
    return min(float(eval_operator(problem, y) @ (y - uv)) for y in ys)


def c5_gap_series(problem: VIProblem, ys, u, eps: float) -> np.ndarray:
    """Normalized gap ``|<F(y), y - u>| / ||y - u||^(2+eps)`` along a path.

    ``u`` must lie in the feasible set.  Entries with ``||y - u|| <= 1e-12``
    are omitted.
    """
    if eps < 0.0:
        raise ValueError("eps must be nonnegative")
    uv = np.asarray(u, dtype=float)
    if not problem.feasible_set.contains(uv, tol=1e-9):
        raise ValueError("u must lie in the feasible set")
    out = []
    for y in ys:
        yv = np.asarray(y, dtype=float)
        dist = float(np.linalg.norm(yv - uv))
        if dist <= 1e-12:
            continue
        out.append(abs(float(eval_operator(problem, yv) @ (yv - uv))) / dist ** (2.0 + eps))
    return np.array(out)
