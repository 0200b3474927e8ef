"""Executable property suites behind the ``check`` command.

Each suite returns a list of named pass/fail results so the CLI can print
one line per property.  Tolerances follow the module contracts: identities
at 1e-10 relative, gradient inversion at 1e-12.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import FlowSystem, IntegratorConfig, Scheme, integrate_flow, lyapunov_energy
from .geometry import (
    NEGATIVE_ENTROPY,
    SQUARED_NORM,
    Ball,
    Box,
    BregmanGeometry,
    GeometryKind,
    Simplex,
    bregman_distance,
    bregman_project,
    grad_phi,
    grad_phi_star,
)
from .harness import ALG1_SETTINGS_5_2, SETTINGS_5_3, run_example_5_2, run_example_5_3
from .problems import example_5_1
from .solvers import SolverTrace

__all__ = ["CheckResult", "geometry_suite", "stepsize_suite", "dynamics_suite", "run_suite", "SUITES"]

_IDENTITY_TOL = 1e-10
_INVERSION_TOL = 1e-12
_INSTANCES = 1000


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _result(name: str, worst: float, tol: float) -> CheckResult:
    return CheckResult(name, bool(worst <= tol), f"worst violation {worst:.3e}, tolerance {tol:.1e}")


def _rel_gap(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def _sample_domain(geom: BregmanGeometry, rng: np.random.Generator, n: int, dim: int = 3):
    if geom.kind is GeometryKind.SQUARED_NORM:
        return rng.normal(0.0, 2.0, size=(n, dim))
    pts = rng.dirichlet(np.ones(dim), size=n)
    pts = np.maximum(pts, 1e-9)
    return pts / pts.sum(axis=1, keepdims=True)


def _sets_for(geom: BregmanGeometry):
    if geom.kind is GeometryKind.SQUARED_NORM:
        return [
            Box(lo=-5.0 * np.ones(3), hi=5.0 * np.ones(3)),
            Ball(center=np.zeros(3), radius=2.0),
            Simplex(dim=3),
        ]
    return [Simplex(dim=3)]


def _sample_in_set(feasible_set, rng: np.random.Generator, n: int) -> np.ndarray:
    from .problems import sample_feasible

    return sample_feasible(feasible_set, rng, n)


def geometry_suite(seed: int = 0) -> list[CheckResult]:
    results: list[CheckResult] = []
    for geom, tag in ((SQUARED_NORM, "sqnorm"), (NEGATIVE_ENTROPY, "entropy")):
        rng = np.random.default_rng(seed)
        xs = _sample_domain(geom, rng, _INSTANCES)
        ys = _sample_domain(geom, rng, _INSTANCES)
        zs = _sample_domain(geom, rng, _INSTANCES)
        ws = _sample_domain(geom, rng, _INSTANCES)

        worst = 0.0
        for x, y, z in zip(xs, ys, zs):
            lhs = (
                bregman_distance(geom, x, y)
                + bregman_distance(geom, y, z)
                - bregman_distance(geom, x, z)
            )
            rhs = float((grad_phi(geom, z) - grad_phi(geom, y)) @ (x - y))
            worst = max(worst, _rel_gap(lhs, rhs))
        results.append(_result(f"{tag}: three-point identity", worst, _IDENTITY_TOL))

        worst = 0.0
        a_vals = rng.uniform(0.05, 0.95, _INSTANCES)
        for x, z, w, a in zip(xs, zs, ws, a_vals):
            y = grad_phi_star(geom, a * grad_phi(geom, z) + (1.0 - a) * grad_phi(geom, w))
            lhs = bregman_distance(geom, x, y)
            rhs = a * (
                bregman_distance(geom, x, z) - bregman_distance(geom, y, z)
            ) + (1.0 - a) * (bregman_distance(geom, x, w) - bregman_distance(geom, y, w))
            worst = max(worst, _rel_gap(lhs, rhs))
        results.append(_result(f"{tag}: gradient-combination identity", worst, _IDENTITY_TOL))

        worst = 0.0
        for x in xs:
            back = grad_phi_star(geom, grad_phi(geom, x))
            ref = np.maximum(x, geom.eps_dom) if geom.kind is GeometryKind.NEGATIVE_ENTROPY else x
            worst = max(worst, float(np.max(np.abs(back - ref))) / max(1.0, float(np.max(np.abs(ref)))))
        results.append(_result(f"{tag}: gradient inversion", worst, _INVERSION_TOL))

        worst = 0.0
        for x, y in zip(xs, ys):
            d = bregman_distance(geom, x, y)
            if geom.kind is GeometryKind.SQUARED_NORM:
                bound = 0.5 * geom.rho * float(np.sum((x - y) ** 2))
            else:
                # Pinsker-type bound on the simplex, 1-norm.
                bound = 0.5 * float(np.sum(np.abs(x - y))) ** 2
            worst = max(worst, bound - d)
        results.append(_result(f"{tag}: strong convexity lower bound", worst, _IDENTITY_TOL))

        worst_obtuse = 0.0
        worst_projineq = 0.0
        worst_idem = 0.0
        for fs in _sets_for(geom):
            n = _INSTANCES // len(_sets_for(geom))
            if geom.kind is GeometryKind.SQUARED_NORM:
                outs = rng.normal(0.0, 4.0, size=(n, 3))
            else:
                outs = np.exp(rng.normal(0.0, 1.5, size=(n, 3)))
            members = _sample_in_set(fs, rng, n)
            for x, y in zip(outs, members):
                z = bregman_project(geom, fs, x)
                worst_obtuse = max(
                    worst_obtuse, float((grad_phi(geom, x) - grad_phi(geom, z)) @ (y - z))
                )
                lhs = bregman_distance(geom, y, z) + bregman_distance(geom, z, x)
                rhs = bregman_distance(geom, y, x)
                worst_projineq = max(worst_projineq, (lhs - rhs) / max(1.0, abs(rhs)))
                worst_idem = max(
                    worst_idem, float(np.linalg.norm(bregman_project(geom, fs, y) - y))
                )
        results.append(_result(f"{tag}: obtuse-angle characterization", worst_obtuse, _IDENTITY_TOL))
        results.append(_result(f"{tag}: projection inequality", worst_projineq, _IDENTITY_TOL))
        results.append(_result(f"{tag}: projection idempotence", worst_idem, _INVERSION_TOL))

        worst = 0.0
        for x, y, z, w in zip(xs, ys, zs, ws):
            t = rng.dirichlet(np.ones(3))
            mix = grad_phi_star(
                geom,
                t[0] * grad_phi(geom, x) + t[1] * grad_phi(geom, y) + t[2] * grad_phi(geom, z),
            )
            lhs = bregman_distance(geom, w, mix)
            rhs = (
                t[0] * bregman_distance(geom, w, x)
                + t[1] * bregman_distance(geom, w, y)
                + t[2] * bregman_distance(geom, w, z)
            )
            worst = max(worst, (lhs - rhs) / max(1.0, abs(rhs)))
        results.append(_result(f"{tag}: averaging inequality", worst, _IDENTITY_TOL))
    return results


def _stepsize_checks(tag: str, trace: SolverTrace, lambda1: float, eta_total: float, tol: float):
    out = []
    lams = np.asarray(trace.lams)
    cap = lambda1 + eta_total + 1e-12
    out.append(_result(f"{tag}: step cap lam <= lam1 + Xi", float(lams.max() - cap), 0.0))
    dec = float(np.maximum(lams[:-1] - lams[1:], 0.0).sum())
    out.append(
        _result(f"{tag}: summable step decrements", dec - (lambda1 + eta_total + 1e-9), 0.0)
    )
    if len(lams) >= 500:
        tail = lams[int(0.8 * len(lams)) :]
        out.append(_result(f"{tag}: step tail oscillation", float(tail.max() - tail.min()), 1e-3))
    if trace.stop_reason.value == "tolerance" and len(trace) >= 2:
        j = len(trace) - 1
        gaps = (
            float(np.linalg.norm(trace.ws[j] - trace.ws[j - 1])),
            float(np.linalg.norm(trace.ws[j] - trace.xs[j])),
            float(np.linalg.norm(trace.ws[j] - trace.ys[j])),
        )
        out.append(_result(f"{tag}: vanishing gaps at stop", max(gaps), 10.0 * tol))
    return out


def stepsize_suite(seed: int = 0) -> list[CheckResult]:
    # Runs are deterministic; the seed is accepted for interface uniformity.
    del seed
    results: list[CheckResult] = []
    res52 = run_example_5_2("I", dim=10, solvers=("alg1",))
    trace = res52.traces[("I", "alg1")]
    from .solvers import DEFAULT_ETA

    results += _stepsize_checks(
        "ball case I", trace, ALG1_SETTINGS_5_2["lambda1"], DEFAULT_ETA.total, ALG1_SETTINGS_5_2["tol"]
    )

    # Composite descent: with p the known solution, the weighted sum of
    # distances to p must not increase while mu*lam_k <= lam_{k+1}.
    p = np.zeros(trace.xs.shape[1])
    gamma = ALG1_SETTINGS_5_2["gamma"]
    psi = ALG1_SETTINGS_5_2["psi"]
    mu = ALG1_SETTINGS_5_2["mu"]
    worst = 0.0
    for j in range(1, len(trace) - 1):
        lam_k, lam_next = trace.lams[j], trace.lams[j + 1]
        if mu * lam_k > lam_next:
            continue
        upsilon_k = bregman_distance(SQUARED_NORM, p, trace.xs[j]) + (gamma / (psi - 1.0)) * bregman_distance(
            SQUARED_NORM, p, trace.ws[j - 1]
        )
        upsilon_next = bregman_distance(SQUARED_NORM, p, trace.xs[j + 1]) + (
            gamma / (psi - 1.0)
        ) * bregman_distance(SQUARED_NORM, p, trace.ws[j])
        worst = max(worst, upsilon_next - upsilon_k)
    results.append(_result("ball case I: composite distance descent", worst, 1e-10))

    res53 = run_example_5_3(with_extrapolation=True)
    results += _stepsize_checks(
        "routes", res53.trace, SETTINGS_5_3["lambda1"], DEFAULT_ETA.total, SETTINGS_5_3["tol"]
    )
    return results


def dynamics_suite(seed: int = 0) -> list[CheckResult]:
    del seed
    results: list[CheckResult] = []
    problem = example_5_1()
    x_star = problem.known_solution

    traj0 = integrate_flow(
        problem, FlowSystem.FBF, 0.2, x_star, IntegratorConfig(h=1e-3, T=1.0, record_stride=100)
    )
    worst = float(np.max(np.linalg.norm(traj0.xs - x_star, axis=1)))
    results.append(_result("equilibrium stationarity", worst, 1e-12))

    x0 = np.array([-5.0, 4.0, 7.0])
    cfg = IntegratorConfig(h=1e-3, T=50.0, record_stride=10)
    for lam in (0.05, 0.1, 0.2):
        traj = integrate_flow(problem, FlowSystem.FBF, lam, x0, cfg)
        v = lyapunov_energy(traj, x_star)
        results.append(
            _result(f"energy monotone, lambda={lam:g}", float(np.max(np.diff(v))), 1e-10)
        )
        bound = float(np.linalg.norm(x0 - x_star)) + 1e-6
        worst = float(np.max(np.linalg.norm(traj.xs - x_star, axis=1))) - bound
        results.append(_result(f"trajectory bounded, lambda={lam:g}", worst, 0.0))

    short = dict(T=10.0, record_stride=1000)
    e1 = integrate_flow(problem, FlowSystem.FBF, 0.2, x0, IntegratorConfig(h=2e-2, **short))
    e2 = integrate_flow(problem, FlowSystem.FBF, 0.2, x0, IntegratorConfig(h=1e-2, **short))
    e3 = integrate_flow(problem, FlowSystem.FBF, 0.2, x0, IntegratorConfig(h=5e-3, **short))
    d1 = float(np.linalg.norm(e1.xs[-1] - e2.xs[-1]))
    d2 = float(np.linalg.norm(e2.xs[-1] - e3.xs[-1]))
    results.append(_result("Euler halving is first order", d2 - 0.75 * d1, 0.0))
    rk = integrate_flow(
        problem,
        FlowSystem.FBF,
        0.2,
        x0,
        IntegratorConfig(scheme=Scheme.RUNGE_KUTTA4, h=1e-2, **short),
    )
    fine = integrate_flow(problem, FlowSystem.FBF, 0.2, x0, IntegratorConfig(h=1e-4, **short))
    gap = float(np.linalg.norm(rk.xs[-1] - fine.xs[-1]))
    results.append(_result("RK4 matches fine Euler", gap, 1e-3))
    return results


SUITES = {
    "geometry": geometry_suite,
    "stepsize": stepsize_suite,
    "dynamics": dynamics_suite,
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    """Run one named suite, or all of them."""
    if name == "all":
        out: list[CheckResult] = []
        for suite in SUITES.values():
            out += suite(seed)
        return out
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all") from None
    return suite(seed)
