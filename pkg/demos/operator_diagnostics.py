"""Sampled operator diagnostics: monotonicity class probes, Lipschitz lower
bounds, uniform-continuity surrogates, and normalized-gap series.

Run:  python demos/operator_diagnostics.py
"""

import numpy as np

from qvi import (
    Box,
    VIProblem,
    c5_gap_series,
    estimate_lipschitz_constant,
    example_5_1,
    example_5_2,
    example_5_3,
    minty_gap_minimum,
    sample_feasible,
    sampled_quasimonotonicity_check,
    uniform_continuity_bound,
)

print("=== quasimonotonicity sampling ===")
for problem, label in (
    (example_5_2(), "radial shell on the ball"),
    (
        VIProblem(
            dim=3,
            operator=lambda x: -x,
            feasible_set=Box(lo=-5.0 * np.ones(3), hi=5.0 * np.ones(3)),
        ),
        "negated identity on the box (not quasimonotone)",
    ),
):
    rep = sampled_quasimonotonicity_check(problem, sample_count=10_000, seed=1)
    print(f"{label}: {rep.violations} violations / {rep.sample_count} pairs")
    if rep.witnesses:
        xi, eta = rep.witnesses[0]
        print(f"  first witness pair: xi={np.round(xi, 3)}, eta={np.round(eta, 3)}")

print()
print("=== Lipschitz lower bounds ===")
box_est = estimate_lipschitz_constant(example_5_1(), 30_000, seed=0)
print(f"damped-linear box operator: {box_est:.5f} (the Jacobian norm peaks at the origin)")
routes_est = estimate_lipschitz_constant(example_5_3(), 30_000, seed=0)
print(f"route-cost operator: {routes_est:.0f} and growing as the pair floor shrinks")

print()
print("=== uniform-continuity surrogate for the non-Lipschitz operator ===")
m = uniform_continuity_bound(example_5_3(), epsilon=0.5, sample_count=100_000, seed=0)
print(f"minimal sampled M with ||F(x)-F(y)|| <= M ||x-y|| + 0.5:  M = {m:.3f}")

print()
print("=== dual-solution membership and normalized gaps ===")
gap0 = minty_gap_minimum(example_5_2(), np.zeros(10), sample_count=10_000, seed=0)
print(f"min <F(y), y - 0> over 10^4 sampled y in the ball: {gap0:.3e} (>= 0: origin is dual)")
p = example_5_2()
rng = np.random.default_rng(2)
ys = sample_feasible(p.feasible_set, rng, 1_000)
gaps = c5_gap_series(p, ys, np.zeros(10), eps=0.0)
print(f"normalized gap |<F(y), y>| / ||y||^2 over samples: min {gaps.min():.3f} (>= b - a = 1)")
