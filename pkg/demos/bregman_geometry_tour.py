"""Tour of the two Bregman geometries: distances, projections, identities.

Run:  python demos/bregman_geometry_tour.py
"""

import numpy as np

from qvi import (
    NEGATIVE_ENTROPY,
    SQUARED_NORM,
    Ball,
    Box,
    Simplex,
    bregman_distance,
    bregman_project,
    grad_phi,
    grad_phi_star,
)

rng = np.random.default_rng(0)

print("=== squared-norm geometry ===")
x = np.array([1.0, 0.0])
y = np.array([0.0, 0.0])
print(f"D(x, y) for x={x}, y={y}:  {bregman_distance(SQUARED_NORM, x, y)}   (= 0.5 ||x-y||^2)")

box = Box(lo=-5.0 * np.ones(3), hi=5.0 * np.ones(3))
print("clamp (7,-6,2) into [-5,5]^3:", bregman_project(SQUARED_NORM, box, [7.0, -6.0, 2.0]))

ball = Ball(center=np.zeros(2), radius=2.0)
print("rescale (3,4) into the radius-2 ball:", bregman_project(SQUARED_NORM, ball, [3.0, 4.0]))

simplex = Simplex(dim=4)
v = rng.normal(size=4)
p = bregman_project(SQUARED_NORM, simplex, v)
print(f"Euclidean simplex projection of {np.round(v, 3)} -> {np.round(p, 4)} (sum {p.sum():.3f})")

print()
print("=== negative-entropy geometry ===")
q = np.array([0.2, 0.2, 0.1])
print("entropy projection of (0.2, 0.2, 0.1):", bregman_project(NEGATIVE_ENTROPY, Simplex(3), q))
a = np.array([0.5, 0.5])
b = np.array([0.25, 0.75])
print(f"KL divergence D({a}, {b}) = {bregman_distance(NEGATIVE_ENTROPY, a, b):.6f}")

print()
print("=== three-point identity on random interior points ===")
for geom, name in ((SQUARED_NORM, "sqnorm"), (NEGATIVE_ENTROPY, "entropy")):
    if name == "sqnorm":
        pts = rng.normal(0.0, 2.0, size=(3, 3))
    else:
        pts = np.maximum(rng.dirichlet(np.ones(3), size=3), 1e-9)
    x, y, z = pts
    lhs = (
        bregman_distance(geom, x, y)
        + bregman_distance(geom, y, z)
        - bregman_distance(geom, x, z)
    )
    rhs = float((grad_phi(geom, z) - grad_phi(geom, y)) @ (x - y))
    print(f"{name}: D(x,y)+D(y,z)-D(x,z) = {lhs:+.12f}  vs  <grad(z)-grad(y), x-y> = {rhs:+.12f}")

print()
print("=== gradient pair is an inverse pair ===")
x = np.array([0.3, 0.5, 0.2])
back = grad_phi_star(NEGATIVE_ENTROPY, grad_phi(NEGATIVE_ENTROPY, x))
print(f"entropy: x = {x} -> grad -> grad* -> {back}")
