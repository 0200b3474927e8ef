"""Problem catalog and diagnostics tests.

Derived values come from independent oracles: extended-precision evaluation
of the operators, an eigen-decomposition for the local Jacobian norm bound,
and from-scratch reimplementations of the residual formula.
"""

import math

import mpmath
import numpy as np
import pytest

from qvi.errors import DomainError
from qvi.geometry import Ball, Box, SQUARED_NORM, Simplex
from qvi.problems import (
    CATALOG,
    EXAMPLE_5_1_MATRIX,
    MonotonicityClass,
    VIProblem,
    build_problem,
    c5_gap_series,
    estimate_lipschitz_constant,
    eval_operator,
    example_5_1,
    example_5_2,
    example_5_3,
    minty_gap_minimum,
    natural_residual,
    sample_feasible,
    sampled_quasimonotonicity_check,
    uniform_continuity_bound,
)

mpmath.mp.dps = 50


# ---------------------------------------------------------------------------
# operators


def test_example_5_1_vanishes_at_known_solution():
    p = example_5_1()
    np.testing.assert_array_equal(eval_operator(p, np.zeros(3)), np.zeros(3))
    np.testing.assert_array_equal(p.known_solution, np.zeros(3))


def test_example_5_1_at_unit_vector_matches_extended_precision():
    p = example_5_1()
    got = eval_operator(p, [1.0, 0.0, 0.0])
    scale = float(mpmath.e ** -1 + mpmath.mpf("0.2"))
    np.testing.assert_allclose(got, scale * np.array([1.0, 0.0, -1.0]), rtol=1e-14)
    assert got[0] == pytest.approx(0.56788, abs=1e-5)


def test_example_5_2_vanishes_on_shell():
    p = example_5_2(a=2.0, b=3.0, dim=4)
    x = np.array([3.0, 0.0, 0.0, 0.0])  # norm equal to b
    np.testing.assert_allclose(eval_operator(p, x), np.zeros(4), atol=1e-14)


def test_example_5_3_fractional_power_conventions():
    p = example_5_3()
    np.testing.assert_allclose(eval_operator(p, [1.0, 0.0, 0.0]), [2.0, 1.5, 2.0])
    with pytest.raises(DomainError):
        eval_operator(p, [-0.01, 0.5, 0.51])


def test_eval_operator_shape_and_finiteness_guards():
    p = example_5_1()
    with pytest.raises(ValueError):
        eval_operator(p, [1.0, 2.0])
    with pytest.raises(DomainError):
        eval_operator(p, [np.nan, 0.0, 0.0])


def test_eval_operator_is_bitwise_deterministic():
    p = example_5_1()
    x = np.array([0.3, -1.2, 2.4])
    a = eval_operator(p, x)
    b = eval_operator(p, x)
    assert np.array_equal(a, b)


# ---------------------------------------------------------------------------
# catalog


def test_catalog_names_and_builders():
    assert set(CATALOG) == {"example-5.1", "example-5.2", "example-5.3"}
    p1 = build_problem("example-5.1")
    p2 = build_problem("example-5.2", a=3.0, b=5.0, dim=6)
    p3 = build_problem("example-5.3")
    assert p1.dim == 3 and isinstance(p1.feasible_set, Box)
    assert p2.dim == 6 and isinstance(p2.feasible_set, Ball)
    assert p3.dim == 3 and isinstance(p3.feasible_set, Simplex)
    assert p1.class_label is MonotonicityClass.STRONGLY_PSEUDOMONOTONE
    assert p2.class_label is MonotonicityClass.QUASIMONOTONE
    assert p3.class_label is MonotonicityClass.PSEUDOMONOTONE
    with pytest.raises(KeyError):
        build_problem("example-9.9")


def test_example_5_2_parameter_guard():
    with pytest.raises(ValueError):
        example_5_2(a=1.0, b=3.0)  # violates b/2 < a
    example_5_2(a=1.6, b=3.0)  # boundary-ish but valid


def test_default_starts():
    p2 = example_5_2()
    np.testing.assert_allclose(p2.default_start, 1.0 / np.arange(1, 11))
    assert p2.feasible_set.contains(p2.default_start)
    big = example_5_2(a=2.0, b=3.0, dim=300)
    assert big.feasible_set.contains(big.default_start, tol=1e-9)
    np.testing.assert_allclose(example_5_3().default_start, [0.3, 0.4, 0.3])


def test_known_solution_membership_enforced():
    with pytest.raises(ValueError):
        VIProblem(
            dim=2,
            operator=lambda x: x,
            feasible_set=Box(lo=np.zeros(2), hi=np.ones(2)),
            known_solution=np.array([2.0, 0.0]),
        )


# ---------------------------------------------------------------------------
# natural residual


def test_natural_residual_zero_at_known_solutions():
    for problem in (example_5_1(), example_5_2()):
        for lam in (0.05, 0.1, 0.2):
            assert (
                natural_residual(problem, SQUARED_NORM, problem.known_solution, lam) <= 1e-10
            )


def test_natural_residual_matches_independent_formula():
    # from-scratch reimplementation for the box problem
    p = example_5_1()
    x = np.array([5.0, 5.0, 5.0])
    lam = 0.1
    fx = (math.exp(-float(x @ x)) + 0.2) * (EXAMPLE_5_1_MATRIX @ x)
    z = np.clip(x - lam * fx, -5.0, 5.0)
    expected = float(np.linalg.norm(x - z))
    got = natural_residual(p, SQUARED_NORM, x, lam)
    assert got == pytest.approx(expected, abs=1e-12)
    assert got > 0.0


def test_natural_residual_requires_positive_step():
    with pytest.raises(ValueError):
        natural_residual(example_5_1(), SQUARED_NORM, np.zeros(3), 0.0)


# ---------------------------------------------------------------------------
# sampling


def test_sample_feasible_stays_inside():
    rng = np.random.default_rng(0)
    box = Box(lo=-5.0 * np.ones(3), hi=5.0 * np.ones(3))
    ball = Ball(center=np.zeros(4), radius=2.0)
    simplex = Simplex(dim=5)
    for fs in (box, ball, simplex):
        pts = sample_feasible(fs, rng, 500)
        assert pts.shape == (500, fs.dim)
        assert all(fs.contains(p, tol=1e-9) for p in pts)


def test_quasimonotone_examples():
    report = sampled_quasimonotonicity_check(example_5_2(a=2.0, b=3.0), 10_000, seed=0)
    assert report.violations == 0

    box = Box(lo=-5.0 * np.ones(3), hi=5.0 * np.ones(3))
    ident = VIProblem(dim=3, operator=lambda x: x.copy(), feasible_set=box)
    assert sampled_quasimonotonicity_check(ident, 2_000, seed=0).violations == 0

    neg = VIProblem(dim=3, operator=lambda x: -x, feasible_set=box)
    report = sampled_quasimonotonicity_check(neg, 10_000, seed=1)
    assert report.violations >= 1
    xi, eta = report.witnesses[0]
    d = eta - xi
    assert float(-xi @ d) > 1e-10 and float(-eta @ d) < -1e-10


# ---------------------------------------------------------------------------
# Lipschitz estimation


def test_lipschitz_estimate_exact_for_linear_map():
    box = Box(lo=-5.0 * np.ones(3), hi=5.0 * np.ones(3))
    p = VIProblem(dim=3, operator=lambda x: 2.0 * x, feasible_set=box)
    assert estimate_lipschitz_constant(p, 5_000, seed=0) == pytest.approx(2.0, abs=1e-9)


def test_lipschitz_estimate_example_5_1_brackets():
    # oracle lower bound: the Jacobian at the origin is 1.2 M, whose largest
    # singular value is 1.2 * max eigenvalue of M
    lam_max = float(np.linalg.eigvalsh(EXAMPLE_5_1_MATRIX).max())
    jac_norm = 1.2 * lam_max
    assert jac_norm == pytest.approx(3.1416, abs=2e-4)
    est = estimate_lipschitz_constant(example_5_1(), 30_000, seed=0)
    assert 3.0 <= est <= 5.0679 * 1.01
    assert est == pytest.approx(jac_norm, abs=2e-3)


def test_lipschitz_estimate_example_5_3_blows_up_near_boundary():
    est = estimate_lipschitz_constant(example_5_3(), 30_000, seed=0, near_pair_range=(1e-6, 1e-3))
    assert est > 100.0


def test_lipschitz_estimate_grows_as_pair_floor_shrinks():
    coarse = estimate_lipschitz_constant(example_5_3(), 8_000, seed=3, near_pair_range=(1e-3, 1e-2))
    fine = estimate_lipschitz_constant(example_5_3(), 8_000, seed=3, near_pair_range=(1e-6, 1e-3))
    assert fine > coarse


# ---------------------------------------------------------------------------
# uniform continuity and dual-solution diagnostics


def test_uniform_continuity_probe_is_finite_for_routes():
    m = uniform_continuity_bound(example_5_3(), epsilon=0.5, sample_count=100_000, seed=0)
    print(f"minimal sampled M for the route operator at epsilon=0.5: {m:.4f}")
    assert math.isfinite(m)
    assert 0.0 < m < 100.0


def test_minty_gap_at_origin_for_ball_problem():
    gap = minty_gap_minimum(example_5_2(a=2.0, b=3.0), np.zeros(10), 10_000, seed=0)
    assert gap >= -1e-10


# ---------------------------------------------------------------------------
# normalized gap series


def test_c5_gap_series_trivial_cases():
    p = example_5_2(a=2.0, b=3.0, dim=2)
    u = np.array([0.1, 0.2])
    assert c5_gap_series(p, [u, u], u, eps=0.0).size == 0

    box = Box(lo=-5.0 * np.ones(2), hi=5.0 * np.ones(2))
    ident = VIProblem(dim=2, operator=lambda x: x.copy(), feasible_set=box)
    got = c5_gap_series(ident, [np.array([2.0, 0.0])], np.zeros(2), eps=0.0)
    np.testing.assert_allclose(got, [1.0])


def test_c5_gap_series_bounded_below_for_ball_problem():
    # For F(x) = (b - ||x||) x and u = 0 the normalized gap with eps = 0 is
    # exactly b - ||y||, at least b - a on the ball.  Checked both on the
    # projected points of a solver run and on uniform samples.
    from qvi.solvers import Alg1Config, solve_alg1

    a, b = 2.0, 3.0
    p = example_5_2(a=a, b=b, dim=10)
    trace = solve_alg1(p, Alg1Config(), p.default_start, p.default_start)
    run_gaps = c5_gap_series(p, trace.ys, np.zeros(10), eps=0.0)
    assert run_gaps.size > 0
    assert run_gaps.min() >= (b - a) - 1e-9

    rng = np.random.default_rng(5)
    ys = sample_feasible(p.feasible_set, rng, 2_000)
    gaps = c5_gap_series(p, ys, np.zeros(10), eps=0.0)
    assert gaps.size == 2_000
    assert gaps.min() >= (b - a) - 1e-9
