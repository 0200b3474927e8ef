"""Solvers for quasimonotone variational inequalities.

The package combines a continuous forward-backward-forward flow with its
discrete Bregman golden-ratio counterpart, adaptive step sizes that need no
Lipschitz constant, closed-form Bregman geometry, sampled operator
diagnostics, and a reproduction harness with a CLI.
"""

from .dynamics import (
    FlowSystem,
    IntegratorConfig,
    Scheme,
    Trajectory,
    continuous_ergodic_average,
    fbf_residual_series,
    integrate_flow,
    lyapunov_energy,
)
from .errors import (
    ConfigError,
    DomainError,
    IntegrationDiverged,
    QviError,
    RangeError,
    UnsupportedPairError,
)
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
    project_simplex_euclidean,
)
from .problems import (
    CATALOG,
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
from .solvers import (
    GOLDEN_RATIO,
    Alg1Config,
    EtaSpec,
    SolverTrace,
    StepSizeState,
    StopReason,
    discrete_ergodic_average,
    solve_alg1,
    solve_graal_baseline,
    solve_relaxed_fbf,
    update_stepsize,
)

__version__ = "0.1.0"

__all__ = [
    "Alg1Config",
    "Ball",
    "Box",
    "BregmanGeometry",
    "CATALOG",
    "ConfigError",
    "DomainError",
    "EtaSpec",
    "FlowSystem",
    "GOLDEN_RATIO",
    "GeometryKind",
    "IntegrationDiverged",
    "IntegratorConfig",
    "MonotonicityClass",
    "NEGATIVE_ENTROPY",
    "QviError",
    "RangeError",
    "SQUARED_NORM",
    "Scheme",
    "Simplex",
    "SolverTrace",
    "StepSizeState",
    "StopReason",
    "Trajectory",
    "UnsupportedPairError",
    "VIProblem",
    "bregman_distance",
    "bregman_project",
    "build_problem",
    "c5_gap_series",
    "continuous_ergodic_average",
    "discrete_ergodic_average",
    "estimate_lipschitz_constant",
    "eval_operator",
    "example_5_1",
    "example_5_2",
    "example_5_3",
    "fbf_residual_series",
    "grad_phi",
    "grad_phi_star",
    "integrate_flow",
    "lyapunov_energy",
    "minty_gap_minimum",
    "natural_residual",
    "project_simplex_euclidean",
    "sample_feasible",
    "sampled_quasimonotonicity_check",
    "solve_alg1",
    "solve_graal_baseline",
    "solve_relaxed_fbf",
    "uniform_continuity_bound",
    "update_stepsize",
]
