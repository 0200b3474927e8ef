"""Experiment harness: configure the catalog problems, run the continuous and
discrete solvers, and emit result tables and plot data.

CSV schemas (comma separated, header row, LF line endings, ``.`` decimals):

* ``trajectory``: ``t,x1,...,xn,y1,...,yn``
* ``energy``:     ``t,V``
* ``trace``:      ``k,lambda,E_k,residual,dist_to_solution``
* ``table``:      ``case,solver,iterations,wall_time_seconds,final_residual,final_error``

Re-running any experiment with the same inputs produces bitwise-identical
CSVs, except for the wall-time column of the table.  Independent cases may
run in parallel; emission for a given path belongs to one run.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .dynamics import IntegratorConfig, FlowSystem, Trajectory, integrate_flow, lyapunov_energy
from .geometry import NEGATIVE_ENTROPY, SQUARED_NORM
from .problems import CATALOG, VIProblem, example_5_1, example_5_2, example_5_3, natural_residual
from .solvers import (
    GOLDEN_RATIO,
    Alg1Config,
    SolverTrace,
    solve_alg1,
    solve_graal_baseline,
)
from .svgplot import ChartSpec, Series, write_line_chart

__all__ = [
    "CASE_STARTS_5_1",
    "LAMBDAS_5_1",
    "CASE_PARAMS_5_2",
    "ALG1_SETTINGS_5_2",
    "SETTINGS_5_3",
    "ResultRow",
    "ResultTable",
    "ExperimentSpec",
    "Example51Result",
    "Example52Result",
    "Example53Result",
    "run_example_5_1",
    "run_example_5_2",
    "run_example_5_3",
    "emit_results",
    "reproduce_example_5_1",
    "reproduce_example_5_2",
    "reproduce_example_5_3",
    "reproduce_all",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "write_energy_csv",
    "read_energy_csv",
    "write_trace_csv",
    "read_trace_csv",
    "write_table_csv",
    "read_table_csv",
]

CASE_STARTS_5_1 = {
    "case1": np.array([-5.0, 4.0, 7.0]),
    "case2": np.array([-4.0, 3.0, 5.0]),
}
LAMBDAS_5_1 = (0.05, 0.1, 0.2)

CASE_PARAMS_5_2 = {"I": (2.0, 3.0), "II": (3.0, 5.0), "III": (4.0, 7.0), "IV": (5.0, 9.0)}

# Benchmark settings for the ball problem.
ALG1_SETTINGS_5_2 = dict(lambda1=0.15, mu=0.8, gamma=0.9, psi=GOLDEN_RATIO, tol=1e-5, max_iter=1000)

# Settings for the route-choice problem.  The initial step is a free choice
# here; 0.08 keeps the adaptive-step tail quiet for both variants while
# stopping well inside the iteration budget.
SETTINGS_5_3 = dict(lambda1=0.08, mu=0.5, gamma=0.8, psi=GOLDEN_RATIO, tol=1e-4, max_iter=800)


# ---------------------------------------------------------------------------
# result containers


@dataclass(frozen=True)
class ResultRow:
    case: str
    solver: str
    iterations: int
    wall_time_seconds: float
    final_residual: float
    final_error: float


@dataclass(frozen=True)
class ResultTable:
    rows: tuple[ResultRow, ...]


@dataclass(frozen=True)
class ExperimentSpec:
    """Destination and identification of one experiment's outputs."""

    name: str
    output_dir: Path
    problem: str = ""
    solver: str = ""
    table_filename: str = "table.csv"

    def __post_init__(self):
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if self.problem and self.problem not in CATALOG:
            raise ValueError(f"unknown problem {self.problem!r}")
        if self.solver and self.solver not in ("alg1", "relaxed_fbf", "graal"):
            raise ValueError(f"unknown solver {self.solver!r}")


@dataclass(frozen=True, eq=False)
class Example51Result:
    case: str
    lambdas: tuple[float, ...]
    trajectories: dict[float, Trajectory]
    energies: dict[float, np.ndarray]


@dataclass(frozen=True, eq=False)
class Example52Result:
    dim: int
    table: ResultTable
    traces: dict[tuple[str, str], SolverTrace]


@dataclass(frozen=True, eq=False)
class Example53Result:
    trace: SolverTrace
    flows: np.ndarray  # per-iteration feasible flows (projected iterates)
    residuals: np.ndarray  # per-iteration displacement norms


# ---------------------------------------------------------------------------
# runs


def run_example_5_1(
    case: str,
    lambdas: Sequence[float] = LAMBDAS_5_1,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> Example51Result:
    """Integrate the FBF flow for one starting case over several step sizes."""
    if case not in CASE_STARTS_5_1:
        raise ValueError(f"case must be one of {sorted(CASE_STARTS_5_1)}")
    if not lambdas:
        raise ValueError("lambdas must be nonempty")
    problem = example_5_1()
    x0 = CASE_STARTS_5_1[case]
    trajectories: dict[float, Trajectory] = {}
    energies: dict[float, np.ndarray] = {}
    for lam in lambdas:
        traj = integrate_flow(problem, FlowSystem.FBF, lam, x0, cfg)
        trajectories[lam] = traj
        energies[lam] = lyapunov_energy(traj, problem.known_solution)
    return Example51Result(case, tuple(lambdas), trajectories, energies)


def _run_one_52(problem: VIProblem, solver: str) -> tuple[SolverTrace, float]:
    x0 = problem.default_start
    t0 = time.perf_counter()
    if solver == "alg1":
        cfg = Alg1Config(geometry=SQUARED_NORM, **ALG1_SETTINGS_5_2)
        trace = solve_alg1(problem, cfg, x0, x0)
    elif solver == "graal":
        trace = solve_graal_baseline(
            problem,
            lam=ALG1_SETTINGS_5_2["lambda1"],
            psi=ALG1_SETTINGS_5_2["psi"],
            x0=x0,
            tol=ALG1_SETTINGS_5_2["tol"],
            max_iter=ALG1_SETTINGS_5_2["max_iter"],
        )
    else:
        raise ValueError(f"unknown solver {solver!r}; choose from alg1, graal")
    return trace, time.perf_counter() - t0


def run_example_5_2(
    case: str, dim: int = 10, solvers: Sequence[str] = ("alg1", "graal")
) -> Example52Result:
    """Benchmark the ball problem for one parameter case."""
    if case not in CASE_PARAMS_5_2:
        raise ValueError(f"case must be one of {sorted(CASE_PARAMS_5_2)}")
    if dim < 2:
        raise ValueError("dim must be at least 2")
    a, b = CASE_PARAMS_5_2[case]
    problem = example_5_2(a=a, b=b, dim=dim)
    rows = []
    traces: dict[tuple[str, str], SolverTrace] = {}
    for solver in solvers:
        trace, wall = _run_one_52(problem, solver)
        traces[(case, solver)] = trace
        final_lam = float(trace.lams[-1]) if len(trace) else ALG1_SETTINGS_5_2["lambda1"]
        rows.append(
            ResultRow(
                case=case,
                solver=solver,
                iterations=trace.iterations,
                wall_time_seconds=wall,
                final_residual=natural_residual(problem, SQUARED_NORM, trace.final_x, final_lam),
                final_error=float(np.linalg.norm(trace.final_x - problem.known_solution)),
            )
        )
    return Example52Result(dim=dim, table=ResultTable(tuple(rows)), traces=traces)


def run_example_5_3(with_extrapolation: bool = True) -> Example53Result:
    """Run the route-choice problem with the entropy geometry.

    ``with_extrapolation=False`` replaces the extrapolated point by the
    current iterate, leaving every other step unchanged.
    """
    problem = example_5_3()
    cfg = Alg1Config(geometry=NEGATIVE_ENTROPY, **SETTINGS_5_3)
    x0 = problem.default_start
    trace = solve_alg1(problem, cfg, x0, x0, extrapolation=with_extrapolation)
    return Example53Result(trace=trace, flows=np.array(trace.ys), residuals=np.array(trace.e_norms))


# ---------------------------------------------------------------------------
# CSV schemas


def _fmt_float(v: float) -> str:
    return repr(float(v))


def write_trajectory_csv(path: Path, traj: Trajectory) -> Path:
    n = traj.xs.shape[1]
    header = ["t"] + [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for t, x, y in zip(traj.times, traj.xs, traj.ys):
            w.writerow([_fmt_float(t)] + [_fmt_float(v) for v in x] + [_fmt_float(v) for v in y])
    return Path(path)


def read_trajectory_csv(path: Path) -> Trajectory:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    if header[0] != "t" or (len(header) - 1) % 2 != 0:
        raise ValueError(f"{path}: not a trajectory csv")
    n = (len(header) - 1) // 2
    expected = ["t"] + [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    if header != expected:
        raise ValueError(f"{path}: unexpected trajectory header {header}")
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    return Trajectory(times=data[:, 0], xs=data[:, 1 : n + 1], ys=data[:, n + 1 :], lam=float("nan"))


def write_energy_csv(path: Path, times, energies) -> Path:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "V"])
        for t, v in zip(times, energies):
            w.writerow([_fmt_float(t), _fmt_float(v)])
    return Path(path)


def read_energy_csv(path: Path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != ["t", "V"]:
        raise ValueError(f"{path}: unexpected energy header {rows[0]}")
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    return data[:, 0], data[:, 1]


_TRACE_HEADER = ["k", "lambda", "E_k", "residual", "dist_to_solution"]


def write_trace_csv(path: Path, trace: SolverTrace) -> Path:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_TRACE_HEADER)
        for j in range(len(trace)):
            dist = trace.dists[j] if trace.dists is not None else float("nan")
            w.writerow(
                [
                    int(trace.ks[j]),
                    _fmt_float(trace.lams[j]),
                    _fmt_float(trace.e_norms[j]),
                    _fmt_float(trace.residuals[j]),
                    _fmt_float(dist),
                ]
            )
    return Path(path)


def read_trace_csv(path: Path) -> dict[str, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != _TRACE_HEADER:
        raise ValueError(f"{path}: unexpected trace header {rows[0]}")
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    return {
        "k": data[:, 0].astype(int),
        "lambda": data[:, 1],
        "E_k": data[:, 2],
        "residual": data[:, 3],
        "dist_to_solution": data[:, 4],
    }


_TABLE_HEADER = ["case", "solver", "iterations", "wall_time_seconds", "final_residual", "final_error"]


def write_table_csv(path: Path, table: ResultTable) -> Path:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_TABLE_HEADER)
        for r in table.rows:
            w.writerow(
                [
                    r.case,
                    r.solver,
                    int(r.iterations),
                    _fmt_float(r.wall_time_seconds),
                    _fmt_float(r.final_residual),
                    _fmt_float(r.final_error),
                ]
            )
    return Path(path)


def read_table_csv(path: Path) -> ResultTable:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != _TABLE_HEADER:
        raise ValueError(f"{path}: unexpected table header {rows[0]}")
    out = []
    for row in rows[1:]:
        out.append(
            ResultRow(
                case=row[0],
                solver=row[1],
                iterations=int(row[2]),
                wall_time_seconds=float(row[3]),
                final_residual=float(row[4]),
                final_error=float(row[5]),
            )
        )
    return ResultTable(tuple(out))


# ---------------------------------------------------------------------------
# emission


def emit_results(
    table: ResultTable | None,
    charts: Sequence[ChartSpec],
    spec: ExperimentSpec,
) -> list[Path]:
    """Write the table (if any) and one SVG per chart into ``spec.output_dir``."""
    outdir = Path(spec.output_dir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        written = []
        if table is not None:
            written.append(write_table_csv(outdir / spec.table_filename, table))
        for chart in charts:
            written.append(write_line_chart(outdir, chart))
    except OSError as exc:
        raise OSError(f"failed writing results under {outdir}: {exc}") from exc
    return written


def reproduce_example_5_1(outdir: Path) -> list[Path]:
    """Flow trajectories and energy decay for both starting cases."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for case in ("case1", "case2"):
        res = run_example_5_1(case)
        energy_series = []
        for lam in res.lambdas:
            traj = res.trajectories[lam]
            tag = f"{case}_lam{lam:g}"
            written.append(write_trajectory_csv(outdir / f"trajectory_{tag}.csv", traj))
            written.append(write_energy_csv(outdir / f"energy_{tag}.csv", traj.times, res.energies[lam]))
            comp_series = tuple(
                Series(label=f"x{i + 1}", x=traj.times, y=traj.xs[:, i]) for i in range(3)
            )
            written.append(
                write_line_chart(
                    outdir,
                    ChartSpec(
                        filename=f"components_{tag}.svg",
                        title=f"Flow components, {case}, lambda={lam:g}",
                        xlabel="t",
                        ylabel="x_i(t)",
                        series=comp_series,
                    ),
                )
            )
            energy_series.append(Series(label=f"lambda={lam:g}", x=traj.times, y=res.energies[lam]))
        written.append(
            write_line_chart(
                outdir,
                ChartSpec(
                    filename=f"energy_{case}.svg",
                    title=f"Energy decay, {case}",
                    xlabel="t",
                    ylabel="V(t)",
                    series=tuple(energy_series),
                    log_y=True,
                ),
            )
        )
    return written


def reproduce_example_5_2(outdir: Path) -> list[Path]:
    """Benchmark table and residual plots for the four ball cases."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    all_rows: list[ResultRow] = []
    for case in ("I", "II", "III", "IV"):
        res = run_example_5_2(case)
        all_rows.extend(res.table.rows)
        series = []
        for (c, solver), trace in sorted(res.traces.items(), key=lambda kv: kv[0]):
            written.append(write_trace_csv(outdir / f"trace_case_{c}_{solver}.csv", trace))
            series.append(Series(label=solver, x=trace.ks.astype(float), y=trace.e_norms))
        written.append(
            write_line_chart(
                outdir,
                ChartSpec(
                    filename=f"residuals_case_{case}.svg",
                    title=f"Displacement per iteration, case {case}",
                    xlabel="k",
                    ylabel="E_k",
                    series=tuple(series),
                    log_y=True,
                ),
            )
        )
    written.append(write_table_csv(outdir / "table.csv", ResultTable(tuple(all_rows))))
    return written


def reproduce_example_5_3(outdir: Path) -> list[Path]:
    """Route flows and residual decay, with and without extrapolation."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    with_x = run_example_5_3(with_extrapolation=True)
    without = run_example_5_3(with_extrapolation=False)
    written.append(write_trace_csv(outdir / "trace.csv", with_x.trace))
    written.append(write_trace_csv(outdir / "trace_noextrap.csv", without.trace))
    ks = with_x.trace.ks.astype(float)
    flow_series = tuple(
        Series(label=f"path {i + 1}", x=ks, y=with_x.flows[:, i]) for i in range(3)
    )
    written.append(
        write_line_chart(
            outdir,
            ChartSpec(
                filename="flows.svg",
                title="Route flows per iteration",
                xlabel="k",
                ylabel="flow share",
                series=flow_series,
            ),
        )
    )
    resid_series = (
        Series(label="with extrapolation", x=ks, y=with_x.residuals),
        Series(
            label="without extrapolation",
            x=without.trace.ks.astype(float),
            y=without.residuals,
        ),
    )
    written.append(
        write_line_chart(
            outdir,
            ChartSpec(
                filename="residual.svg",
                title="Displacement per iteration",
                xlabel="k",
                ylabel="E_k",
                series=resid_series,
                log_y=True,
                y_floor=SETTINGS_5_3["tol"],
            ),
        )
    )
    return written


def reproduce_all(outdir: Path) -> list[Path]:
    """Run all three reproduction suites into one directory."""
    outdir = Path(outdir)
    written = []
    written += reproduce_example_5_1(outdir)
    written += reproduce_example_5_2(outdir)
    written += reproduce_example_5_3(outdir)
    return written
