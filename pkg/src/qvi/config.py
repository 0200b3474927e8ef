"""INI-style run configuration with line-numbered validation errors.

The format is a plain sectioned key-value file::

    seed = 0

    [problem]
    name = example-5.2
    dim = 10
    params.a = 2
    params.b = 3

    [solver]
    name = alg1
    lambda1 = 0.15
    mu = 0.8
    gamma = 0.9
    psi = 1.618033988749895
    eta_c = 0.001
    eta_p = 1.1
    tol = 1e-5
    max_iter = 1000
    geometry = sqnorm

    [integrator]
    scheme = euler
    h = 1e-3
    T = 50

    [output]
    dir = out

``seed`` lives above the first section.  Unknown sections or keys are
rejected, and every constraint violation reports the 1-based line number of
the offending entry.  Comments start with ``#`` or ``;``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .geometry import Simplex
from .problems import CATALOG
from .solvers import GOLDEN_RATIO

__all__ = ["RunConfig", "parse_config"]

_SOLVERS = ("alg1", "relaxed_fbf", "graal")
_GEOMETRIES = ("sqnorm", "entropy")
_SCHEMES = ("euler", "rk4")

# section -> fixed keys; [problem] additionally takes params.* entries
_KNOWN_KEYS = {
    "": {"seed"},
    "problem": {"name", "dim"},
    "solver": {
        "name",
        "lambda1",
        "mu",
        "gamma",
        "psi",
        "eta_c",
        "eta_p",
        "tol",
        "max_iter",
        "geometry",
    },
    "integrator": {"scheme", "h", "T"},
    "output": {"dir"},
}


@dataclass(frozen=True)
class RunConfig:
    """Parsed and validated run configuration."""

    problem_name: str
    solver_name: str
    seed: int = 0
    problem_dim: int | None = None
    problem_params: dict = field(default_factory=dict)
    lambda1: float = 0.15
    mu: float = 0.8
    gamma: float = 0.9
    psi: float = GOLDEN_RATIO
    eta_c: float = 0.001
    eta_p: float = 1.1
    tol: float = 1e-5
    max_iter: int = 1000
    geometry: str = "sqnorm"
    scheme: str = "euler"
    h: float = 1e-3
    T: float = 50.0
    output_dir: str = "out"


def _read_entries(path: Path) -> dict[tuple[str, str], tuple[str, int]]:
    """Map (section, key) to (raw value, line number), rejecting unknowns."""
    entries: dict[tuple[str, str], tuple[str, int]] = {}
    section = ""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _KNOWN_KEYS or section == "":
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        known = _KNOWN_KEYS.get(section, set())
        if key not in known and not (section == "problem" and key.startswith("params.")):
            where = f"[{section}]" if section else "top level"
            raise ConfigError(f"unknown key {key!r} in {where}", lineno)
        if (section, key) in entries:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno)
        entries[(section, key)] = (value, lineno)
    return entries


def _get_float(entries, section, key, default):
    if (section, key) not in entries:
        return default, None
    raw, line = entries[(section, key)]
    try:
        return float(raw), line
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {raw!r}", line) from None


def _get_int(entries, section, key, default):
    if (section, key) not in entries:
        return default, None
    raw, line = entries[(section, key)]
    try:
        return int(raw), line
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {raw!r}", line) from None


def _get_str(entries, section, key, default):
    if (section, key) not in entries:
        return default, None
    raw, line = entries[(section, key)]
    return raw, line


def parse_config(path: Path) -> RunConfig:
    """Parse and validate a run configuration file."""
    entries = _read_entries(path)

    seed, line = _get_int(entries, "", "seed", 0)
    if seed < 0:
        raise ConfigError("seed must be nonnegative", line)

    name, line = _get_str(entries, "problem", "name", None)
    if name is None:
        raise ConfigError("missing required key problem.name")
    if name not in CATALOG:
        known = ", ".join(sorted(CATALOG))
        raise ConfigError(f"unknown problem {name!r}; available: {known}", line)

    dim, line = _get_int(entries, "problem", "dim", None)
    if dim is not None and dim < 1:
        raise ConfigError("dim must be a positive integer", line)

    params = {}
    for (section, key), (raw, line) in entries.items():
        if section == "problem" and key.startswith("params."):
            pname = key[len("params.") :]
            if not pname:
                raise ConfigError("empty parameter name", line)
            try:
                params[pname] = float(raw)
            except ValueError:
                raise ConfigError(f"{key} must be a number, got {raw!r}", line) from None

    solver, line = _get_str(entries, "solver", "name", None)
    if solver is None:
        raise ConfigError("missing required key solver.name")
    if solver not in _SOLVERS:
        raise ConfigError(f"solver.name must be one of {', '.join(_SOLVERS)}", line)

    lambda1, line = _get_float(entries, "solver", "lambda1", 0.15)
    if not lambda1 > 0.0:
        raise ConfigError("lambda1 must be positive", line)
    mu, line = _get_float(entries, "solver", "mu", 0.8)
    if not 0.0 < mu < 1.0:
        raise ConfigError("mu must be in (0,1)", line)
    gamma, line = _get_float(entries, "solver", "gamma", 0.9)
    if solver == "relaxed_fbf":
        if not 0.0 < gamma <= 1.0:
            raise ConfigError("gamma must be in (0,1] for relaxed_fbf", line)
    elif not 0.0 < gamma < 1.0:
        raise ConfigError("gamma must be in (0,1)", line)
    psi, line = _get_float(entries, "solver", "psi", GOLDEN_RATIO)
    if not psi > 1.0:
        raise ConfigError("psi must exceed 1", line)
    eta_c, line = _get_float(entries, "solver", "eta_c", 0.001)
    if eta_c < 0.0:
        raise ConfigError("eta_c must be nonnegative", line)
    eta_p, line = _get_float(entries, "solver", "eta_p", 1.1)
    if not eta_p > 1.0:
        raise ConfigError("eta_p must exceed 1 (summable perturbations)", line)
    tol, line = _get_float(entries, "solver", "tol", 1e-5)
    if not tol > 0.0:
        raise ConfigError("tol must be positive", line)
    max_iter, line = _get_int(entries, "solver", "max_iter", 1000)
    if max_iter < 1:
        raise ConfigError("max_iter must be a positive integer", line)
    geometry, geom_line = _get_str(entries, "solver", "geometry", "sqnorm")
    if geometry not in _GEOMETRIES:
        raise ConfigError(f"geometry must be one of {', '.join(_GEOMETRIES)}", geom_line)

    scheme, line = _get_str(entries, "integrator", "scheme", "euler")
    if scheme not in _SCHEMES:
        raise ConfigError(f"scheme must be one of {', '.join(_SCHEMES)}", line)
    h, line = _get_float(entries, "integrator", "h", 1e-3)
    if not h > 0.0:
        raise ConfigError("h must be positive", line)
    T, line = _get_float(entries, "integrator", "T", 50.0)
    if not T >= h:
        raise ConfigError("T must be at least h", line)

    output_dir, line = _get_str(entries, "output", "dir", "out")

    cfg = RunConfig(
        problem_name=name,
        solver_name=solver,
        seed=seed,
        problem_dim=dim,
        problem_params=params,
        lambda1=lambda1,
        mu=mu,
        gamma=gamma,
        psi=psi,
        eta_c=eta_c,
        eta_p=eta_p,
        tol=tol,
        max_iter=max_iter,
        geometry=geometry,
        scheme=scheme,
        h=h,
        T=T,
        output_dir=output_dir,
    )
    _validate_geometry_pairing(cfg, geom_line)
    return cfg


def _validate_geometry_pairing(cfg: RunConfig, geom_line: int | None) -> None:
    # Entropy projections exist in closed form only on the simplex.
    if cfg.geometry != "entropy":
        return
    problem = build_configured_problem(cfg)
    if not isinstance(problem.feasible_set, Simplex):
        raise ConfigError("unsupported geometry/set pair", geom_line)


def build_configured_problem(cfg: RunConfig):
    """Build the catalog problem named by the config, as a ConfigError on misuse."""
    from .problems import build_problem

    kwargs = dict(cfg.problem_params)
    if cfg.problem_dim is not None and cfg.problem_name == "example-5.2":
        kwargs["dim"] = cfg.problem_dim
    try:
        problem = build_problem(cfg.problem_name, **kwargs)
    except TypeError:
        known = ", ".join(sorted(kwargs))
        raise ConfigError(
            f"invalid parameters for {cfg.problem_name}: {known}"
        ) from None
    except ValueError as exc:
        raise ConfigError(f"invalid parameters for {cfg.problem_name}: {exc}") from None
    if cfg.problem_dim is not None and problem.dim != cfg.problem_dim:
        raise ConfigError(
            f"problem {cfg.problem_name} has fixed dimension {problem.dim}, "
            f"got dim = {cfg.problem_dim}"
        )
    return problem
