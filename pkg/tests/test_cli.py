"""Command-line interface tests: commands, exit codes, config validation."""

import re

import numpy as np
import pytest

from qvi.cli import main
from qvi.config import parse_config
from qvi.errors import ConfigError

BASE_CONFIG = """\
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
tol = 1e-5
max_iter = 1000
geometry = sqnorm

[output]
dir = {outdir}
"""


def _write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


# ---------------------------------------------------------------------------
# reproduce


def test_reproduce_example_5_3_files(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["reproduce", "5.3", str(out)]) == 0
    for name in ("trace.csv", "flows.svg", "residual.svg"):
        assert (out / name).exists()
    assert str(out / "trace.csv") in capsys.readouterr().out


def test_reproduce_unknown_example_exits_2(tmp_path, capsys):
    assert main(["reproduce", "9.9", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "9.9" in err
    assert "5.1, 5.2, 5.3, all" in err


def test_reproduce_all_writes_every_suite(tmp_path):
    out = tmp_path / "all"
    assert main(["reproduce", "all", str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    expected = {
        "trajectory_case1_lam0.05.csv",
        "trajectory_case2_lam0.2.csv",
        "energy_case1_lam0.1.csv",
        "components_case1_lam0.2.svg",
        "energy_case1.svg",
        "energy_case2.svg",
        "table.csv",
        "trace_case_I_alg1.csv",
        "trace_case_IV_graal.csv",
        "residuals_case_I.svg",
        "trace.csv",
        "trace_noextrap.csv",
        "flows.svg",
        "residual.svg",
    }
    assert expected <= names


# ---------------------------------------------------------------------------
# solve


def test_solve_valid_config(tmp_path, capsys):
    out = tmp_path / "results"
    cfg = _write(tmp_path, BASE_CONFIG.format(outdir=out))
    assert main(["solve", str(cfg)]) == 0
    line = capsys.readouterr().out.strip().splitlines()[-1]
    assert re.fullmatch(r"tolerance iterations=\d+ residual=[0-9.eE+-]+ seed=0", line)
    assert (out / "trace.csv").exists()


def test_solve_rerun_overwrites_trace(tmp_path):
    out = tmp_path / "results"
    cfg = _write(tmp_path, BASE_CONFIG.format(outdir=out))
    assert main(["solve", str(cfg)]) == 0
    first = (out / "trace.csv").read_bytes()
    assert main(["solve", str(cfg)]) == 0
    assert (out / "trace.csv").read_bytes() == first


def test_solve_invalid_mu_cites_constraint_and_line(tmp_path, capsys):
    text = BASE_CONFIG.format(outdir=tmp_path / "o").replace("mu = 0.8", "mu = 1.5")
    cfg = _write(tmp_path, text)
    assert main(["solve", str(cfg)]) == 2
    err = capsys.readouterr().err
    assert "mu must be in (0,1)" in err
    assert re.search(r"line \d+", err)


def test_solve_unsupported_geometry_pair(tmp_path, capsys):
    text = BASE_CONFIG.format(outdir=tmp_path / "o").replace(
        "geometry = sqnorm", "geometry = entropy"
    )
    cfg = _write(tmp_path, text)
    assert main(["solve", str(cfg)]) == 2
    assert "unsupported geometry/set pair" in capsys.readouterr().err


def test_solve_entropy_on_simplex_is_accepted(tmp_path, capsys):
    text = """\
[problem]
name = example-5.3

[solver]
name = alg1
lambda1 = 0.08
mu = 0.5
gamma = 0.8
tol = 1e-4
max_iter = 800
geometry = entropy

[output]
dir = {outdir}
""".format(outdir=tmp_path / "o")
    cfg = _write(tmp_path, text)
    assert main(["solve", str(cfg)]) == 0
    assert "tolerance" in capsys.readouterr().out


def test_solve_unknown_key_reports_line(tmp_path, capsys):
    text = BASE_CONFIG.format(outdir=tmp_path / "o").replace(
        "max_iter = 1000", "max_iter = 1000\nwarp = 9"
    )
    cfg = _write(tmp_path, text)
    assert main(["solve", str(cfg)]) == 2
    err = capsys.readouterr().err
    assert "warp" in err and "line 16" in err


def test_solve_max_iter_exit_code(tmp_path, capsys):
    text = BASE_CONFIG.format(outdir=tmp_path / "o").replace("max_iter = 1000", "max_iter = 3")
    cfg = _write(tmp_path, text)
    assert main(["solve", str(cfg)]) == 3
    assert capsys.readouterr().out.startswith("max_iter")


def test_solve_divergence_exit_code(tmp_path, capsys):
    text = """\
[problem]
name = example-5.1

[solver]
name = relaxed_fbf
lambda1 = 1e30
gamma = 1.0
tol = 1e-5
max_iter = 50

[output]
dir = {outdir}
""".format(outdir=tmp_path / "o")
    cfg = _write(tmp_path, text)
    assert main(["solve", str(cfg)]) == 1
    assert capsys.readouterr().out.startswith("diverged")


def test_solve_missing_config_file(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "nope.ini")]) == 2
    assert "cannot read" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# config parsing details


def test_parse_config_defaults_and_params(tmp_path):
    cfg = parse_config(_write(tmp_path, BASE_CONFIG.format(outdir="out")))
    assert cfg.problem_name == "example-5.2"
    assert cfg.problem_dim == 10
    assert cfg.problem_params == {"a": 2.0, "b": 3.0}
    assert cfg.psi == pytest.approx((1 + np.sqrt(5)) / 2)
    assert cfg.eta_c == 0.001 and cfg.eta_p == 1.1
    assert cfg.scheme == "euler" and cfg.h == 1e-3 and cfg.T == 50.0


def test_parse_config_rejects_unknown_section(tmp_path):
    with pytest.raises(ConfigError, match="line 1"):
        parse_config(_write(tmp_path, "[warp]\nx = 1\n"))


def test_parse_config_rejects_duplicate_key(tmp_path):
    text = BASE_CONFIG.format(outdir="o").replace("tol = 1e-5", "tol = 1e-5\ntol = 1e-6")
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config(_write(tmp_path, text))


def test_parse_config_requires_problem_and_solver(tmp_path):
    with pytest.raises(ConfigError, match="problem.name"):
        parse_config(_write(tmp_path, "[solver]\nname = alg1\n"))
    with pytest.raises(ConfigError, match="solver.name"):
        parse_config(_write(tmp_path, "[problem]\nname = example-5.1\n"))


def test_parse_config_validates_numbers(tmp_path):
    text = BASE_CONFIG.format(outdir="o").replace("tol = 1e-5", "tol = banana")
    with pytest.raises(ConfigError, match="tol"):
        parse_config(_write(tmp_path, text))
    text = BASE_CONFIG.format(outdir="o").replace("gamma = 0.9", "gamma = 1.0")
    with pytest.raises(ConfigError, match="gamma"):
        parse_config(_write(tmp_path, text))


def test_solve_rejects_unknown_problem_parameter(tmp_path, capsys):
    text = BASE_CONFIG.format(outdir=tmp_path / "o").replace(
        "params.a = 2", "params.warp = 2"
    )
    assert main(["solve", str(_write(tmp_path, text))]) == 2
    assert "invalid parameters for example-5.2" in capsys.readouterr().err


def test_solve_rejects_infeasible_problem_parameters(tmp_path, capsys):
    # violates the constraint 0 < b/2 < a of the shell operator
    text = BASE_CONFIG.format(outdir=tmp_path / "o").replace("params.a = 2", "params.a = 1")
    assert main(["solve", str(_write(tmp_path, text))]) == 2
    err = capsys.readouterr().err
    assert "invalid parameters" in err and "b/2 < a" in err


def test_parse_config_fixed_dimension_mismatch(tmp_path, capsys):
    text = """\
[problem]
name = example-5.1
dim = 7

[solver]
name = alg1

[output]
dir = {outdir}
""".format(outdir=tmp_path / "o")
    assert main(["solve", str(_write(tmp_path, text))]) == 2
    assert "dimension" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# check


def test_check_geometry_passes(capsys):
    assert main(["check", "geometry", "--seed", "42"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out
    assert "seed=42" in out


def test_check_all_passes(capsys):
    assert main(["check", "all", "--seed", "7"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out


def test_check_unknown_suite_exits_2():
    with pytest.raises(SystemExit) as exc_info:
        main(["check", "bogus"])
    assert exc_info.value.code == 2


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc_info:
        main(["frobnicate"])
    assert exc_info.value.code == 2
