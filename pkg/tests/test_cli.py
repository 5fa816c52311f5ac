import json
import subprocess
import sys

import pytest

from treeopt.cli import main
from treeopt.registry import (ConfigError, make_problem, problem_ids,
                              resolved_optimizer_config, run_optimizer)


def _run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "treeopt.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_list_shows_registries(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for pid in ("F1", "F23", "welded_beam", "pressure_vessel"):
        assert pid in out
    for oid in ("mcts_logistic", "mcts_hypersphere", "pso", "random"):
        assert oid in out


def test_eval_welded_beam_golden(capsys):
    code = main(["eval", "welded_beam",
                 "0.204508", "3.273933", "9.046498", "0.205730"])
    assert code == 0
    out = capsys.readouterr().out
    assert "cost      1.697960" in out
    assert "feasible  True" in out


def test_eval_benchmark(capsys):
    code = main(["eval", "F1"] + ["0"] * 30)
    assert code == 0
    assert "value     0.000000" in capsys.readouterr().out


def test_eval_stochastic_uses_injected_noise(capsys):
    code = main(["eval", "F7"] + ["0"] * 30 + ["--noise", "0.25"])
    assert code == 0
    assert "0.250000" in capsys.readouterr().out


def test_eval_wrong_arity_is_config_error(capsys):
    assert main(["eval", "F1", "1.0", "2.0"]) == 2


def test_unknown_problem_is_config_error():
    assert main(["eval", "F99", "0"]) == 2


def test_run_subcommand(tmp_path):
    spec = tmp_path / "exp.spec"
    spec.write_text("problems = F16\noptimizers = random\n"
                    "trials = 2\nbudget = 100\nseed = 4\n")
    out_dir = tmp_path / "results"
    code, stdout, _ = _run_cli("run", "--spec", str(spec), "--out", str(out_dir))
    assert code == 0
    assert "F16" in stdout
    rows = json.loads((out_dir / "summary.json").read_text())
    assert rows[0]["evals"] == 100


def test_run_missing_spec_file(tmp_path):
    code, _, stderr = _run_cli("run", "--spec", str(tmp_path / "nope.spec"))
    assert code == 2
    assert "configuration error" in stderr


def test_run_bad_optimizer_exits_2(tmp_path):
    spec = tmp_path / "exp.spec"
    spec.write_text("problems = F16\noptimizers = sa\nbudget = 50\n")
    code, _, stderr = _run_cli("run", "--spec", str(spec))
    assert code == 2
    assert "configuration error" in stderr


def test_registry_overrides():
    cfg = resolved_optimizer_config("mcts_logistic",
                                    {"tree_count": "10", "stages": "3",
                                     "retrain_period": "7", "b": "0.4"})
    assert cfg["global"]["tree_count"] == 10
    assert cfg["local"]["stages"] == 3
    assert cfg["surrogate"]["retrain_period"] == 7
    assert cfg["b"] == 0.4
    with pytest.raises(ConfigError):
        resolved_optimizer_config("mcts_logistic", {"swarm_size": "4"})
    with pytest.raises(ConfigError):
        run_optimizer("random", make_problem("F16"), 10, 0, {"x": "1"})


def test_registry_problem_overrides():
    objective = make_problem("F1", {"dim": "12"})
    assert objective.space.dim == 12
    with pytest.raises(ConfigError):
        make_problem("F1", {"bogus": "1"})
    with pytest.raises(ConfigError):
        make_problem("nonesuch")
    assert set(problem_ids()) >= {"F1", "F23", "welded_beam", "pressure_vessel"}


def test_registry_design_penalty_override():
    objective = make_problem("welded_beam", {"penalty": "100.0"})
    # this point violates only the minimum-thickness constraint by 0.025
    base = make_problem("welded_beam")
    x = [0.1, 8.0, 9.0, 1.0]
    assert base.evaluate(x) - objective.evaluate(x) == pytest.approx(0.025 * (1e6 - 100.0))
