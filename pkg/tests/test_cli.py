import json
from pathlib import Path

import pytest

from ergoshield.cli import load_config, main
from ergoshield.errors import ConfigError

FAST = [
    "--set", "time.t_max=2.0", "--set", "time.dt=0.01",
    "--set", "environment.n_traj=2",
]


def run_cli(*args) -> int:
    return main(list(args))


# ---------------------------------------------------------------- config parsing


def test_defaults_resolve(tmp_path):
    cfg = load_config(None, [f"environment.seed=1"])
    assert cfg.raw["system"]["gamma0"] == 0.05
    assert cfg.raw["system"]["omega_cut"] == 5.0
    assert cfg.raw["time"]["dt"] == 0.005
    assert cfg.raw["environment"]["n0"] == 0.1
    assert cfg.raw["environment"]["omega_drive"] == pytest.approx(0.6283185307179586)
    assert not cfg.seed_drawn


def test_ini_and_json_configs_agree(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[system]\nn_qubits = 3\ng = 0.2\n[environment]\ntype = B\n")
    js = tmp_path / "run.json"
    js.write_text(json.dumps({"system": {"n_qubits": 3, "g": 0.2},
                              "environment": {"type": "B"}}))
    a = load_config(str(ini), ["environment.seed=4"])
    b = load_config(str(js), ["environment.seed=4"])
    assert a.raw == b.raw


def test_unknown_key_is_named(tmp_path):
    with pytest.raises(ConfigError) as err:
        load_config(None, ["system.bogus=1"])
    assert "system.bogus" in str(err.value)


def test_unknown_environment_type_exit_code(tmp_path, capsys):
    code = run_cli("simulate", "--set", "environment.type=C",
                   "--output-dir", str(tmp_path))
    assert code == 2
    assert "environment.type" in capsys.readouterr().err


def test_seed_drawn_when_missing():
    cfg = load_config(None, [])
    assert cfg.seed_drawn
    assert cfg.raw["environment"]["seed"] is not None


def test_representation_default_per_command():
    assert load_config(None, ["environment.seed=1"],
                       command="simulate").raw["system"]["representation"] == "reduced"
    assert load_config(None, ["environment.seed=1"],
                       command="table1").raw["system"]["representation"] == "full"
    forced = load_config(None, ["environment.seed=1",
                                "system.representation=reduced"],
                         command="table1")
    assert forced.raw["system"]["representation"] == "reduced"


# ---------------------------------------------------------------- simulate


def test_simulate_analytic_delta(tmp_path):
    code = run_cli("simulate", "--output-dir", str(tmp_path),
                   "--seed", "7", "--set", "system.n_qubits=2", *FAST)
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert round(summary["delta_used"], 4) == 0.4472
    assert summary["e_res"] > 0
    body = (tmp_path / "timeseries.csv").read_text().splitlines()
    assert body[0].startswith("# manifest=")
    assert body[1] == "t,ergotropy,energy,excitation,trace_distance"
    assert len(body) == 2 + 201
    manifests = list(tmp_path.glob("manifest-*.json"))
    assert len(manifests) == 1
    manifest = json.loads(manifests[0].read_text())
    assert manifest["config"]["system"]["gamma0"] == 0.05
    assert manifest["seed"] == 7


def test_simulate_without_pair_drops_column(tmp_path):
    code = run_cli("simulate", "--output-dir", str(tmp_path), "--seed", "3",
                   "--set", "metric.blp_pair=none", *FAST)
    assert code == 0
    header = (tmp_path / "timeseries.csv").read_text().splitlines()[1]
    assert "trace_distance" not in header
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["blp"] is None


def test_simulate_determinism_byte_identical(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    for d in (d1, d2):
        code = run_cli("simulate", "--output-dir", str(d), "--seed", "99",
                       "--set", "environment.type=A", *FAST)
        assert code == 0
    assert (d1 / "timeseries.csv").read_bytes() == (d2 / "timeseries.csv").read_bytes()
    assert (d1 / "summary.json").read_bytes() == (d2 / "summary.json").read_bytes()


# ---------------------------------------------------------------- other commands


def test_sweep_outputs_and_jobs_invariance(tmp_path):
    common = ["sweep", "--seed", "5", "--set", "sweep.resolution=2",
              "--set", "sweep.gamma_min=0.04", "--set", "sweep.gamma_max=0.08",
              *FAST]
    d1, d2 = tmp_path / "j1", tmp_path / "j2"
    assert run_cli(*common, "--output-dir", str(d1), "--jobs", "1") == 0
    assert run_cli(*common, "--output-dir", str(d2), "--jobs", "2") == 0
    assert (d1 / "survival.csv").read_bytes() == (d2 / "survival.csv").read_bytes()
    curve = (d1 / "analytic_curve.csv").read_text().splitlines()
    assert curve[1] == "gamma0,delta_star"


def test_scaling_outputs(tmp_path):
    code = run_cli("scaling", "--output-dir", str(tmp_path), "--seed", "5",
                   "--set", "scaling.n_list=1,2",
                   "--set", "scaling.coarse_resolution=3",
                   "--set", "system.representation=reduced", *FAST)
    assert code == 0
    fit = json.loads((tmp_path / "fit.json").read_text())
    assert "beta" in fit and "r2" in fit and "stderr" in fit
    lines = (tmp_path / "scaling.csv").read_text().splitlines()
    assert lines[1] == "n,delta_opt,e_res_opt,boundary_flag"
    assert len(lines) == 4


def test_advantage_outputs(tmp_path):
    code = run_cli("advantage", "--output-dir", str(tmp_path), "--seed", "5",
                   "--set", "advantage.n_list=1,2",
                   "--set", "system.representation=reduced", *FAST)
    assert code == 0
    lines = (tmp_path / "advantage.csv").read_text().splitlines()
    assert lines[1] == "n,e_n,a_n"
    first = lines[2].split(",")
    assert float(first[2]) == pytest.approx(1.0)  # A(1) = 1 by construction


def test_rwa_outputs(tmp_path):
    code = run_cli("rwa", "--output-dir", str(tmp_path), "--seed", "5",
                   "--set", "rwa.n_max_scan=5")
    assert code == 0
    summary = json.loads((tmp_path / "rwa_summary.json").read_text())
    assert summary["n_max"] == 1
    lines = (tmp_path / "rwa.csv").read_text().splitlines()
    assert lines[1] == "n,ratio,usc_flag"
    assert len(lines) == 7


def test_table1_outputs(tmp_path):
    code = run_cli("table1", "--output-dir", str(tmp_path), "--seed", "5",
                   "--set", "table1.n_list=1,2",
                   "--set", "system.representation=reduced", *FAST)
    assert code == 0
    lines = (tmp_path / "table1.csv").read_text().splitlines()
    assert lines[1].startswith("n,delta_star,envA_eres_unfiltered")
    assert len(lines) == 4
    first = lines[2].split(",")
    assert round(float(first[1]), 4) == 0.3162


def test_outputs_confined_to_output_dir(tmp_path, monkeypatch):
    workdir = tmp_path / "cwd"
    outdir = tmp_path / "out"
    workdir.mkdir()
    monkeypatch.chdir(workdir)
    code = run_cli("simulate", "--output-dir", str(outdir), "--seed", "1", *FAST)
    assert code == 0
    assert list(workdir.iterdir()) == []


def test_env_var_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("ERGOSHIELD_OUTPUT_DIR", str(tmp_path / "envout"))
    code = run_cli("simulate", "--seed", "1", *FAST)
    assert code == 0
    assert (tmp_path / "envout" / "summary.json").exists()


def test_numerical_failure_exit_code(tmp_path, capsys):
    # a decay rate far beyond the RK4 stability limit breaks positivity
    code = run_cli("simulate", "--output-dir", str(tmp_path), "--seed", "1",
                   "--set", "system.n_qubits=1", "--set", "system.gamma0=560")
    assert code == 3
    err = capsys.readouterr().err
    assert "step" in err and "positivity" in err
