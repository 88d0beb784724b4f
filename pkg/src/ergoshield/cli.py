"""Command-line front end: configuration parsing, command dispatch,
deterministic run manifests and CSV/JSON writing.

Configuration is flat sectioned key=value text (INI style) or the equivalent
JSON object.  Omitted keys resolve to the standard defaults; the resolved
values appear verbatim in the run manifest.  Every output file carries a
``# manifest=<id>`` reference line, and all non-manifest outputs are byte
deterministic for a fixed configuration and seed.

Exit codes: 0 success, 2 configuration error (message names the offending
key), 3 numerical failure (message carries the step index and the violated
invariant).
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__, analysis
from .dynamics import CheckPolicy, TimeGrid, run_simulation
from .errors import ConfigError, ErgoshieldError, NumericalFailure
from .metrics import collective_advantage
from .model import EnvA, EnvB, EnvNone, SystemSpec, delta_star

COMMANDS = ("simulate", "sweep", "scaling", "advantage", "rwa", "table1")

# commands that reproduce the published protocol run the battery+cavity
# system unless the user pins a representation explicitly
_FULL_CAVITY_COMMANDS = ("table1", "advantage", "scaling")

_DEFAULTS: dict[str, dict[str, object]] = {
    "system": {
        "n_qubits": 2, "omega_b": 1.0, "g": 0.1, "gamma0": 0.05,
        "kappa": None, "eta": None, "omega_cut": 5.0, "n_cav": 6,
        "representation": "reduced",
    },
    "environment": {
        "type": "none", "lambda": 0.05, "delta_amp": 0.1, "n_traj": 200,
        "seed": None, "n0": 0.1, "omega_drive": math.pi / 5.0,
        "gamma_phi": 0.02,
    },
    "filter": {"delta": "analytic"},
    "time": {"t_max": 20.0, "dt": 0.005},
    "metric": {"e_res_mode": "integrated", "blp_pair": "superposition"},
    "output": {"dir": None, "formats": "csv,json"},
    "sweep": {
        "delta_min": 0.0, "delta_max": None, "gamma_min": 0.01,
        "gamma_max": 0.1, "resolution": 8,
    },
    "scaling": {"n_list": "1,2,3,4", "coarse_resolution": 9},
    "advantage": {"n_list": "1,2,3,4"},
    "rwa": {"n_max_scan": 100, "threshold": 0.1},
    "table1": {"n_list": "1,2,3,4"},
}

_FLOAT_KEYS = {
    ("system", "omega_b"), ("system", "g"), ("system", "gamma0"),
    ("system", "kappa"), ("system", "eta"), ("system", "omega_cut"),
    ("environment", "lambda"), ("environment", "delta_amp"),
    ("environment", "n0"), ("environment", "omega_drive"),
    ("environment", "gamma_phi"), ("time", "t_max"), ("time", "dt"),
    ("sweep", "delta_min"), ("sweep", "delta_max"), ("sweep", "gamma_min"),
    ("sweep", "gamma_max"), ("rwa", "threshold"),
}
_INT_KEYS = {
    ("system", "n_qubits"), ("system", "n_cav"), ("environment", "n_traj"),
    ("environment", "seed"), ("sweep", "resolution"),
    ("scaling", "coarse_resolution"), ("rwa", "n_max_scan"),
}


@dataclass
class ResolvedConfig:
    raw: dict[str, dict[str, object]]
    explicit: set[tuple[str, str]]
    seed_drawn: bool

    def get(self, section: str, key: str):
        return self.raw[section][key]


def _coerce(section: str, key: str, value):
    if value is None or not isinstance(value, str):
        return value
    text = value.strip()
    if (section, key) in _INT_KEYS:
        try:
            return int(text)
        except ValueError as exc:
            raise ConfigError(f"{section}.{key}", f"expected integer, got {text!r}") from exc
    if (section, key) in _FLOAT_KEYS:
        try:
            return float(text)
        except ValueError as exc:
            raise ConfigError(f"{section}.{key}", f"expected number, got {text!r}") from exc
    if section == "filter" and key == "delta":
        if text in ("analytic", "off"):
            return text
        try:
            return float(text)
        except ValueError as exc:
            raise ConfigError("filter.delta",
                              f"expected number, 'analytic' or 'off', got {text!r}") from exc
    return text


def load_config(path: str | None, overrides: list[str] | None = None,
                command: str = "simulate") -> ResolvedConfig:
    """Merge file values and overrides onto the defaults."""
    raw = {sec: dict(vals) for sec, vals in _DEFAULTS.items()}
    explicit: set[tuple[str, str]] = set()

    def put(section: str, key: str, value) -> None:
        if section not in raw:
            raise ConfigError(section, "unknown configuration section")
        if key not in raw[section]:
            raise ConfigError(f"{section}.{key}", "unknown configuration key")
        raw[section][key] = _coerce(section, key, value)
        explicit.add((section, key))

    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError("config", f"file not found: {path}")
        text = p.read_text()
        if p.suffix.lower() == ".json" or text.lstrip().startswith("{"):
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError("config", f"invalid JSON: {exc}") from exc
            for section, values in data.items():
                if not isinstance(values, dict):
                    raise ConfigError(section, "sections must map keys to values")
                for key, value in values.items():
                    put(section, key, value)
        else:
            parser = configparser.ConfigParser()
            try:
                parser.read_string(text)
            except configparser.Error as exc:
                raise ConfigError("config", f"invalid INI: {exc}") from exc
            for section in parser.sections():
                for key, value in parser.items(section):
                    put(section, key, value)

    for item in overrides or []:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError("override", f"expected section.key=value, got {item!r}")
        target, value = item.split("=", 1)
        section, key = target.split(".", 1)
        put(section.strip(), key.strip(), value)

    if (raw["environment"]["type"] not in ("A", "B", "none")):
        raise ConfigError("environment.type",
                          f"unknown environment type {raw['environment']['type']!r}")
    if raw["metric"]["e_res_mode"] not in ("integrated", "final", "time-averaged"):
        raise ConfigError("metric.e_res_mode",
                          f"unknown mode {raw['metric']['e_res_mode']!r}")
    if raw["metric"]["blp_pair"] not in ("superposition", "none"):
        raise ConfigError("metric.blp_pair",
                          f"unknown pair choice {raw['metric']['blp_pair']!r}")
    if raw["system"]["representation"] not in ("reduced", "full"):
        raise ConfigError("system.representation",
                          f"unknown representation {raw['system']['representation']!r}")

    if (command in _FULL_CAVITY_COMMANDS
            and ("system", "representation") not in explicit):
        raw["system"]["representation"] = "full"

    seed_drawn = False
    if raw["environment"]["seed"] is None:
        raw["environment"]["seed"] = int(np.random.SeedSequence().entropy
                                         & ((1 << 63) - 1))
        seed_drawn = True
    return ResolvedConfig(raw=raw, explicit=explicit, seed_drawn=seed_drawn)


# --------------------------------------------------------------------------
# pieces assembled from the configuration


def build_system(cfg: ResolvedConfig, n_qubits: int | None = None,
                 delta: float = 0.0) -> SystemSpec:
    sysc = cfg.raw["system"]
    return SystemSpec(
        n_qubits=int(n_qubits if n_qubits is not None else sysc["n_qubits"]),
        omega_b=float(sysc["omega_b"]),
        delta=float(delta),
        g=float(sysc["g"]),
        gamma0=float(sysc["gamma0"]),
        kappa=None if sysc["kappa"] is None else float(sysc["kappa"]),
        eta=None if sysc["eta"] is None else float(sysc["eta"]),
        omega_cut=float(sysc["omega_cut"]),
        n_cav=int(sysc["n_cav"]),
        representation=str(sysc["representation"]),
    )


def build_environment(cfg: ResolvedConfig, kind: str | None = None):
    env = cfg.raw["environment"]
    kind = kind if kind is not None else str(env["type"])
    if kind == "none":
        return EnvNone()
    if kind == "A":
        return EnvA(lambda_switch=float(env["lambda"]),
                    delta_amp=float(env["delta_amp"]),
                    n_traj=int(env["n_traj"]), seed=int(env["seed"]))
    if kind == "B":
        return EnvB(n0=float(env["n0"]),
                    omega_drive=float(env["omega_drive"]),
                    gamma_phi=float(env["gamma_phi"]))
    raise ConfigError("environment.type", f"unknown environment type {kind!r}")


def build_grid(cfg: ResolvedConfig) -> TimeGrid:
    return TimeGrid(0.0, float(cfg.raw["time"]["t_max"]),
                    float(cfg.raw["time"]["dt"]))


def resolve_filter(cfg: ResolvedConfig, spec: SystemSpec) -> tuple[bool, float]:
    """(filter_on, delta_used) from the filter.delta setting."""
    choice = cfg.raw["filter"]["delta"]
    if choice == "off":
        return False, 0.0
    if choice == "analytic":
        return True, delta_star(spec.n_qubits, spec.g, spec.gamma0)
    return True, float(choice)


def output_dir(cfg: ResolvedConfig, cli_value: str | None) -> Path:
    target = cli_value or cfg.raw["output"]["dir"] \
        or os.environ.get("ERGOSHIELD_OUTPUT_DIR") or "."
    out = Path(target)
    out.mkdir(parents=True, exist_ok=True)
    return out


# --------------------------------------------------------------------------
# deterministic writers


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(path: Path, columns: list[str], rows: list[tuple],
              manifest_id: str) -> None:
    lines = [f"# manifest={manifest_id}", ",".join(columns)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path: Path, payload: dict, manifest_id: str) -> None:
    payload = {"manifest": manifest_id, **payload}
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def make_manifest(command: str, cfg: ResolvedConfig) -> tuple[str, dict]:
    snapshot = json.dumps({"command": command, "config": cfg.raw},
                          sort_keys=True, default=str)
    manifest_id = hashlib.sha256(snapshot.encode()).hexdigest()[:16]
    policy = CheckPolicy()
    manifest = {
        "manifest_id": manifest_id,
        "command": command,
        "config": cfg.raw,
        "seed": cfg.raw["environment"]["seed"],
        "seed_drawn": cfg.seed_drawn,
        "version": __version__,
        "invariant_checks": {
            "trace_tol": policy.trace_tol,
            "herm_tol": policy.herm_tol,
            "eig_floor": policy.eig_floor,
            "stride": policy.stride,
        },
    }
    return manifest_id, manifest


# --------------------------------------------------------------------------
# commands


def cmd_simulate(cfg: ResolvedConfig, outdir: Path, mid: str,
                 jobs: int) -> None:
    spec = build_system(cfg)
    filter_on, delta_used = resolve_filter(cfg, spec)
    spec = replace(spec, delta=delta_used)
    env = build_environment(cfg)
    grid = build_grid(cfg)
    mode = str(cfg.raw["metric"]["e_res_mode"])
    pair = str(cfg.raw["metric"]["blp_pair"])
    result = run_simulation(spec, env, filter_on, grid, e_res_mode=mode,
                            blp_pair=pair)
    columns = ["t", "ergotropy", "energy", "excitation"]
    series = [result.times, result.ergotropy_series, result.energy_series,
              result.population_series]
    if result.trace_distance_series is not None:
        columns.append("trace_distance")
        series.append(result.trace_distance_series)
    rows = list(zip(*series))
    write_csv(outdir / "timeseries.csv", columns, rows, mid)
    write_json(outdir / "summary.json", {
        "e_res": result.e_res,
        "blp": result.blp,
        "delta_used": delta_used,
        "filter_on": filter_on,
        "e_res_mode": mode,
        "blp_pair": pair,
    }, mid)


def cmd_sweep(cfg: ResolvedConfig, outdir: Path, mid: str, jobs: int) -> None:
    spec = build_system(cfg)
    env = build_environment(cfg)
    grid = build_grid(cfg)
    sw = cfg.raw["sweep"]
    delta_max = sw["delta_max"]
    if delta_max is None:
        delta_max = 3.0 * delta_star(spec.n_qubits, spec.g, spec.gamma0)
    out = analysis.survival_map(
        spec, env,
        delta_range=(float(sw["delta_min"]), float(delta_max)),
        gamma_range=(float(sw["gamma_min"]), float(sw["gamma_max"])),
        resolution=int(sw["resolution"]), grid=grid,
        e_res_mode=str(cfg.raw["metric"]["e_res_mode"]), jobs=jobs)
    rows = [(d, g0, out.e_res[i, j])
            for i, g0 in enumerate(out.gamma_axis)
            for j, d in enumerate(out.delta_axis)]
    write_csv(outdir / "survival.csv", ["delta", "gamma0", "e_res"], rows, mid)
    curve = list(zip(out.gamma_axis, out.analytic_curve))
    write_csv(outdir / "analytic_curve.csv", ["gamma0", "delta_star"],
              curve, mid)


def cmd_scaling(cfg: ResolvedConfig, outdir: Path, mid: str,
                jobs: int) -> None:
    spec = build_system(cfg)
    env = build_environment(cfg)
    grid = build_grid(cfg)
    n_list = [int(x) for x in str(cfg.raw["scaling"]["n_list"]).split(",")]
    study = analysis.scaling_study(
        env, n_list, spec, grid=grid,
        coarse_resolution=int(cfg.raw["scaling"]["coarse_resolution"]),
        e_res_mode=str(cfg.raw["metric"]["e_res_mode"]))
    write_csv(outdir / "scaling.csv",
              ["n", "delta_opt", "e_res_opt", "boundary_flag"],
              list(study.rows), mid)
    write_json(outdir / "fit.json", {
        "beta": study.fit.beta,
        "stderr": study.fit.beta_stderr,
        "r2": study.fit.r_squared,
        "log_intercept": study.fit.log_intercept,
        "analytic_beta": study.analytic_beta,
    }, mid)


def cmd_advantage(cfg: ResolvedConfig, outdir: Path, mid: str,
                  jobs: int) -> None:
    base = build_system(cfg)
    env = build_environment(cfg)
    grid = build_grid(cfg)
    mode = str(cfg.raw["metric"]["e_res_mode"])
    n_list = [int(x) for x in str(cfg.raw["advantage"]["n_list"]).split(",")]
    e_values = {}
    for n in n_list:
        ds = delta_star(n, base.g, base.gamma0)
        spec = replace(base, n_qubits=n, delta=ds)
        res = run_simulation(spec, env, True, grid, e_res_mode=mode,
                             blp_pair="none")
        e_values[n] = res.e_res
    if 1 not in e_values:
        spec = replace(base, n_qubits=1, delta=delta_star(1, base.g, base.gamma0))
        e_values[1] = run_simulation(spec, env, True, grid, e_res_mode=mode,
                                     blp_pair="none").e_res
    rows = [(n, e_values[n], collective_advantage(e_values[n], e_values[1], n))
            for n in n_list]
    write_csv(outdir / "advantage.csv", ["n", "e_n", "a_n"], rows, mid)


def cmd_rwa(cfg: ResolvedConfig, outdir: Path, mid: str, jobs: int) -> None:
    spec = build_system(cfg)
    rw = cfg.raw["rwa"]
    report = analysis.rwa_report(spec.g, spec.omega_b,
                                 n_max_scan=int(rw["n_max_scan"]),
                                 threshold=float(rw["threshold"]))
    write_csv(outdir / "rwa.csv", ["n", "ratio", "usc_flag"],
              list(report.rows), mid)
    write_json(outdir / "rwa_summary.json", {
        "n_max": report.n_max,
        "threshold": report.threshold,
        "g": spec.g,
        "omega_b": spec.omega_b,
    }, mid)


def cmd_table1(cfg: ResolvedConfig, outdir: Path, mid: str,
               jobs: int) -> None:
    spec = build_system(cfg)
    grid = build_grid(cfg)
    n_list = [int(x) for x in str(cfg.raw["table1"]["n_list"]).split(",")]
    envs = {"A": build_environment(cfg, "A"), "B": build_environment(cfg, "B")}
    rows = analysis.table1_harness(spec, envs, n_list=n_list, grid=grid,
                                   e_res_mode=str(cfg.raw["metric"]["e_res_mode"]))
    columns = ["n", "delta_star"]
    for name in ("A", "B"):
        columns += [f"env{name}_eres_unfiltered", f"env{name}_eres_filtered",
                    f"env{name}_improvement", f"env{name}_blp_unfiltered",
                    f"env{name}_blp_filtered"]
    table = []
    for row in rows:
        line = [row.n, row.delta_star]
        for name in ("A", "B"):
            c = row.columns[name]
            line += [c.e_res_unfiltered, c.e_res_filtered, c.improvement,
                     c.blp_unfiltered, c.blp_filtered]
        table.append(tuple(line))
    write_csv(outdir / "table1.csv", columns, table, mid)


_DISPATCH = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "scaling": cmd_scaling,
    "advantage": cmd_advantage,
    "rwa": cmd_rwa,
    "table1": cmd_table1,
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ergoshield",
        description="Collective open quantum battery simulator")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="INI or JSON configuration file")
    parser.add_argument("--set", dest="overrides", action="append",
                        default=[], metavar="SECTION.KEY=VALUE",
                        help="override one configuration key")
    parser.add_argument("--seed", type=int, help="environment.seed override")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker cap for sweep cells")
    parser.add_argument("--output-dir", help="output directory "
                        "(also output.dir or ERGOSHIELD_OUTPUT_DIR)")
    args = parser.parse_args(argv)

    try:
        overrides = list(args.overrides)
        if args.seed is not None:
            overrides.append(f"environment.seed={args.seed}")
        cfg = load_config(args.config, overrides, command=args.command)
        outdir = output_dir(cfg, args.output_dir)
        mid, manifest = make_manifest(args.command, cfg)
        if cfg.seed_drawn:
            print(f"note: no seed configured; drew {cfg.raw['environment']['seed']}"
                  " (recorded in the manifest)", file=sys.stderr)
        started = time.perf_counter()
        _DISPATCH[args.command](cfg, outdir, mid, max(1, args.jobs))
        manifest["wall_time_s"] = time.perf_counter() - started
        manifest["invariant_checks"]["status"] = "passed"
        with open(outdir / f"manifest-{mid}.json", "w", newline="\n") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ErgoshieldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
