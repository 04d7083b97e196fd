"""Command-line interface: one subcommand per experiment family.

Every run is driven by a flat JSON config (exact field names, unknown
keys rejected) and writes CSV/JSON outputs atomically.  The first line of
every output file binds the results to the configuration:

    # qkr-detector v<version> config-sha=<sha256 of canonical config>

Numeric fields are written with 17 significant digits so doubles
round-trip exactly and identical configs produce byte-identical files.

Exit codes: 0 success, 2 config error, 3 fit non-convergence (partial
output is still written).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .channel import BlochVector, continuous_solution, map_trajectory
from .coupled import evolve, fidelity_series, husimi, wd_series
from .fitting import (NonDecayingSeriesError, fit_damped_sine, fit_exp_decay,
                      residual_level, sweep)
from .rotator import lyapunov
from .state import TWO_PI, SimParams

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FIT = 3

PHYSICS_KEYS = {"K", "epsilon", "epsilon_c", "delta", "hbar", "n_levels",
                "t_max", "qubit_init", "detector_init"}

ALLOWED_KEYS = {
    "evolve": PHYSICS_KEYS,
    "sweep": PHYSICS_KEYS | {"vary", "values"},
    "husimi": PHYSICS_KEYS | {"time", "grid_theta", "grid_p", "component",
                              "mode"},
    "wd": PHYSICS_KEYS | {"box_side", "box_center", "grid_theta", "grid_p",
                          "mode"},
    "lyapunov": {"K_eff", "n_orbits", "n_steps", "seed"},
    "channel": {"epsilon", "delta", "t_max", "bloch_init", "kind"},
    "fidelity": PHYSICS_KEYS - {"qubit_init"},
    "fit": {"input", "kind", "column", "freq_hint", "t_lo", "t_hi"},
}

TRAJECTORY_HEADER = ["t", "re_rho01", "im_rho01", "abs_rho01", "rho00",
                     "rho11", "p2", "purity"]


class ConfigError(ValueError):
    pass


def _fmt(x) -> str:
    if isinstance(x, str):
        if any(ch in x for ch in ",\"\n"):
            return '"' + x.replace('"', '""') + '"'
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _config_sha(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _header_line(sha: str) -> str:
    return f"# qkr-detector v{__version__} config-sha={sha}"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_csv(path: str, sha: str, columns: list[str],
              rows) -> None:
    lines = [_header_line(sha), ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_json(path: str, sha: str, payload: dict) -> None:
    body = dict(payload)
    body["_meta"] = {"tool": f"qkr-detector v{__version__}",
                     "config_sha": sha}
    _atomic_write(path, json.dumps(body, sort_keys=True, indent=2) + "\n")


def load_config(path: str, command: str) -> dict:
    try:
        with open(path) as handle:
            config = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError("config must be a flat JSON object")
    allowed = ALLOWED_KEYS[command]
    for key in config:
        if key not in allowed:
            raise ConfigError(f"unknown config key {key!r} for {command!r}")
    return config


def _require(config: dict, key: str):
    if key not in config:
        raise ConfigError(f"missing config key {key!r}")
    return config[key]


def parse_sim_params(config: dict) -> SimParams:
    n_levels = int(_require(config, "n_levels"))
    hbar = config.get("hbar")
    if hbar is None:
        hbar = TWO_PI / n_levels
    if "epsilon_c" in config and "epsilon" in config:
        raise ConfigError("give either epsilon or epsilon_c, not both")
    if "epsilon_c" in config:
        epsilon_c = float(config["epsilon_c"])
    elif "epsilon" in config:
        epsilon_c = float(config["epsilon"]) * hbar
    else:
        raise ConfigError("missing config key 'epsilon' or 'epsilon_c'")
    try:
        return SimParams(K=float(_require(config, "K")),
                         epsilon_c=epsilon_c,
                         delta=float(_require(config, "delta")),
                         hbar=float(hbar),
                         n_levels=n_levels,
                         t_max=int(_require(config, "t_max")))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_qubit_init(config: dict) -> tuple[complex, complex]:
    raw = _require(config, "qubit_init")
    if not (isinstance(raw, list) and len(raw) == 4):
        raise ConfigError("qubit_init must be [re_alpha, im_alpha, "
                          "re_beta, im_beta]")
    alpha = complex(raw[0], raw[1])
    beta = complex(raw[2], raw[3])
    norm = np.hypot(abs(alpha), abs(beta))
    if abs(norm - 1.0) > 1e-6:
        raise ConfigError(f"qubit_init norm {norm!r} too far from 1")
    if norm != 1.0:
        print(json.dumps({"warning": "qubit_init renormalized",
                          "norm": norm}), file=sys.stderr)
        alpha, beta = alpha / norm, beta / norm
    return alpha, beta


def parse_detector_init(config: dict) -> tuple[float, float]:
    raw = config.get("detector_init", [np.pi, 0.0])
    if not (isinstance(raw, list) and len(raw) == 2):
        raise ConfigError("detector_init must be [theta0, p0]")
    return float(raw[0]), float(raw[1])


def cmd_evolve(config: dict, out: str, sha: str, threads: int) -> int:
    params = parse_sim_params(config)
    traj = evolve(params, parse_qubit_init(config),
                  parse_detector_init(config))
    rows = [(int(t), r01.real, r01.imag, abs(r01), 1.0 - r11, r11, p2, pur)
            for t, r01, r11, p2, pur in zip(traj.t, traj.rho01, traj.rho11,
                                            traj.p2, traj.purity)]
    write_csv(out, sha, TRAJECTORY_HEADER, rows)
    return EXIT_OK


def cmd_sweep(config: dict, out: str, sha: str, threads: int) -> int:
    params = parse_sim_params(config)
    vary = str(_require(config, "vary"))
    values = [float(v) for v in _require(config, "values")]
    if not values:
        raise ConfigError("values must be non-empty")
    rows = sweep(params, vary, values, parse_qubit_init(config),
                 parse_detector_init(config), workers=threads)
    write_csv(out, sha, ["value", "gamma1", "gamma2", "flag"],
              [(r.value, r.gamma1, r.gamma2, r.flag) for r in rows])
    return EXIT_FIT if any(r.flag for r in rows) else EXIT_OK


def _state_at(params: SimParams, qubit_init, detector_init, time: int):
    from .coupled import iterate_states
    for t, state in iterate_states(params, qubit_init, detector_init):
        if t == time:
            return state
    raise ConfigError(f"time {time} beyond t_max {params.t_max}")


def cmd_husimi(config: dict, out: str, sha: str, threads: int) -> int:
    from .coupled import conditional_component
    from .rotator import init_gaussian, rotator_step
    params = parse_sim_params(config)
    time = int(config.get("time", params.t_max))
    grid = (int(config.get("grid_theta", 128)), int(config.get("grid_p", 128)))
    component = str(config.get("component", "up"))
    mode = str(config.get("mode", "conditional"))
    spin = {"up": 0, "down": 1}.get(component)
    if spin is None:
        raise ConfigError(f"component must be 'up' or 'down', got {component!r}")
    detector_init = parse_detector_init(config)
    if mode == "conditional":
        state = _state_at(params, parse_qubit_init(config), detector_init,
                          time)
        detector = conditional_component(state, spin)
    elif mode == "eigenstate":
        k_eff = params.K + (params.epsilon_c if spin == 0 else -params.epsilon_c)
        detector = init_gaussian(detector_init[0], detector_init[1], params)
        for _ in range(time):
            detector = rotator_step(detector, k_eff, params)
    else:
        raise ConfigError(f"mode must be 'conditional' or 'eigenstate', "
                          f"got {mode!r}")
    grid_values = husimi(detector, grid, params)
    # Row-major: one row per momentum cell, p increasing with row index.
    rows = grid_values.values.T
    lines = [_header_line(sha)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    _atomic_write(out, "\n".join(lines) + "\n")
    write_json(out + ".meta.json", sha, {
        "m_theta": grid_values.m_theta, "m_p": grid_values.m_p,
        "d_theta": grid_values.d_theta, "d_p": grid_values.d_p,
        "time": time, "component": component, "mode": mode,
        "layout": "rows are momentum cells from -pi upward, "
                  "columns are angle cells from 0 upward",
    })
    return EXIT_OK


def cmd_wd(config: dict, out: str, sha: str, threads: int) -> int:
    params = parse_sim_params(config)
    center = config.get("box_center", [np.pi, 0.0])
    if not (isinstance(center, list) and len(center) == 2):
        raise ConfigError("box_center must be [theta, p]")
    t, up, down = wd_series(
        params, parse_qubit_init(config), parse_detector_init(config),
        box_center=(float(center[0]), float(center[1])),
        box_side=float(config.get("box_side", 0.253)),
        grid=(int(config.get("grid_theta", 128)),
              int(config.get("grid_p", 128))),
        mode=str(config.get("mode", "conditional")))
    write_csv(out, sha, ["t", "wd_up", "wd_down"],
              [(int(tt), u, d) for tt, u, d in zip(t, up, down)])
    return EXIT_OK


def cmd_lyapunov(config: dict, out: str, sha: str, threads: int) -> int:
    k_eff = float(_require(config, "K_eff"))
    n_orbits = int(config.get("n_orbits", 100))
    n_steps = int(config.get("n_steps", 10_000))
    seed = int(config.get("seed", 0))
    try:
        value = lyapunov(k_eff, n_orbits, n_steps, seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    write_json(out, sha, {"K_eff": k_eff, "lambda": value,
                          "n_orbits": n_orbits, "n_steps": n_steps,
                          "seed": seed})
    return EXIT_OK


def cmd_channel(config: dict, out: str, sha: str, threads: int) -> int:
    epsilon = float(_require(config, "epsilon"))
    delta = float(_require(config, "delta"))
    t_max = int(_require(config, "t_max"))
    raw = config.get("bloch_init", [0.0, 0.0, 1.0])
    if not (isinstance(raw, list) and len(raw) == 3):
        raise ConfigError("bloch_init must be [x, y, z]")
    b0 = BlochVector(float(raw[0]), float(raw[1]), float(raw[2]))
    if b0.r2() > 1.0 + 1e-10:
        raise ConfigError(f"bloch_init has |r| > 1: {raw}")
    kind = str(config.get("kind", "map"))
    if kind == "map":
        traj = map_trajectory(b0, epsilon, delta, t_max)
        rows = [(int(t), r01.real, r01.imag, abs(r01), 1.0 - r11, r11, pur)
                for t, r01, r11, pur in zip(traj.t, traj.rho01, traj.rho11,
                                            traj.purity)]
        write_csv(out, sha, ["t", "re_rho01", "im_rho01", "abs_rho01",
                             "rho00", "rho11", "purity"], rows)
    elif kind == "continuous":
        rows = []
        for t in range(t_max + 1):
            b = continuous_solution(b0, epsilon, delta, float(t))
            rows.append((t, b.x, b.y, b.z,
                         0.5 * np.hypot(b.x, b.y), 0.5 * (1.0 - b.z)))
        write_csv(out, sha, ["t", "x", "y", "z", "abs_rho01", "rho11"], rows)
    else:
        raise ConfigError(f"kind must be 'map' or 'continuous', got {kind!r}")
    return EXIT_OK


def cmd_fidelity(config: dict, out: str, sha: str, threads: int) -> int:
    params = parse_sim_params(config)
    f = fidelity_series(params, parse_detector_init(config), params.t_max)
    write_csv(out, sha, ["t", "re_f", "im_f", "abs_f"],
              [(t, v.real, v.imag, abs(v)) for t, v in enumerate(f)])
    return EXIT_OK


def read_csv_column(path: str, column: str) -> np.ndarray:
    with open(path) as handle:
        lines = [ln.strip() for ln in handle if ln.strip()
                 and not ln.startswith("#")]
    header = lines[0].split(",")
    if column not in header:
        raise ConfigError(f"column {column!r} not in {path} "
                          f"(columns: {header})")
    idx = header.index(column)
    return np.array([float(ln.split(",")[idx]) for ln in lines[1:]])


def cmd_fit(config: dict, out: str, sha: str, threads: int) -> int:
    path = str(_require(config, "input"))
    kind = str(_require(config, "kind"))
    if kind == "residual":
        column = str(config.get("column", "abs_rho01"))
        series = read_csv_column(path, column)
        t_lo = int(config.get("t_lo", 500))
        t_hi = int(config.get("t_hi", min(2000, len(series) - 1)))
        try:
            value = residual_level(series, t_lo, t_hi)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        write_json(out, sha, {"value": value, "t_lo": t_lo, "t_hi": t_hi,
                              "column": column, "n": len(series)})
        return EXIT_OK
    if kind == "exp":
        column = str(config.get("column", "abs_rho01"))
        series = read_csv_column(path, column)
        try:
            fit = fit_exp_decay(series)
        except NonDecayingSeriesError as exc:
            write_json(out, sha, {"error": f"non-decaying series: {exc}",
                                  "column": column})
            return EXIT_FIT
    elif kind == "sine":
        column = str(config.get("column", "rho11"))
        series = read_csv_column(path, column)
        hint = config.get("freq_hint")
        fit = fit_damped_sine(series,
                              freq_hint=None if hint is None else float(hint))
    else:
        raise ConfigError(f"kind must be 'exp', 'sine' or 'residual', "
                          f"got {kind!r}")
    write_json(out, sha, {
        "rate": fit.rate, "amplitude": fit.amplitude,
        "frequency": fit.frequency, "phase": fit.phase,
        "window_lo": fit.window[0], "window_hi": fit.window[1],
        "rms_residual": fit.rms_residual, "converged": fit.converged,
        "column": column,
    })
    return EXIT_OK if fit.converged else EXIT_FIT


COMMANDS = {
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "husimi": cmd_husimi,
    "wd": cmd_wd,
    "lyapunov": cmd_lyapunov,
    "channel": cmd_channel,
    "fidelity": cmd_fidelity,
    "fit": cmd_fit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkr-detector",
        description="Qubit coupled to a quantum kicked rotator: simulation "
                    "and rate-extraction runs driven by JSON configs.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True,
                         help="path to the flat JSON run configuration")
        cmd.add_argument("--out", required=True,
                         help="output file (CSV or JSON depending on command)")
        cmd.add_argument("--threads", type=int, default=1,
                         help="worker processes for sweep (default 1)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, args.command)
        return COMMANDS[args.command](config, args.out, _config_sha(config),
                                      max(1, args.threads))
    except ConfigError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
