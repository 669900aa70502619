"""Command-line entry point: validate, simulate, sweep, reproduce.

Exit codes: 0 success, 1 invalid observer parameters, 2 malformed
configuration, 3 diverged simulation (or a sweep with more than 5% of rows
flagged).  Config files are JSON; unknown keys are a hard error so typos
never pass silently.
"""

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import io, scenarios
from .errors import ConfigError, DivergedState, DoubleIntError, InvalidParams
from .observers import ObserverParams, validate_params
from .signals import NoiseTerm, SignalSpec
from .solver import ObserverState, SimConfig, simulate, trajectory_metrics
from .sweep import SweepConfig, bode_from_transfer, default_grid, sweep_observer

EXIT_OK = 0
EXIT_INVALID_PARAMS = 1
EXIT_BAD_CONFIG = 2
EXIT_DIVERGED = 3

MAX_FLAGGED_FRACTION = 0.05


def _check_keys(d: dict, allowed: set[str], context: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown {context} keys: {sorted(unknown)}")


def _build_params(d: dict) -> ObserverParams:
    _check_keys(d, {"k1", "k2", "k3", "R", "epsilon", "alpha3", "mode"}, "params")
    for key in ("k1", "k2", "k3"):
        if key not in d:
            raise ConfigError(f"params.{key} is required")
    if ("R" in d) == ("epsilon" in d):
        raise ConfigError("params needs exactly one of R or epsilon")
    eps = 1.0 / float(d["R"]) if "R" in d else float(d["epsilon"])
    try:
        return ObserverParams(
            k1=float(d["k1"]),
            k2=float(d["k2"]),
            k3=float(d["k3"]),
            epsilon=eps,
            alpha3=float(d.get("alpha3", 1.0)),
            mode=d.get("mode", "nonlinear"),
        )
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc


def _build_signal(d: dict) -> SignalSpec:
    _check_keys(d, {"kind", "amplitude", "omega", "noise"}, "signal")
    noise = []
    for i, term in enumerate(d.get("noise", [])):
        _check_keys(term, {"amp", "omega", "phase"}, f"signal.noise[{i}]")
        noise.append(
            NoiseTerm(float(term["amp"]), float(term["omega"]), term.get("phase", "sine"))
        )
    try:
        return SignalSpec(
            kind=d.get("kind", "sinusoid"),
            amplitude=float(d.get("amplitude", 1.0)),
            omega=float(d.get("omega", 1.0)),
            noise=tuple(noise),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _build_sim(d: dict, method_override: str | None) -> tuple[SimConfig, list]:
    _check_keys(
        d,
        {"step_h", "duration", "initial_state", "method", "record_stride", "metrics_windows"},
        "sim",
    )
    duration = float(d.get("duration", 20.0))
    x0 = d.get("initial_state", [0.0, 0.0, 0.0])
    if len(x0) != 3:
        raise ConfigError("sim.initial_state must have exactly 3 components")
    # long runs default to a sparser record grid to bound memory
    default_stride = 1 if duration <= 60.0 else 100
    cfg = SimConfig(
        step_h=float(d.get("step_h", 0.001)),
        duration=duration,
        initial_state=ObserverState(*(float(v) for v in x0)),
        method=method_override or d.get("method", "rk4"),
        record_stride=int(d.get("record_stride", default_stride)),
    )
    windows = [(float(a), float(b)) for a, b in d.get("metrics_windows", [[0.0, duration]])]
    return cfg, windows


def _build_sweep(d: dict, method_override: str | None,
                 discard_override: float | None) -> tuple[SweepConfig, list[dict]]:
    _check_keys(
        d,
        {"freqs_hz", "amplitude", "step_h", "samples", "discard_fraction", "channels",
         "method", "init_state", "variants"},
        "sweep",
    )
    variants = d.get("variants", [{}])
    for i, v in enumerate(variants):
        _check_keys(v, {"k1", "k2", "k3", "R", "epsilon", "alpha3", "mode", "amplitude"},
                    f"sweep.variants[{i}]")
    discard = d.get("discard_fraction", 0.0) if discard_override is None else discard_override
    cfg = SweepConfig(
        freqs_hz=tuple(float(f) for f in d.get("freqs_hz", default_grid())),
        amplitude=float(d.get("amplitude", 1.0)),
        step_h=float(d.get("step_h", 0.001)),
        samples=int(d.get("samples", 50000)),
        discard_fraction=float(discard),
        channels=tuple(int(c) for c in d.get("channels", (1, 2, 3))),
        method=method_override or d.get("method", "rk4"),
        init_state=d.get("init_state", "zero"),
    )
    return cfg, variants


def load_config(path) -> dict:
    try:
        with open(path) as f:
            cfg = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _check_top(cfg: dict, command: str) -> None:
    _check_keys(cfg, {"command", "params", "signal", "sim", "sweep", "output_dir", "format"},
                "config")
    stated = cfg.get("command")
    if stated is not None and stated != command:
        raise ConfigError(f"config command {stated!r} does not match subcommand {command!r}")
    fmt = cfg.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")


def cmd_validate(cfg: dict) -> int:
    _check_top(cfg, "validate")
    params = _build_params(cfg.get("params", {}))
    report = validate_params(params)
    print(report)
    return EXIT_OK if report.ok else EXIT_INVALID_PARAMS


def cmd_simulate(cfg: dict, out_dir, fmt: str | None = None,
                 method: str | None = None) -> int:
    _check_top(cfg, "simulate")
    params = _build_params(cfg.get("params", {}))
    report = validate_params(params)
    if not report.ok:
        print(report, file=sys.stderr)
        return EXIT_INVALID_PARAMS
    spec = _build_signal(cfg.get("signal", {}))
    sim_cfg, windows = _build_sim(cfg.get("sim", {}), method)
    fmt = fmt or cfg.get("format", "csv")
    out = io.ensure_dir(out_dir)
    try:
        traj = simulate(params, spec, sim_cfg)
    except DivergedState as exc:
        print(f"simulation diverged at t={exc.time:.6g} s", file=sys.stderr)
        return EXIT_DIVERGED
    if fmt == "csv":
        io.write_trajectory_csv(out / "trajectory.csv", traj)
    else:
        io.write_json(out / "trajectory.json", io.trajectory_to_dict(traj))
    io.write_json(out / "metrics.json", trajectory_metrics(traj, windows))
    io.write_json(out / "config.json", _effective(cfg, "simulate"))
    print(f"wrote trajectory ({traj.times.size} samples) to {out}")
    return EXIT_OK


def _variant_params(base: dict, variant: dict) -> dict:
    merged = dict(base)
    merged.update({k: v for k, v in variant.items() if k != "amplitude"})
    if "R" in variant:
        merged.pop("epsilon", None)
    elif "epsilon" in variant:
        merged.pop("R", None)
    return merged


def _variant_tag(params: ObserverParams, amplitude: float) -> str:
    return (f"{params.mode}_a{params.alpha3:g}_R{1.0 / params.epsilon:g}"
            f"_Am{amplitude:g}")


def cmd_sweep(cfg: dict, out_dir, fmt: str | None = None, method: str | None = None,
              discard: float | None = None, workers: int = 1) -> int:
    _check_top(cfg, "sweep")
    base_params = cfg.get("params", {})
    sweep_cfg, variants = _build_sweep(cfg.get("sweep", {}), method, discard)
    fmt = fmt or cfg.get("format", "csv")
    out = io.ensure_dir(out_dir)
    total = flagged = 0
    written = []
    for variant in variants:
        params = _build_params(_variant_params(base_params, variant))
        report = validate_params(params)
        if not report.ok:
            print(report, file=sys.stderr)
            return EXIT_INVALID_PARAMS
        run_cfg = sweep_cfg
        if "amplitude" in variant:
            run_cfg = dataclasses.replace(sweep_cfg, amplitude=float(variant["amplitude"]))
        curve = sweep_observer(params, run_cfg, workers=workers)
        tag = _variant_tag(params, run_cfg.amplitude)
        written.append(_write_curve(out, f"bode_{tag}", curve, fmt))
        total += len(curve.rows)
        flagged += sum(r.flag != "ok" for r in curve.rows)
        if params.mode == "linear":
            ref = bode_from_transfer(params, run_cfg)
            written.append(_write_curve(out, f"analytic_{tag}", ref, fmt))
    io.write_json(out / "config.json", _effective(cfg, "sweep"))
    print(f"wrote {len(written)} curves to {out}; flagged rows: {flagged}/{total}")
    if total and flagged / total > MAX_FLAGGED_FRACTION:
        return EXIT_DIVERGED
    return EXIT_OK


def _write_curve(out: Path, stem: str, curve, fmt: str):
    if fmt == "csv":
        path = out / f"{stem}.csv"
        io.write_bode_csv(path, curve)
    else:
        path = out / f"{stem}.json"
        io.write_json(path, io.bode_to_dict(curve))
    return path


def _effective(cfg: dict, command: str) -> dict:
    out = dict(cfg)
    out["command"] = command
    return out


def cmd_reproduce(name: str, out_dir, fmt: str | None = None, method: str | None = None,
                  discard: float | None = None, workers: int = 1) -> int:
    cfg = scenarios.expand_scenario(name)
    if cfg["command"] == "simulate":
        return cmd_simulate(cfg, out_dir, fmt, method)
    return cmd_sweep(cfg, out_dir, fmt, method, discard, workers)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doubleint",
        description="Double-integrator observers: validation, simulation and "
                    "frequency-sweep characterization.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_common(p, config_required=True):
        if config_required:
            p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--method", choices=("rk4", "euler"), default=None)

    p = sub.add_parser("validate", help="check observer parameters")
    p.add_argument("--config", required=True)

    p = sub.add_parser("simulate", help="integrate the observer against a signal")
    add_common(p)

    p = sub.add_parser("sweep", help="frequency-sweep Bode characterization")
    add_common(p)
    p.add_argument("--discard", type=float, default=None,
                   help="override discard fraction before fitting")
    p.add_argument("--threads", type=int, default=1, help="parallel sweep workers")

    p = sub.add_parser("reproduce", help="run a canned scenario (fig1..fig6)")
    p.add_argument("--scenario", required=True, choices=scenarios.SCENARIO_NAMES)
    add_common(p, config_required=False)
    p.add_argument("--discard", type=float, default=None)
    p.add_argument("--threads", type=int, default=1)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "validate":
            return cmd_validate(load_config(args.config))
        if args.cmd == "simulate":
            return cmd_simulate(load_config(args.config), args.out, args.format, args.method)
        if args.cmd == "sweep":
            return cmd_sweep(load_config(args.config), args.out, args.format, args.method,
                             args.discard, args.threads)
        if args.cmd == "reproduce":
            return cmd_reproduce(args.scenario, args.out, args.format, args.method,
                                 args.discard, args.threads)
        raise ConfigError(f"unknown command {args.cmd!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except InvalidParams as exc:
        print(exc.report, file=sys.stderr)
        return EXIT_INVALID_PARAMS
    except DivergedState as exc:
        print(f"simulation diverged at t={exc.time:.6g} s", file=sys.stderr)
        return EXIT_DIVERGED
    except DoubleIntError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())
