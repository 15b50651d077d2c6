"""Command-line front end.

Subcommands
-----------
sample-path   write (t, B^H, X_method...) CSV per Hurst value, one shared
              Gaussian stream so paths for different H are comparable
converge      RMSE table + log-log rate fits for a ladder of step sizes
rate-sweep    fitted rate (and error constant) against the Hurst parameter

Configuration is a flat key=value text file plus command-line overrides;
named presets (fig1a .. fig6) encode the shipped experiment setups at
desk scale, and --paper-scale restores the full-scale reference grid.
Every run writes a manifest listing the resolved configuration and a
sha256 checksum of each emitted data file.  Exit codes: 0 success,
2 configuration error, 3 numeric overflow, 4 embedding failure.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .drifts import REGISTRY, get_drift
from .errors import ConfigError, EmbeddingError, NumericOverflowError
from .experiments import (
    ConvergenceConfig,
    conjectured_rate,
    convergence_study,
    rate_vs_h_sweep,
    theoretical_rate,
)
from .fbm import SeedSpec, TimeGrid, sample_fbm_path
from .solvers import SolverKind, solve_endpoint, solve_path
from .wis import SdeProblem

__all__ = ["main", "PRESETS"]

EXIT_CONFIG = 2
EXIT_OVERFLOW = 3
EXIT_EMBEDDING = 4

_DEFAULTS = {
    "hurst": "0.5",
    "alpha": "0.0",
    "beta": "1.0",
    "x0": "1.0",
    "t_final": "1.0",
    "drift": "quasi_rational",
    "methods": "gbmem",
    "dt": "0.001",
    "dt_list": "2^-6,2^-7,2^-8,2^-9,2^-10",
    "ref_steps": "2^14",
    "samples": "500",
    "batches": "10",
    "seed": "12345",
    "h_list": "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
}

_ALL_METHODS = "gbmem,mishura_em,expfreeze,rosenbrock"

# (command, key overrides, paper-scale extras) per figure preset.
PRESETS = {
    "fig1a": ("sample-path", {"hurst": "0.1,0.25,0.5,0.75,0.9", "alpha": "0.0"}, {}),
    "fig1b": ("sample-path", {"hurst": "0.1,0.25,0.5,0.75,0.9", "alpha": "1.0"}, {}),
    "fig2a": ("sample-path", {"hurst": "0.25", "alpha": "1.0", "methods": _ALL_METHODS}, {}),
    "fig2b": ("sample-path", {"hurst": "0.75", "alpha": "1.0", "methods": _ALL_METHODS}, {}),
    "fig3a": ("converge", {"hurst": "0.25", "alpha": "1.0", "methods": _ALL_METHODS}, {}),
    "fig3b": ("converge", {"hurst": "0.75", "alpha": "1.0", "methods": _ALL_METHODS}, {}),
    "fig4a": ("rate-sweep", {"alpha": "0.0", "methods": "mishura_em"}, {}),
    "fig4b": ("rate-sweep", {"alpha": "1.0", "methods": "gbmem"}, {}),
    "fig5a": ("rate-sweep", {"alpha": "1.0", "beta": "2.0", "methods": "gbmem"}, {}),
    "fig5b": (
        "rate-sweep",
        {"alpha": "-1.0", "beta": "0.5", "drift": "cosine", "x0": "10.0", "methods": "gbmem"},
        {},
    ),
    "fig6": (
        "rate-sweep",
        {"alpha": "0.0", "beta": "5.0", "drift": "log_square", "x0": "25.0", "methods": "mishura_em"},
        {"samples": "2500"},
    ),
}

_PAPER_SCALE = {"ref_steps": "2^19"}


def _parse_number(token: str) -> float:
    """Float literal, optionally in base^exponent form (e.g. 2^-10)."""
    token = token.strip().replace("**", "^")
    if "^" in token:
        base, _, exponent = token.partition("^")
        return float(base) ** float(exponent)
    return float(token)


def _parse_int(token: str) -> int:
    token = token.strip()
    try:
        return int(token)  # exact for 64-bit seeds; floats round above 2^53
    except ValueError:
        pass
    value = _parse_number(token)
    if value != int(value):
        raise ConfigError(f"expected an integer, got {token!r}")
    return int(value)


def _parse_float_list(token: str) -> tuple[float, ...]:
    return tuple(_parse_number(part) for part in token.split(",") if part.strip())


def _load_config_file(path: str) -> dict[str, str]:
    raw = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        raw[key.strip()] = value.strip()
    return raw


def _resolve_config(args: argparse.Namespace, command: str) -> dict[str, str]:
    config = dict(_DEFAULTS)
    if args.preset:
        try:
            preset_command, overrides, paper_extra = PRESETS[args.preset]
        except KeyError:
            raise ConfigError(
                f"unknown preset {args.preset!r}; available: {', '.join(sorted(PRESETS))}"
            ) from None
        if preset_command != command:
            raise ConfigError(
                f"preset {args.preset!r} belongs to the {preset_command!r} command"
            )
        config.update(overrides)
        if args.paper_scale:
            config.update(paper_extra)
    if args.paper_scale:
        config.update(_PAPER_SCALE)
    if args.config:
        file_values = _load_config_file(args.config)
        unknown = set(file_values) - set(_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        config.update(file_values)
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in _DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}")
        config[key] = value.strip()
    if args.seed is not None:
        config["seed"] = str(args.seed)
    return config


def _build_problem(config: dict[str, str], hurst: float) -> SdeProblem:
    return SdeProblem(
        alpha=_parse_number(config["alpha"]),
        beta=_parse_number(config["beta"]),
        x0=_parse_number(config["x0"]),
        t_final=_parse_number(config["t_final"]),
        hurst=hurst,
        drift=get_drift(config["drift"]),
    )


def _parse_methods(config: dict[str, str]) -> tuple[SolverKind, ...]:
    return tuple(
        SolverKind.from_name(name) for name in config["methods"].split(",") if name.strip()
    )


def _out_dir(args: argparse.Namespace) -> Path:
    if args.out:
        out = Path(args.out)
    elif os.environ.get("WISSDE_OUT"):
        out = Path(os.environ["WISSDE_OUT"])
    else:
        out = Path.cwd()
    out.mkdir(parents=True, exist_ok=True)
    return out


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_text(path: Path, lines: list[str]) -> None:
    path.write_text("\n".join(lines) + "\n")


class _RunWriter:
    """Collects emitted files and writes the run manifest."""

    def __init__(self, out_dir: Path, command: str, config: dict[str, str], args):
        self.out_dir = out_dir
        self.command = command
        self.config = config
        self.args = args
        self.files: list[Path] = []
        self.started = time.perf_counter()

    def emit(self, name: str, lines: list[str]) -> Path:
        path = self.out_dir / name
        _write_text(path, lines)
        self.files.append(path)
        return path

    def finish(self) -> Path:
        # the echoed configuration doubles as a rerun recipe: pass it back
        # through --config to reproduce the data files byte for byte
        echo = [f"{key} = {self.config[key]}" for key in sorted(self.config)]
        self.emit("config_echo.cfg", echo)
        lines = [
            f"command = {self.command}",
            f"preset = {self.args.preset or ''}",
            f"version = {__version__}",
            f"wall_clock_seconds = {time.perf_counter() - self.started:.3f}",
        ]
        lines += echo
        for path in self.files:
            digest = hashlib.sha256(path.read_bytes()).hexdigest()
            lines.append(f"file {path.name} sha256={digest} bytes={path.stat().st_size}")
        manifest = self.out_dir / "manifest.txt"
        _write_text(manifest, lines)
        return manifest


def _cmd_sample_path(args: argparse.Namespace) -> int:
    config = _resolve_config(args, "sample-path")
    hursts = _parse_float_list(config["hurst"])
    methods = _parse_methods(config)
    seed = _parse_int(config["seed"])
    dt = _parse_number(config["dt"])
    t_final = _parse_number(config["t_final"])
    n_steps = int(round(t_final / dt))
    if n_steps < 1 or abs(t_final / dt - n_steps) > 1e-9 * n_steps:
        raise ConfigError(f"t_final/dt = {t_final / dt} is not a positive integer")
    grid = TimeGrid(t_final, n_steps)
    writer = _RunWriter(_out_dir(args), "sample-path", config, args)

    header = "t,bh," + ",".join(f"x_{m.value}" for m in methods)
    for h in hursts:
        problem = _build_problem(config, h)
        # stream 0 of the same master seed for every H: identical normals,
        # so the H-dependence of the paths is directly comparable.
        path = sample_fbm_path(h, grid, SeedSpec(seed, 0))
        t = grid.times()
        if args.endpoint_only:
            endpoints = [solve_endpoint(problem, m, path).x_at_T for m in methods]
            rows = [
                ",".join([_fmt(t[-1]), _fmt(path.values[-1])] + [_fmt(x) for x in endpoints])
            ]
        else:
            solutions = [solve_path(problem, m, path).values for m in methods]
            rows = [
                ",".join(
                    [_fmt(t[i]), _fmt(path.values[i])] + [_fmt(sol[i]) for sol in solutions]
                )
                for i in range(n_steps + 1)
            ]
        writer.emit(f"paths_H{h:g}.csv", [header] + rows)
    writer.finish()
    return 0


def _convergence_config(config: dict[str, str]) -> ConvergenceConfig:
    hursts = _parse_float_list(config["hurst"])
    if len(hursts) != 1:
        raise ConfigError(f"converge expects a single hurst value, got {hursts}")
    return ConvergenceConfig(
        problem=_build_problem(config, hursts[0]),
        methods=_parse_methods(config),
        dt_list=_parse_float_list(config["dt_list"]),
        ref_steps=_parse_int(config["ref_steps"]),
        samples=_parse_int(config["samples"]),
        batches=_parse_int(config["batches"]),
        master_seed=_parse_int(config["seed"]),
    )


def _cmd_converge(args: argparse.Namespace) -> int:
    config = _resolve_config(args, "converge")
    study = _convergence_config(config)
    table, fits = convergence_study(study, threads=args.threads)
    writer = _RunWriter(_out_dir(args), "converge", config, args)

    rows = ["method,dt,rmse,batch_std"]
    for method in study.methods:
        for dt in study.dt_list:
            entry = table.entries[(method, dt)]
            std = float(np.std(entry.batch_rmses, ddof=1)) if len(entry.batch_rmses) > 1 else float("nan")
            rows.append(f"{method.value},{_fmt(dt)},{_fmt(entry.rmse)},{_fmt(std)}")
    writer.emit("rmse.csv", rows)

    rows = ["method,slope,slope_stderr,error_constant"]
    for method in study.methods:
        fit = fits[method]
        rows.append(
            f"{method.value},{_fmt(fit.slope)},{_fmt(fit.slope_stderr)},{_fmt(fit.error_constant)}"
        )
    writer.emit("fits.csv", rows)

    rows = ["# method log2_dt log2_rmse"]
    for method in study.methods:
        for dt in study.dt_list:
            rmse = table.rmse(method, dt)
            log_rmse = _fmt(np.log2(rmse)) if rmse > 0 else "nan"
            rows.append(f"{method.value} {_fmt(np.log2(dt))} {log_rmse}")
    writer.emit("rmse_loglog.dat", rows)
    writer.emit(
        "rmse_loglog.gp",
        [
            "# gnuplot recipe for the log-log error curves",
            "set xlabel 'log2(dt)'",
            "set ylabel 'log2(rmse)'",
            "plot 'rmse_loglog.dat' using 2:3 with linespoints title 'rmse'",
        ],
    )
    writer.finish()
    return 0


def _cmd_rate_sweep(args: argparse.Namespace) -> int:
    config = _resolve_config(args, "rate-sweep")
    h_list = _parse_float_list(config["h_list"])
    base = _convergence_config({**config, "hurst": str(h_list[0])})
    report = rate_vs_h_sweep(h_list, base, threads=args.threads)
    writer = _RunWriter(_out_dir(args), "rate-sweep", config, args)

    rows = ["hurst,method,slope,slope_stderr,log_error_constant,theoretical_rate,conjectured_rate"]
    for row in report.rows:
        rows.append(
            ",".join(
                [
                    _fmt(row.hurst),
                    row.method.value,
                    _fmt(row.fit.slope),
                    _fmt(row.fit.slope_stderr),
                    _fmt(np.log(row.fit.error_constant)),
                    _fmt(row.theoretical_rate),
                    _fmt(row.conjectured_rate),
                ]
            )
        )
    writer.emit("rate_sweep.csv", rows)

    zeta = base.problem.drift.holder_exponent
    rows = ["# hurst slope slope_stderr theoretical_rate conjectured_rate"]
    for row in report.rows:
        rows.append(
            " ".join(
                [
                    _fmt(row.hurst),
                    _fmt(row.fit.slope),
                    _fmt(row.fit.slope_stderr),
                    _fmt(theoretical_rate(row.hurst, zeta)),
                    _fmt(conjectured_rate(row.hurst)),
                ]
            )
        )
    writer.emit("rate_vs_h.dat", rows)
    writer.emit(
        "rate_vs_h.gp",
        [
            "# gnuplot recipe for the rate-versus-H overlay",
            "set xlabel 'H'",
            "set ylabel 'estimated rate'",
            "plot 'rate_vs_h.dat' using 1:2:3 with yerrorbars title 'estimated', \\",
            "     'rate_vs_h.dat' using 1:4 with lines title 'proven rate', \\",
            "     'rate_vs_h.dat' using 1:5 with lines title 'conjectured rate'",
        ],
    )
    writer.finish()
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wissde",
        description="Quasilinear SDEs driven by fractional Brownian motion: "
        "path sampling, solvers, and strong-convergence experiments.",
    )
    parser.add_argument("--version", action="version", version=f"wissde {__version__}")
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="flat key=value config file")
    shared.add_argument("--preset", help=f"figure preset ({', '.join(sorted(PRESETS))})")
    shared.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one key")
    shared.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    shared.add_argument("--threads", type=int, default=1, help="worker threads")
    shared.add_argument("--out", help="output directory (default: $WISSDE_OUT or cwd)")
    shared.add_argument(
        "--paper-scale",
        action="store_true",
        help="full-scale reference grid (2^19 steps; fig6 restores 2500 samples)",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("sample-path", parents=[shared], help="write solution paths per H")
    p.add_argument(
        "--endpoint-only",
        action="store_true",
        help="emit only X(T) (endpoint algorithm) instead of the full path",
    )
    p.set_defaults(func=_cmd_sample_path)
    p = sub.add_parser("converge", parents=[shared], help="RMSE ladder and rate fits")
    p.set_defaults(func=_cmd_converge)
    p = sub.add_parser("rate-sweep", parents=[shared], help="fitted rate against H")
    p.set_defaults(func=_cmd_rate_sweep)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except EmbeddingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMBEDDING


if __name__ == "__main__":
    sys.exit(main())
