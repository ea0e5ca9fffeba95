"""Command-line interface: dispersion tables, phase diagrams, sweeps, charging
curves, and the verification suite.

Outputs are CSV or JSON tables with a metadata header (see tables.py); the
optional --plot flag renders a matplotlib PNG next to the table.  Flags may
also be supplied through a flat key/value JSON config file; explicit
command-line flags win.  Exit codes: 0 success, 1 usage, 2 numerical
failure or verification failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ConfigParseError, NumericalError, QbChainError, UsageError
from .model import ModelParams, boundary_residuals, dispersion, spectral_gap, validate_params
from .quench import stored_energy_curve, sweep_scenario
from .scenarios import QuenchScenario
from .tables import write_table
from .verify import render_report, run_verification

_OUTDIR_ENV = "QBCHAIN_OUTDIR"
_PLOT_AUTO = "__auto__"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we map usage to 1
        raise UsageError(message)


def _add_common(sub):
    sub.add_argument("--config", metavar="JSON",
                     help="flat key/value JSON file with defaults for any flag")
    sub.add_argument("--out", metavar="PATH",
                     help="output file (default: <command>.<format> in "
                          f"${_OUTDIR_ENV} or the working directory)")
    sub.add_argument("--format", choices=("csv", "json"), dest="fmt",
                     help="output format (default csv)")
    sub.add_argument("--threads", type=int,
                     help="worker thread cap for sweep/grid evaluation (default 1)")
    sub.add_argument("--plot", nargs="?", const=_PLOT_AUTO, metavar="PNG",
                     help="also render a figure (default: output path with .png)")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="qbchain",
        description="Dimerized XY chain in a transverse field as a quantum "
                    "battery: spectra, phase boundaries, and sudden-quench "
                    "charging (energies in units of J, times in 1/J).",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dispersion", help="quasiparticle branches over the zone")
    p.add_argument("--gamma", type=float, help="anisotropy gamma (dimensionless)")
    p.add_argument("--delta", type=float, help="dimerization delta (dimensionless)")
    p.add_argument("--h", type=float, dest="field",
                   help="transverse field h (units of J)")
    p.add_argument("--samples", type=int,
                   help="number of k intervals on [0, 2pi] (default 512)")
    _add_common(p)

    p = sub.add_parser("phase-diagram",
                       help="gap and boundary residuals over a (gamma, delta) grid")
    p.add_argument("--h-plane", type=float, dest="h_plane",
                   help="fixed transverse field of the plane (units of J)")
    p.add_argument("--grid", type=int, help="points per axis (default 200)")
    p.add_argument("--gamma-min", type=float, help="gamma lower edge (default 0)")
    p.add_argument("--gamma-max", type=float, help="gamma upper edge (default 2)")
    p.add_argument("--delta-min", type=float, help="delta lower edge (default 0)")
    p.add_argument("--delta-max", type=float, help="delta upper edge (default 2)")
    p.add_argument("--gap-samples", type=int, dest="gap_samples",
                   help="k samples per gap evaluation (default 512)")
    _add_common(p)

    p = sub.add_parser("sweep",
                       help="asymptotic stored energy per dimer along a scenario")
    p.add_argument("--scenario", choices=("anisotropy", "field", "diagonal"),
                   help="which parameter family is swept")
    p.add_argument("--nu-f", type=float, dest="nu_f",
                   help="quench amplitude added to the sweep coordinate")
    p.add_argument("--gamma", type=float,
                   help="held anisotropy (field scenario; dimensionless)")
    p.add_argument("--delta", type=float,
                   help="held dimerization (default 1.5 for diagonal)")
    p.add_argument("--h", type=float, dest="field",
                   help="held transverse field (anisotropy scenario; units of J)")
    p.add_argument("--h-offset", type=float, dest="h_offset",
                   help="diagonal scenario: h = nu + offset (default 0.5)")
    p.add_argument("--nu-min", type=float, dest="nu_min",
                   help="sweep start (default 0)")
    p.add_argument("--nu-max", type=float, dest="nu_max",
                   help="sweep end, inclusive (default 1)")
    p.add_argument("--nu-step", type=float, dest="nu_step",
                   help="sweep step (default 0.01)")
    p.add_argument("--dimers", type=int, help="dimer count, even (default 512)")
    _add_common(p)

    p = sub.add_parser("charge-curve",
                       help="stored energy per dimer against charging time")
    p.add_argument("--pre", help="battery params as gamma,delta,h")
    p.add_argument("--post", help="charging params as gamma,delta,h")
    p.add_argument("--tau-min", type=float, dest="tau_min",
                   help="first charging time (units of 1/J; default 0)")
    p.add_argument("--tau-max", type=float, dest="tau_max",
                   help="last charging time, inclusive (units of 1/J; default 50)")
    p.add_argument("--tau-step", type=float, dest="tau_step",
                   help="time step (units of 1/J; default 0.05)")
    p.add_argument("--dimers", type=int, help="dimer count, even (default 256)")
    _add_common(p)

    p = sub.add_parser("verify", help="run the oracle suite and report per check")
    p.add_argument("--sizes", help="comma list of many-body sizes (default 4,8)")
    p.add_argument("--trials", type=int, help="random draws per check (default 20)")
    p.add_argument("--seed", type=int, help="seed for the random draws (default 7)")
    _add_common(p)

    return parser


_DEFAULTS = {
    "dispersion": {"samples": 512},
    "phase-diagram": {"grid": 200, "gamma_min": 0.0, "gamma_max": 2.0,
                      "delta_min": 0.0, "delta_max": 2.0, "gap_samples": 512},
    "sweep": {"nu_min": 0.0, "nu_max": 1.0, "nu_step": 0.01, "dimers": 512,
              "h_offset": 0.5},
    "charge-curve": {"tau_min": 0.0, "tau_max": 50.0, "tau_step": 0.05,
                     "dimers": 256},
    "verify": {"sizes": "4,8", "trials": 20, "seed": 7},
}
_COMMON_DEFAULTS = {"fmt": "csv", "threads": 1, "plot": None, "out": None}

_REQUIRED = {
    "dispersion": ("gamma", "delta", "field"),
    "phase-diagram": ("h_plane",),
    "sweep": ("scenario", "nu_f"),
    "charge-curve": ("pre", "post"),
    "verify": (),
}


@dataclass
class RunConfig:
    """Fully merged and validated settings for one CLI invocation."""

    command: str
    options: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.options[name]
        except KeyError:
            raise AttributeError(name) from None


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigParseError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigParseError(
            f"config {path} is not valid JSON (line {exc.lineno}, col {exc.colno}): "
            f"{exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise ConfigParseError(f"config {path} must be a flat JSON object")
    out = {}
    for key, value in raw.items():
        if isinstance(value, (dict, list)):
            raise ConfigParseError(f"config {path}: field {key!r} is not flat")
        out[key.replace("-", "_").lstrip("_")] = value
    return out


def _finite(options: dict, command: str):
    for key, value in options.items():
        if isinstance(value, float) and not math.isfinite(value):
            raise UsageError(f"--{key.replace('_', '-')} = {value} is not finite")
    for key in _REQUIRED[command]:
        if options.get(key) is None:
            flag = {"field": "h", "h_plane": "h-plane"}.get(key, key.replace("_", "-"))
            raise UsageError(f"{command} requires --{flag}")


def parse_config(argv=None) -> RunConfig:
    """Parse flags, merge an optional config file, and validate."""
    namespace = build_parser().parse_args(argv)
    command = namespace.command
    options = dict(_COMMON_DEFAULTS)
    options.update(_DEFAULTS[command])
    known = set(options) | {k for k, v in vars(namespace).items() if k != "command"}
    if namespace.config:
        for key, value in _load_config_file(namespace.config).items():
            if key == "config":
                continue
            if key not in known:
                raise ConfigParseError(
                    f"config {namespace.config}: unknown field {key!r} "
                    f"for command {command}"
                )
            options[key] = value
    for key, value in vars(namespace).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            options[key] = value
    for key in _REQUIRED[command]:
        options.setdefault(key, None)
    _finite(options, command)
    return RunConfig(command=command, options=options)


def _parse_triple(text, flag: str) -> ModelParams:
    parts = str(text).split(",")
    if len(parts) != 3:
        raise UsageError(f"--{flag} expects gamma,delta,h (got {text!r})")
    try:
        return validate_params(*(float(p) for p in parts))
    except ValueError as exc:
        raise UsageError(f"--{flag}: {exc}") from exc


def _parse_sizes(text) -> tuple:
    try:
        sizes = tuple(int(p) for p in str(text).split(","))
    except ValueError as exc:
        raise UsageError(f"--sizes expects a comma list of integers: {exc}") from exc
    for n in sizes:
        if n % 2 != 0 or not (4 <= n <= 14):
            raise UsageError(f"--sizes entries must be even and in [4, 14], got {n}")
    return sizes


def _grid(lo: float, hi: float, step: float, flag: str) -> np.ndarray:
    if step <= 0:
        raise UsageError(f"--{flag}-step must be positive, got {step}")
    if hi < lo:
        raise UsageError(f"empty grid: --{flag}-min {lo} exceeds --{flag}-max {hi}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def _output_path(config: RunConfig) -> str:
    if config.out:
        return config.out
    name = f"{config.command}.{config.fmt}"
    return os.path.join(os.environ.get(_OUTDIR_ENV, "."), name)


def _plot_path(config: RunConfig, out_path: str):
    if config.plot is None:
        return None
    if config.plot == _PLOT_AUTO:
        root, _ = os.path.splitext(out_path)
        return root + ".png"
    return config.plot


def _base_metadata(config: RunConfig) -> dict:
    return {"tool": "qbchain", "version": __version__, "command": config.command}


def _scenario_from_config(config: RunConfig) -> QuenchScenario:
    kind = config.scenario
    nu_f = float(config.nu_f)
    if kind == "anisotropy":
        if config.options.get("field") is None or config.options.get("delta") is None:
            raise UsageError("anisotropy sweep requires --h and --delta")
        return QuenchScenario.anisotropy(field=config.field, delta=config.delta,
                                         nu_f=nu_f)
    if kind == "field":
        if config.options.get("gamma") is None or config.options.get("delta") is None:
            raise UsageError("field sweep requires --gamma and --delta")
        return QuenchScenario.field_quench(gamma=config.gamma, delta=config.delta,
                                           nu_f=nu_f)
    delta = config.options.get("delta")
    return QuenchScenario.diagonal(delta=1.5 if delta is None else delta,
                                   h_offset=config.h_offset, nu_f=nu_f)


def _run_dispersion(config: RunConfig, out_path: str):
    params = validate_params(config.gamma, config.delta, config.field)
    if config.samples < 2:
        raise UsageError(f"--samples must be >= 2, got {config.samples}")
    ks = np.linspace(0.0, 2.0 * np.pi, config.samples + 1)
    omega1, omega2 = dispersion(params, ks)
    meta = _base_metadata(config)
    meta.update(gamma=params.gamma, delta=params.delta, h=params.field,
                samples=config.samples)
    rows = list(zip(ks.tolist(), omega1.tolist(), omega2.tolist()))
    write_table(out_path, ["k", "omega1", "omega2"], rows, meta, config.fmt)
    png = _plot_path(config, out_path)
    if png:
        from . import plotting

        plotting.plot_dispersion(ks, omega1, omega2, params, png)


def _run_phase_diagram(config: RunConfig, out_path: str):
    if config.grid < 2:
        raise UsageError(f"--grid must be >= 2, got {config.grid}")
    gammas = np.linspace(config.gamma_min, config.gamma_max, config.grid)
    deltas = np.linspace(config.delta_min, config.delta_max, config.grid)
    h_plane = float(config.h_plane)

    def gap_row(g: float):
        row = np.empty(deltas.size)
        for j, d in enumerate(deltas):
            row[j] = spectral_gap(ModelParams(g, d, h_plane), config.gap_samples)
        return row

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            gap = np.array(list(pool.map(gap_row, gammas)))
    else:
        gap = np.array([gap_row(g) for g in gammas])

    rows = []
    for i, g in enumerate(gammas):
        for j, d in enumerate(deltas):
            res = boundary_residuals(ModelParams(g, d, h_plane))
            rows.append((float(g), float(d), float(gap[i, j]),
                         res.r_hyperbolic, res.r_conic))
    meta = _base_metadata(config)
    meta.update(h_plane=h_plane, grid=config.grid,
                gamma_min=float(config.gamma_min), gamma_max=float(config.gamma_max),
                delta_min=float(config.delta_min), delta_max=float(config.delta_max),
                gap_samples=config.gap_samples)
    write_table(out_path, ["gamma", "delta", "gap", "r_hyp", "r_con"], rows,
                meta, config.fmt)
    png = _plot_path(config, out_path)
    if png:
        from . import plotting

        plotting.plot_phase_diagram(gammas, deltas, gap, h_plane, png)


def _run_sweep(config: RunConfig, out_path: str):
    scenario = _scenario_from_config(config)
    nus = _grid(config.nu_min, config.nu_max, config.nu_step, "nu")
    result = sweep_scenario(scenario, nus, config.dimers, threads=config.threads)
    meta = _base_metadata(config)
    for key, value in result.metadata.items():
        meta[key] = value
    meta["nu_step"] = float(config.nu_step)
    meta["critical_points"] = ";".join(
        f"{m.boundary}:{m.nu:.17g}" for m in result.critical_markers
    )
    rows = list(zip(result.nu_values.tolist(), result.energies.tolist()))
    write_table(out_path, ["nu_i", "delta_e_per_dimer"], rows, meta, config.fmt)
    png = _plot_path(config, out_path)
    if png:
        from . import plotting

        plotting.plot_sweep(result, png)


def _run_charge_curve(config: RunConfig, out_path: str):
    pre = _parse_triple(config.pre, "pre")
    post = _parse_triple(config.post, "post")
    taus = _grid(config.tau_min, config.tau_max, config.tau_step, "tau")
    curve = stored_energy_curve(pre, post, taus, config.dimers)
    meta = _base_metadata(config)
    meta.update(
        pre_gamma=pre.gamma, pre_delta=pre.delta, pre_h=pre.field,
        post_gamma=post.gamma, post_delta=post.delta, post_h=post.field,
        n_dimers=config.dimers, tau_step=float(config.tau_step),
    )
    rows = list(zip(curve.times.tolist(), curve.energies.tolist()))
    write_table(out_path, ["tau", "e_per_dimer"], rows, meta, config.fmt)
    png = _plot_path(config, out_path)
    if png:
        from . import plotting

        plotting.plot_charge_curve(curve, png)


def run_command(config: RunConfig) -> int:
    """Dispatch a validated RunConfig; returns the process exit code."""
    if config.command == "verify":
        sizes = _parse_sizes(config.sizes)
        results = run_verification(sizes=sizes, trials=config.trials,
                                   seed=config.seed)
        print(render_report(results, sizes, config.trials, config.seed))
        return 0 if all(r.passed for r in results) else 2
    out_path = _output_path(config)
    runner = {
        "dispersion": _run_dispersion,
        "phase-diagram": _run_phase_diagram,
        "sweep": _run_sweep,
        "charge-curve": _run_charge_curve,
    }[config.command]
    runner(config, out_path)
    return 0


def main(argv=None) -> int:
    try:
        return run_command(parse_config(argv))
    except UsageError as exc:  # includes ConfigParseError
        print(f"qbchain: error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"qbchain: numerical failure: {exc}", file=sys.stderr)
        return 2
    except QbChainError as exc:
        print(f"qbchain: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qbchain: i/o failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
