"""Command-line front end: run experiments from flat config files, emit CSV + manifest.

Config files are plain ``key=value`` lines with dotted section prefixes
(``economy.gamma=1.0``, ``revenue.a=0.5``, ``shock.kind=logistic``, ...).
Four experiment types are exposed as subcommands:

- ``equilibrium``: solve one within-period equilibrium, one-row CSV
- ``simulate``:    full time series plus thinned distribution snapshots
- ``sweep``:       terminal mean beliefs over a (gamma, pi_star) product grid
- ``recurve``:     single-type borrowing curve and its self-fulfilling beliefs

Every run writes a ``manifest.json`` echoing the parsed config, the seed, and
a sha256 checksum per output file, which is enough to reproduce any output
byte for byte.  Exit codes: 0 success, 1 config or validation failure (all
violations printed, nothing written), 2 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import RunRecord, simulate, sweep
from .equilibrium import InvalidSpecError, solve_equilibrium
from .model import (BeliefGrid, ConstantShockProb, EconomySpec,
                    LogisticShockProb, RevenueSpec, WealthShares)
from .selffulfilling import emit_re_curve, find_re_equilibria

__all__ = ["RunConfig", "parse_config", "serialize_config", "build_spec",
           "write_timeseries", "run", "main"]


@dataclass(frozen=True)
class RunConfig:
    """Parsed experiment configuration: the raw key-value pairs plus the kind."""

    kind: str
    params: dict[str, str] = field(default_factory=dict)

    def get(self, key: str, default: str | None = None) -> str | None:
        return self.params.get(key, default)


class ConfigError(ValueError):
    pass


def parse_config(text: str, kind: str) -> RunConfig:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are ignored."""
    params: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in params:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        params[key] = value
    return RunConfig(kind=kind, params=params)


def serialize_config(cfg: RunConfig) -> str:
    """Inverse of :func:`parse_config` (parse . serialize == identity)."""
    return "".join(f"{k}={v}\n" for k, v in cfg.params.items())


def _get_float(cfg: RunConfig, key: str, default: float | None = None) -> float:
    raw = cfg.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: {raw!r} is not a number") from exc


def _get_int(cfg: RunConfig, key: str, default: int | None = None) -> int:
    raw = cfg.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: {raw!r} is not an integer") from exc


def build_spec(cfg: RunConfig) -> EconomySpec:
    """Construct the economy described by a config (structure errors raise ConfigError)."""
    try:
        grid = BeliefGrid.regular(_get_int(cfg, "grid.n", 101))
        revenue = RevenueSpec(A=_get_float(cfg, "revenue.A", 1.0),
                              a=_get_float(cfg, "revenue.a", 0.5),
                              c=_get_float(cfg, "revenue.c", 0.5))
        kind = cfg.get("shock.kind", "constant")
        if kind == "constant":
            shock = ConstantShockProb(_get_float(cfg, "shock.pi_star"))
        elif kind == "logistic":
            shock = LogisticShockProb(base=_get_float(cfg, "shock.base", 0.3),
                                      amplitude=_get_float(cfg, "shock.amplitude", 0.5),
                                      offset=_get_float(cfg, "shock.offset", 4.75),
                                      slope=_get_float(cfg, "shock.slope", 12.0))
        else:
            raise ConfigError(f"shock.kind must be constant or logistic, got {kind!r}")
        return EconomySpec(grid=grid, revenue=revenue,
                           gamma=_get_float(cfg, "economy.gamma", 0.0),
                           shock_prob=shock,
                           noise_eps=_get_float(cfg, "economy.noise_eps", 0.0))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_initial(cfg: RunConfig, spec: EconomySpec) -> WealthShares:
    kind = cfg.get("init.kind", "uniform")
    if kind == "uniform":
        return WealthShares.uniform(spec.grid)
    if kind == "point":
        return WealthShares.point_mass(spec.grid, _get_float(cfg, "init.theta"))
    if kind == "explicit":
        raw = cfg.get("init.weights")
        if raw is None:
            raise ConfigError("init.kind=explicit requires init.weights")
        weights = np.array([float(x) for x in raw.split(",")])
        return WealthShares.from_weights(spec.grid, weights)
    raise ConfigError(f"init.kind must be uniform, point or explicit, got {kind!r}")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write(path: Path, text: str) -> str:
    path.write_bytes(text.encode("ascii"))
    return hashlib.sha256(text.encode("ascii")).hexdigest()


def write_timeseries(record: RunRecord, path: Path) -> str:
    """Write the per-period trace as CSV; returns the file's sha256 hex digest.

    Column order is fixed; floats carry 17 significant digits so replays with
    the same seed are byte-identical.
    """
    lines = ["t,b,p,q,pi,state,growth,realized_y,mean_belief,marginal_theta"]
    for r in record.periods:
        lines.append(",".join([
            str(r.t), _fmt(r.b), _fmt(r.p), _fmt(r.q), _fmt(r.pi), r.state,
            _fmt(r.growth), _fmt(r.realized_y), _fmt(r.mean_belief),
            _fmt(r.marginal_theta),
        ]))
    return _write(path, "\n".join(lines) + "\n")


def write_distributions(record: RunRecord, path: Path) -> str:
    """Long-format snapshots of the wealth distribution: t, theta, share."""
    lines = ["t,theta,share"]
    thetas = record.spec.grid.thetas
    for r in record.periods:
        if r.f_after is None:
            continue
        for th, s in zip(thetas, r.f_after.shares):
            lines.append(f"{r.t},{_fmt(float(th))},{_fmt(float(s))}")
    return _write(path, "\n".join(lines) + "\n")


def _run_equilibrium(cfg, spec, out, args) -> dict[str, str]:
    eq = solve_equilibrium(build_initial(cfg, spec), spec)
    theta_bar = (float(spec.grid.thetas[eq.marginal_index])
                 if eq.marginal_index is not None else math.nan)
    text = "b,p,q,theta_bar\n" + ",".join(
        [_fmt(eq.b), _fmt(eq.p), _fmt(eq.q), _fmt(theta_bar)]) + "\n"
    return {"equilibrium.csv": _write(out / "equilibrium.csv", text)}


def _run_simulate(cfg, spec, out, args) -> dict[str, str]:
    record = simulate(spec,
                      T=args.periods if args.periods is not None else _get_int(cfg, "run.periods", 1000),
                      seed=args.seed if args.seed is not None else _get_int(cfg, "run.seed", 0),
                      initial=build_initial(cfg, spec),
                      thin=_get_int(cfg, "run.thin", 10),
                      mix_before=cfg.get("run.mix_before", "true") == "true")
    return {
        "timeseries.csv": write_timeseries(record, out / "timeseries.csv"),
        "distributions.csv": write_distributions(record, out / "distributions.csv"),
    }


def _run_sweep(cfg, spec, out, args) -> dict[str, str]:
    gammas = [float(x) for x in cfg.get("sweep.gammas", "0,0.5,1,1.5,2").split(",")]
    pis = [float(x) for x in cfg.get("sweep.pis", "0.2,0.4,0.6,0.8").split(",")]
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    cells = sweep(spec, gammas, pis,
                  T=args.periods if args.periods is not None else _get_int(cfg, "run.periods", 5000),
                  seed=args.seed if args.seed is not None else _get_int(cfg, "run.seed", 0),
                  thin=_get_int(cfg, "run.thin", 10),
                  jobs=jobs)
    lines = ["gamma,pi_star,mean_belief"]
    for cell in cells:
        lines.append(f"{_fmt(cell.gamma)},{_fmt(cell.pi_star)},{_fmt(cell.mean_belief)}")
    return {"sweep.csv": _write(out / "sweep.csv", "\n".join(lines) + "\n")}


def _run_recurve(cfg, spec, out, args) -> dict[str, str]:
    grid_size = _get_int(cfg, "recurve.grid_size", 1000)
    curve = emit_re_curve(spec, grid_size=grid_size)
    fixed = find_re_equilibria(spec, grid_size=grid_size)
    curve_lines = ["theta,beta,pi_at_beta"]
    for pt in curve:
        curve_lines.append(f"{_fmt(pt.theta)},{_fmt(pt.beta)},{_fmt(pt.pi_at_beta)}")
    fp_lines = ["theta_star,stable"]
    for fp in fixed:
        fp_lines.append(f"{_fmt(fp.theta)},{'true' if fp.stable else 'false'}")
    return {
        "recurve.csv": _write(out / "recurve.csv", "\n".join(curve_lines) + "\n"),
        "fixed_points.csv": _write(out / "fixed_points.csv", "\n".join(fp_lines) + "\n"),
    }


_EXPERIMENTS = {
    "equilibrium": _run_equilibrium,
    "simulate": _run_simulate,
    "sweep": _run_sweep,
    "recurve": _run_recurve,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="creditcycles",
        description="credit-market simulations driven by the belief distribution of wealth")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to key=value config file")
        p.add_argument("--seed", type=int, default=None, help="overrides run.seed")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--periods", type=int, default=None, help="overrides run.periods")
        p.add_argument("--jobs", type=int, default=None,
                       help="worker processes for sweep cells (default: all cores)")
    return parser


def run(argv: list[str]) -> int:
    """Execute a subcommand; returns the process exit code."""
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0

    config_path = Path(args.config)
    try:
        text = config_path.read_text()
    except OSError as exc:
        print(f"error: cannot read config {config_path}: {exc}", file=sys.stderr)
        return 1

    try:
        cfg = parse_config(text, kind=args.command)
        spec = build_spec(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    report = spec.validation()
    if not report.ok:
        print("invalid economy configuration:", file=sys.stderr)
        print(str(report), file=sys.stderr)
        return 1

    started = time.time()
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        checksums = _EXPERIMENTS[args.command](cfg, spec, out, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except InvalidSpecError as exc:
        print(f"invalid economy configuration:\n{exc.report}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # argument validation raised by the library (bad seed, T < 1, ...)
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (RuntimeError, FloatingPointError, ZeroDivisionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2

    manifest = {
        "tool": "creditcycles",
        "version": __version__,
        "command": args.command,
        "config": cfg.params,
        "seed": args.seed,
        "periods": args.periods,
        "jobs": args.jobs,
        "wall_clock_seconds": round(time.time() - started, 6),
        "outputs": checksums,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {', '.join(checksums)} and manifest.json to {out}")
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
