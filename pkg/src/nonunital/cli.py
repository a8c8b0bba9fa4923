"""Command-line front end.

    nonunital analyze gadc [--omega W] [--fixed-p P] [options]
    nonunital analyze tabulated FILE [options]
    nonunital channel FILE

``analyze`` writes ``measures.json`` and ``traces.csv`` (or ``traces.json``)
into ``--out-dir``. Exit codes: 0 ok, 2 bad configuration, 3 invalid input
file, 4 numerical failure.
"""
import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, distances
from .channels import (affine_from_transfer, choi_from_transfer, choi_min_eigenvalue,
                       evolved_densities, is_cp, is_unital)
from .errors import DomainError, NonInvertibleProcessError, NotAStateError, SingularDistanceError
from .fileformats import load_channel, load_process
from .gadc import GadcProcessParams, gadc_process
from .measures import (OptimizerConfig, blp_measure, nonunital_nm_measure, nonunitality_measure,
                       trajectory_bloch)
from .processes import TimeGrid, rhp_g_trace, rhp_measure
from .quadrature import central_derivative
from .states import purity

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4

MEASURES = ("blp", "rhp", "nonunitality", "nonunital-nm")
TRACE_COLUMNS = ("t", "trace_distance", "bures_distance", "g", "sigma_nu", "purity")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    source: str = "gadc"  # "gadc" or "tabulated"
    path: str = None
    omega: float = 5.0
    fixed_p: float = None
    t_max: float = 20.0
    n: int = 4001
    eps: float = 1e-5
    measures: tuple = MEASURES
    distance: str = "bures"
    seed: int = 0
    out_dir: str = "."
    fmt: str = "csv"
    tau: float = None

    def validate(self):
        if self.source not in ("gadc", "tabulated"):
            raise ConfigError(f"unknown process source {self.source!r}")
        if self.source == "tabulated" and not self.path:
            raise ConfigError("tabulated process needs a file")
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise ConfigError(f"--t-max must be positive, got {self.t_max}")
        if self.n < 2:
            raise ConfigError(f"--n must be at least 2, got {self.n}")
        if not (math.isfinite(self.eps) and self.eps > 0):
            raise ConfigError(f"--eps must be positive, got {self.eps}")
        if not (math.isfinite(self.omega) and self.omega >= 0):
            raise ConfigError(f"--omega must be >= 0, got {self.omega}")
        if self.fixed_p is not None and not 0 <= self.fixed_p <= 1:
            raise ConfigError(f"--fixed-p must lie in [0, 1], got {self.fixed_p}")
        unknown = sorted(set(self.measures) - set(MEASURES))
        if unknown or not self.measures:
            raise ConfigError(f"--measures must be a non-empty subset of {','.join(MEASURES)}")
        if self.distance not in distances.DISTANCES:
            raise ConfigError(f"--distance must be one of {'|'.join(distances.DISTANCES)}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"--format must be csv or json, got {self.fmt!r}")
        if self.tau is not None and not 0 <= self.tau <= self.t_max:
            raise ConfigError(f"--tau must lie in [0, t_max], got {self.tau}")

    def to_dict(self):
        return {"source": self.source, "path": self.path, "omega": self.omega,
                "fixed_p": self.fixed_p, "t_max": self.t_max, "n": self.n, "eps": self.eps,
                "measures": list(self.measures), "distance": self.distance, "seed": self.seed,
                "format": self.fmt, "tau": self.tau}


def _load(config):
    if config.source == "gadc":
        return gadc_process(GadcProcessParams(config.omega), fixed_p=config.fixed_p)
    return load_process(config.path)


def _traces(process, grid, tau, distance, g):
    """Columns of the trace table for the pair (1/d, E_tau(1/d)) evolved to each t."""
    t = grid.points
    transfers = process.transfers(t)
    d = process.dim
    zero = np.zeros(d * d - 1)
    b_tau = trajectory_bloch(process, [tau])[0] if tau > 0 else zero
    rho0 = evolved_densities(transfers, zero)
    rho_tau = evolved_densities(transfers, b_tau)
    chosen = distances.get_distance(distance)(rho0, rho_tau)
    return {
        "t": t,
        "trace_distance": distances.trace_distance(rho0, rho_tau),
        "bures_distance": distances.bures_distance(rho0, rho_tau),
        "g": g,
        "sigma_nu": central_derivative(chosen, t),
        "purity": purity(rho0, check=False),
    }


def _write_traces(columns, out_dir, fmt):
    if fmt == "csv":
        path = out_dir / "traces.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(TRACE_COLUMNS)
            for row in zip(*(columns[c] for c in TRACE_COLUMNS)):
                w.writerow(["%.17g" % v for v in row])
    else:
        path = out_dir / "traces.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({c: np.asarray(columns[c]).tolist() for c in TRACE_COLUMNS}, fh,
                      sort_keys=True)
            fh.write("\n")
    return path


def run(config: RunConfig, out=sys.stdout) -> int:
    """Evaluate the selected measures and write the output files; returns the exit status."""
    try:
        config.validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        process = _load(config)
    except (OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if config.t_max > process.t_end:
        print(f"config error: --t-max {config.t_max} exceeds the tabulated range "
              f"[0, {process.t_end}]", file=sys.stderr)
        return EXIT_CONFIG

    grid = TimeGrid(config.t_max, config.n)
    opt = OptimizerConfig(seed=config.seed)
    reports = {}
    try:
        # fixed order keeps the output independent of how measures are requested
        for name in MEASURES:
            if name not in config.measures:
                continue
            if name == "blp":
                reports[name] = blp_measure(process, grid, opt)
            elif name == "rhp":
                reports[name] = rhp_measure(process, grid, config.eps)
            elif name == "nonunitality":
                reports[name] = nonunitality_measure(process, grid, opt)
            else:
                reports[name] = nonunital_nm_measure(process, grid, config.distance)

        if config.tau is not None:
            tau, tau_source = config.tau, "--tau"
        else:
            nm = reports.get("nonunital-nm") or nonunital_nm_measure(process, grid, config.distance)
            tau, tau_source = nm.maximizer["tau"], "nonunital-nm maximizer"
        g = reports["rhp"].trace["g"] if "rhp" in reports else \
            rhp_g_trace(process, grid.points, config.eps)
        columns = _traces(process, grid, tau, config.distance, g)
    except (NonInvertibleProcessError, SingularDistanceError, DomainError, NotAStateError,
            ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc = {
        "version": __version__,
        "process": process.label,
        "config": config.to_dict(),
        "traces": {"tau": tau, "tau_source": tau_source, "columns": list(TRACE_COLUMNS)},
        "measures": {name: r.to_dict() for name, r in reports.items()},
    }
    with open(out_dir / "measures.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    traces_path = _write_traces(columns, out_dir, config.fmt)
    for name, r in reports.items():
        print(f"{name:<14} {r.value:.10g}", file=out)
    print(f"wrote {out_dir / 'measures.json'} and {traces_path}", file=out)
    return EXIT_OK


def channel_summary(path) -> dict:
    t = load_channel(path)
    a = affine_from_transfer(t)
    c = choi_from_transfer(t)
    return {
        "dim": t.dim,
        "unital": bool(is_unital(a)),
        "completely_positive": bool(is_cp(c)),
        "choi_min_eigenvalue": choi_min_eigenvalue(c),
        "m": np.asarray(a.m).tolist(),
        "c": np.asarray(a.c).tolist(),
    }


def _measure_list(text):
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in names if s not in MEASURES]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown measure(s) {','.join(bad) or '(none)'}; choose from {','.join(MEASURES)}")
    return names


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nonunital", description="Non-Markovianity and non-unitality diagnostics.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--t-max", type=float, default=20.0)
    common.add_argument("--n", type=int, default=4001, help="number of grid points")
    common.add_argument("--eps", type=float, default=1e-5, help="finite-difference step for g(t)")
    common.add_argument("--measures", type=_measure_list, default=MEASURES,
                        help="comma-separated subset of " + ",".join(MEASURES))
    common.add_argument("--distance", choices=sorted(distances.DISTANCES), default="bures")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out-dir", default=".")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv",
                        help="format of the traces file")
    common.add_argument("--tau", type=float, default=None,
                        help="trajectory time for the traces (default: nonunital-nm maximizer)")

    analyze = sub.add_parser("analyze", help="evaluate measures on a process")
    kinds = analyze.add_subparsers(dest="source", required=True)
    g = kinds.add_parser("gadc", parents=[common], help="built-in GADC process")
    g.add_argument("--omega", type=float, default=5.0)
    g.add_argument("--fixed-p", type=float, default=None,
                   help="hold p constant (0.5 gives a unital process)")
    tab = kinds.add_parser("tabulated", parents=[common], help="process read from a JSON file")
    tab.add_argument("path")

    ch = sub.add_parser("channel", help="summarize a single transfer matrix file")
    ch.add_argument("path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "channel":
        try:
            summary = channel_summary(args.path)
        except (OSError, ValueError) as exc:
            print(f"input error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        print(json.dumps(summary, indent=2, sort_keys=True))
        return EXIT_OK

    config = RunConfig(
        source=args.source, path=getattr(args, "path", None),
        omega=getattr(args, "omega", 5.0), fixed_p=getattr(args, "fixed_p", None),
        t_max=args.t_max, n=args.n, eps=args.eps, measures=tuple(args.measures),
        distance=args.distance, seed=args.seed, out_dir=args.out_dir, fmt=args.fmt,
        tau=args.tau)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
