"""
Command-line front end.

    pulsefisher point    --theta pi/2 --phi pi --omega0 0.5 --delta 0.2 --time 1
    pulsefisher sweep    --x theta:0:pi:50 --y omega0:0.005:1:50 --delta 0.2 --phi pi --out g.csv
    pulsefisher figures  --mode both --out-dir figs
    pulsefisher validate --seed 42

Exit codes: 0 success, 1 validation failure, 2 usage or domain error,
3 non-physical state at a point evaluation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from pulsefisher import __version__
from pulsefisher.bloch import TWO_PI, Angles, PulseConfig, initial_bloch, physical_norm
from pulsefisher.entropy import DEFAULT_LOG_BASE, encoded_information
from pulsefisher.errors import NonPhysicalState, PulseFisherError
from pulsefisher.output import build_report, dump_json, write_gnuplot, write_grid
from pulsefisher.propagator import PropagatorMode, evolve, propagator
from pulsefisher.qfi import EstimableParameter, qfi_bloch
from pulsefisher.sweep import (
    DEFAULT_RESOLUTION,
    DEFAULT_TIME,
    FIGURE_DELTA_RANGE,
    FIGURE_OMEGA0_RANGE,
    Axis,
    Observable,
    SweepPlane,
    figure_suite,
    run_sweep,
)

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_NONPHYSICAL = 0, 1, 2, 3

OBSERVABLE_FLAGS = {
    "qfi-theta": (Observable.QFI_THETA,),
    "qfi-phi": (Observable.QFI_PHI,),
    "icod": (Observable.I_COD,),
    "s-norm": (Observable.S_NORM,),
    "all": (Observable.QFI_THETA, Observable.QFI_PHI, Observable.I_COD),
}
MODE_FLAGS = {"exact": PropagatorMode.EXACT, "paper": PropagatorMode.PAPER_LITERAL}

_ANGLE_RE = re.compile(r"^\s*(?P<k>\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(?P<m>\d+(?:\.\d*)?))?\s*$")


class UsageError(Exception):
    """Bad flag value; the message names the flag."""


def parse_number(text: str) -> float:
    """Float, or a multiple of pi written as 'pi', 'pi/2', '2pi', '3pi/4'."""
    m = _ANGLE_RE.match(text)
    if m:
        k = float(m.group("k")) if m.group("k") else 1.0
        val = math.pi if k == 1.0 else (TWO_PI if k == 2.0 else k * math.pi)
        if m.group("m"):
            val = val / float(m.group("m"))
        return val
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def parse_axis(text: str) -> tuple[str, float, float, int]:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"axis must look like name:lo:hi:n, got {text!r}")
    name, lo, hi, n = parts
    if name not in ("theta", "phi", "omega0", "delta"):
        raise argparse.ArgumentTypeError(f"axis name must be theta, phi, omega0 or delta, got {name!r}")
    try:
        count = int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"point count must be an integer, got {n!r}") from None
    return name, parse_number(lo), parse_number(hi), count


def parse_range(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"range must look like lo:hi, got {text!r}")
    return parse_number(parts[0]), parse_number(parts[1])


@dataclass
class RunConfig:
    """Validated command configuration. Unknown keys are rejected."""

    theta: float | None = None
    phi: float | None = None
    omega0: float | None = None
    delta: float | None = None
    time: float = DEFAULT_TIME
    mode: str = "exact"
    observables: tuple = ()
    log_base: float = DEFAULT_LOG_BASE
    resolution: int = DEFAULT_RESOLUTION
    jobs: int = 1
    out: str | None = None
    out_dir: str | None = None
    gnuplot: str | None = None

    @classmethod
    def from_mapping(cls, values: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise UsageError(f"unknown configuration key(s): {', '.join(unknown)}")
        cfg = cls(**{k: v for k, v in values.items() if v is not None})
        cfg.validate()
        return cfg

    def validate(self) -> None:
        def need(cond, flag, msg):
            if not cond:
                raise UsageError(f"--{flag}: {msg}")

        for name in ("theta", "phi", "omega0", "delta", "time", "log_base"):
            v = getattr(self, name)
            if v is not None:
                need(math.isfinite(v), name.replace("_", "-"), f"must be finite, got {v!r}")
        if self.theta is not None:
            need(0.0 <= self.theta <= math.pi, "theta", f"theta must lie in [0, pi], got {self.theta!r}")
        if self.phi is not None:
            need(0.0 <= self.phi <= TWO_PI, "phi", f"phi must lie in [0, 2pi], got {self.phi!r}")
        if self.omega0 is not None:
            need(self.omega0 > 0.0, "omega0", f"omega0 must be > 0, got {self.omega0!r}")
        if self.delta is not None:
            need(self.delta >= 0.0, "delta", f"delta must be >= 0, got {self.delta!r}")
        need(self.time >= 0.0, "time", f"time must be >= 0, got {self.time!r}")
        need(self.mode in ("exact", "paper", "both"), "mode", f"unknown mode {self.mode!r}")
        need(self.log_base >= 2.0, "log-base", f"log base must be >= 2, got {self.log_base!r}")
        need(self.resolution >= 2, "resolution", f"resolution must be >= 2, got {self.resolution!r}")
        need(self.jobs >= 1, "jobs", f"jobs must be >= 1, got {self.jobs!r}")


def _config(args, keys) -> RunConfig:
    return RunConfig.from_mapping({k: getattr(args, k) for k in keys})


# --- point -----------------------------------------------------------------

def cmd_point(args) -> int:
    cfg = _config(args, ("theta", "phi", "omega0", "delta", "time", "mode", "log_base"))
    for flag in ("theta", "phi", "omega0", "delta"):
        if getattr(cfg, flag) is None:
            raise UsageError(f"--{flag} is required")
    if cfg.mode == "both":
        raise UsageError("--mode: point evaluation takes exact or paper")
    mode = MODE_FLAGS[cfg.mode]
    observables = OBSERVABLE_FLAGS[args.observable]
    pulse = PulseConfig(cfg.omega0, cfg.delta, cfg.time)
    angles = Angles(cfg.theta, cfg.phi)
    s = evolve(propagator(pulse, cfg.time, mode), initial_bloch(angles))
    record = {
        "input": {"theta": cfg.theta, "phi": cfg.phi, "omega0": cfg.omega0, "delta": cfg.delta,
                  "time": cfg.time, "mode": cfg.mode, "log_base": cfg.log_base},
        "s_t": list(s.as_tuple()),
        "s_norm": s.norm(),
    }
    try:
        physical_norm(s.norm())
        obs_out = {}
        for obs in observables:
            if obs is Observable.I_COD:
                obs_out[obs.value] = {"value": encoded_information(pulse, cfg.time, angles, mode, cfg.log_base).value}
            elif obs is Observable.S_NORM:
                obs_out[obs.value] = {"value": s.norm()}
            else:
                param = EstimableParameter.THETA if obs is Observable.QFI_THETA else EstimableParameter.PHI
                res = qfi_bloch(pulse, cfg.time, angles, param, mode)
                obs_out[obs.value] = {"value": res.value, "branch": res.branch.value}
    except NonPhysicalState as exc:
        record["status"] = "nonphysical"
        print(json.dumps(record, indent=2))
        print(f"error: non-physical evolved state, |s| = {exc.s_norm!r}", file=sys.stderr)
        return EXIT_NONPHYSICAL
    record["status"] = "ok"
    record["observables"] = obs_out
    print(json.dumps(record, indent=2))
    return EXIT_OK


# --- sweep -----------------------------------------------------------------

def cmd_sweep(args) -> int:
    cfg = _config(args, ("theta", "phi", "omega0", "delta", "time", "mode", "log_base", "jobs", "out", "gnuplot"))
    if cfg.mode == "both":
        raise UsageError("--mode: sweep takes exact or paper")
    (xn, xlo, xhi, xc), (yn, ylo, yhi, yc) = args.x, args.y
    if xn == yn:
        raise UsageError(f"--x/--y: both axes sweep {xn}")
    fixed = {"time": cfg.time}
    for name in ("theta", "phi", "omega0", "delta"):
        v = getattr(cfg, name)
        if name in (xn, yn):
            if v is not None:
                raise UsageError(f"--{name}: {name} is swept and cannot also be fixed")
        elif v is None:
            raise UsageError(f"--{name} is required when {name} is not an axis")
        else:
            fixed[name] = v
    try:
        plane = SweepPlane(Axis(xn, xlo, xhi, xc), Axis(yn, ylo, yhi, yc), fixed)
    except PulseFisherError as exc:
        raise UsageError(f"--x/--y: {exc}") from None
    observables = tuple(o for flag in (args.observable or ["all"]) for o in OBSERVABLE_FLAGS[flag])
    out = Path(cfg.out)
    if not out.parent.is_dir():
        raise UsageError(f"--out: directory {str(out.parent)!r} does not exist")

    grid = run_sweep(plane, MODE_FLAGS[cfg.mode], observables, jobs=cfg.jobs, log_base=cfg.log_base)
    written = write_grid(grid, out)
    if cfg.gnuplot:
        try:
            write_gnuplot(grid, out, cfg.gnuplot)
        except OSError:
            for p in written:
                p.unlink(missing_ok=True)
            raise
    print(f"wrote {out} ({grid.ok.size} cells, {grid.nonphysical_count} non-physical)")
    return EXIT_OK


# --- figures ---------------------------------------------------------------

def cmd_figures(args) -> int:
    cfg = _config(args, ("mode", "time", "resolution", "jobs", "log_base", "out_dir"))
    out_dir = Path(cfg.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"--out-dir: cannot create {str(out_dir)!r}: {exc.strerror}") from None
    if not os.access(out_dir, os.W_OK):
        raise UsageError(f"--out-dir: {str(out_dir)!r} is not writable")
    modes = ["exact", "paper"] if cfg.mode == "both" else [cfg.mode]
    try:
        suite = figure_suite(cfg.resolution, cfg.time, args.omega0_range, args.delta_range)
    except PulseFisherError as exc:
        raise UsageError(f"--omega0-range/--delta-range: {exc}") from None

    grids = {}
    for spec in suite:
        for mode in modes:
            grids[(spec.figure, mode)] = run_sweep(spec.plane, MODE_FLAGS[mode], spec.observables,
                                                   jobs=cfg.jobs, log_base=cfg.log_base)
    written = []
    try:
        for (fig, mode), grid in grids.items():
            csv_path = out_dir / f"{fig}_{mode}.csv"
            written += write_grid(grid, csv_path, figure=fig)
            if args.gnuplot:
                gp = out_dir / f"{fig}_{mode}.gp"
                write_gnuplot(grid, csv_path, gp)
                written.append(gp)
        report = out_dir / "report.json"
        dump_json(build_report(grids, cfg.resolution, cfg.time, cfg.log_base), report)
        written.append(report)
    except BaseException:
        for p in written:
            p.unlink(missing_ok=True)
        raise
    print(f"wrote {len(grids)} grids and report.json to {out_dir}")
    return EXIT_OK


# --- validate --------------------------------------------------------------

def cmd_validate(args) -> int:
    from pulsefisher.validation import run_all

    checks = run_all(args.seed)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if c.hard and not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed" if not failed
          else f"{len(failed)} hard check(s) failed")
    return EXIT_VALIDATION if failed else EXIT_OK


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pulsefisher", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fixed_required=False):
        for name, what in (("theta", "polar angle [0, pi]"), ("phi", "azimuth [0, 2pi]"),
                           ("omega0", "Rabi strength > 0"), ("delta", "detuning >= 0")):
            p.add_argument(f"--{name}", type=parse_number, required=fixed_required, help=what + "; 'pi' literals allowed")
        p.add_argument("--time", type=parse_number, default=DEFAULT_TIME, help="evaluation time (= pulse duration), default 1")
        p.add_argument("--mode", choices=["exact", "paper"], default="exact")
        p.add_argument("--log-base", type=float, default=DEFAULT_LOG_BASE, help="entropy log base, default 2")

    p = sub.add_parser("point", help="evaluate observables at one parameter point")
    common(p, fixed_required=True)
    p.add_argument("--observable", choices=list(OBSERVABLE_FLAGS), default="all")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="evaluate observables over a 2-D grid")
    p.add_argument("--x", type=parse_axis, required=True, metavar="NAME:LO:HI:N")
    p.add_argument("--y", type=parse_axis, required=True, metavar="NAME:LO:HI:N")
    common(p)
    p.add_argument("--observable", choices=list(OBSERVABLE_FLAGS), action="append")
    p.add_argument("--out", required=True, help="CSV path; metadata goes to <stem>.meta.json")
    p.add_argument("--gnuplot", help="also write a gnuplot script here")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figures", help="reproduce the nine figure planes")
    p.add_argument("--mode", choices=["exact", "paper", "both"], default="both")
    p.add_argument("--out-dir", default="figures")
    p.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
    p.add_argument("--time", type=parse_number, default=DEFAULT_TIME)
    p.add_argument("--omega0-range", type=parse_range, default=FIGURE_OMEGA0_RANGE, metavar="LO:HI")
    p.add_argument("--delta-range", type=parse_range, default=FIGURE_DELTA_RANGE, metavar="LO:HI")
    p.add_argument("--log-base", type=float, default=DEFAULT_LOG_BASE)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--gnuplot", action="store_true", help="write a gnuplot script per grid")
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("validate", help="run the cross-check suite")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PulseFisherError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
