"""
sweep.py - evaluate observables over 2-D parameter planes.

A plane has an x and a y axis drawn from {theta, phi, omega0, delta}; every
other parameter (including the evaluation time) is fixed. Rows of the grid
are independent work units. Each row writes into its own slice of the
preallocated output, so the result does not depend on the worker count.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from pulsefisher.bloch import EPS_PHYS, TWO_PI, Angles, initial_bloch
from pulsefisher.entropy import DEFAULT_LOG_BASE, check_log_base, info_from_norm
from pulsefisher.errors import InvalidPlane
from pulsefisher.propagator import PropagatorMode, exact_rows, matvec, paper_rows
from pulsefisher.qfi import EstimableParameter, d_initial_bloch, qfi_from_vectors

DEFAULT_RESOLUTION = 200
DEFAULT_TIME = 1.0
FIGURE_OMEGA0_RANGE = (0.005, 1.0)
FIGURE_DELTA_RANGE = (0.0, 1.0)

ASSUMPTIONS = (
    "evaluation time t defaults to 1 (tau = omega0 numerically); the source figures do not state t",
    "omega0 axis for figures spans [0.005, 1]; omega0 = 0 is excluded because delta/omega0 diverges",
    "delta axis for figures spans [0, 1]; the source figures print no axis limits",
    "entropy logarithm base defaults to 2 (bits); the source writes log without a base",
    "paper mode uses the printed closed-form coefficients verbatim; the trailing 'eta = Omega0 t' is read as tau",
)


class Param(str, enum.Enum):
    THETA = "theta"
    PHI = "phi"
    OMEGA0 = "omega0"
    DELTA = "delta"


ALL_FIXED = ("theta", "phi", "omega0", "delta", "time")


class Observable(str, enum.Enum):
    QFI_THETA = "qfi_theta"
    QFI_PHI = "qfi_phi"
    I_COD = "i_cod"
    S_NORM = "s_norm"


OBSERVABLE_ORDER = tuple(Observable)


def _check_value(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise InvalidPlane(f"{name} must be finite, got {value!r}")
    if name == "theta" and not 0.0 <= value <= math.pi:
        raise InvalidPlane(f"theta must lie in [0, pi], got {value!r}")
    if name == "phi" and not 0.0 <= value <= TWO_PI:
        raise InvalidPlane(f"phi must lie in [0, 2pi], got {value!r}")
    if name == "omega0" and not value > 0.0:
        raise InvalidPlane(f"omega0 must be > 0, got {value!r}")
    if name in ("delta", "time") and not value >= 0.0:
        raise InvalidPlane(f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class Axis:
    param: Param
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        try:
            param = Param(self.param)
        except ValueError:
            raise InvalidPlane(f"unknown axis parameter {self.param!r}") from None
        object.__setattr__(self, "param", param)
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if int(self.n) != self.n or self.n < 2:
            raise InvalidPlane(f"{param.value} axis needs at least 2 points, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        _check_value(param.value, self.lo)
        _check_value(param.value, self.hi)
        if not self.lo < self.hi:
            raise InvalidPlane(f"{param.value} axis needs lo < hi, got [{self.lo!r}, {self.hi!r}]")

    def nodes(self) -> list[float]:
        """Uniform nodes; each computed directly from its index, endpoints exact."""
        span = self.hi - self.lo
        last = self.n - 1
        out = [self.lo + i * span / last for i in range(last)]
        out.append(self.hi)
        return out

    def to_dict(self) -> dict:
        return {"name": self.param.value, "lo": self.lo, "hi": self.hi, "n": self.n}


@dataclass(frozen=True)
class SweepPlane:
    x: Axis
    y: Axis
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.x.param is self.y.param:
            raise InvalidPlane(f"x and y axes must differ, both are {self.x.param.value}")
        fixed = {str(k): float(v) for k, v in dict(self.fixed).items()}
        axes = {self.x.param.value, self.y.param.value}
        needed = [k for k in ALL_FIXED if k not in axes]
        clash = sorted(axes & fixed.keys())
        if clash:
            raise InvalidPlane(f"{', '.join(clash)} is swept and cannot also be fixed")
        unknown = sorted(fixed.keys() - set(ALL_FIXED))
        if unknown:
            raise InvalidPlane(f"unknown fixed parameter(s): {', '.join(unknown)}")
        missing = [k for k in needed if k not in fixed]
        if missing:
            raise InvalidPlane(f"missing fixed value(s) for: {', '.join(missing)}")
        for k in needed:
            _check_value(k, fixed[k])
        object.__setattr__(self, "fixed", {k: fixed[k] for k in needed})

    @property
    def time(self) -> float:
        return self.fixed["time"]

    def point(self, xv: float, yv: float) -> dict:
        out = dict(self.fixed)
        out[self.x.param.value] = xv
        out[self.y.param.value] = yv
        return out


def normalize_observables(observables) -> tuple[Observable, ...]:
    wanted = {Observable(o) for o in observables}
    if not wanted:
        raise ValueError("at least one observable is required")
    return tuple(o for o in OBSERVABLE_ORDER if o in wanted)


_ROW_BUILDERS = {PropagatorMode.EXACT: exact_rows, PropagatorMode.PAPER_LITERAL: paper_rows}


def evaluate_cell(omega0, delta, t, theta, phi, mode, observables, log_base=DEFAULT_LOG_BASE, rows=None):
    """Evaluate one grid node.

    Returns ``(s_norm, ok, values)`` with ``values`` aligned to
    ``observables``; ``ok`` is False (and values are None) when the evolved
    Bloch vector is non-physical. Numerically identical to the public
    ``qfi_bloch`` / ``encoded_information`` calls at the same point.
    """
    if rows is None:
        rows = _ROW_BUILDERS[PropagatorMode(mode)](delta / omega0, omega0 * t)
    angles = Angles(theta, phi)
    s = matvec(rows, initial_bloch(angles).as_tuple())
    r = math.hypot(*s)
    if r > 1.0 + EPS_PHYS:
        return r, False, None
    values = []
    for obs in observables:
        if obs is Observable.QFI_THETA:
            ds = matvec(rows, d_initial_bloch(angles, EstimableParameter.THETA).as_tuple())
            values.append(qfi_from_vectors(s, ds).value)
        elif obs is Observable.QFI_PHI:
            ds = matvec(rows, d_initial_bloch(angles, EstimableParameter.PHI).as_tuple())
            values.append(qfi_from_vectors(s, ds).value)
        elif obs is Observable.I_COD:
            values.append(info_from_norm(r, log_base).value)
        else:
            values.append(r)
    return r, True, values


def _run_row(args):
    plane, mode, observables, log_base, yv = args
    t = plane.time
    cache = {}
    out = []
    for xv in plane.x.nodes():
        p = plane.point(xv, yv)
        key = (p["omega0"], p["delta"])
        rows = cache.get(key)
        if rows is None:
            rows = cache[key] = _ROW_BUILDERS[mode](p["delta"] / p["omega0"], p["omega0"] * t)
        out.append(evaluate_cell(p["omega0"], p["delta"], t, p["theta"], p["phi"], mode, observables, log_base, rows))
    return out


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """Result of a sweep. Arrays have shape (y.n, x.n); NaN marks non-physical cells."""

    plane: SweepPlane
    mode: PropagatorMode
    observables: tuple
    x_nodes: np.ndarray
    y_nodes: np.ndarray
    values: dict
    s_norm: np.ndarray
    ok: np.ndarray
    log_base: float = DEFAULT_LOG_BASE

    @property
    def shape(self) -> tuple[int, int]:
        return self.ok.shape

    @property
    def nonphysical_count(self) -> int:
        return int(np.count_nonzero(~self.ok))

    def status(self, j: int, i: int) -> str:
        return "ok" if self.ok[j, i] else "nonphysical"


def run_sweep(plane: SweepPlane, mode, observables, *, jobs: int = 1, log_base: float = DEFAULT_LOG_BASE) -> SweepGrid:
    """Evaluate ``observables`` on every node of ``plane``.

    Non-physical cells are marked rather than raised. ``jobs > 1`` spreads
    rows over worker processes; the output is identical for any ``jobs``.
    """
    mode = PropagatorMode(mode)
    obs = normalize_observables(observables)
    log_base = check_log_base(log_base)
    xs = plane.x.nodes()
    ys = plane.y.nodes()
    nx, ny = len(xs), len(ys)

    tasks = [(plane, mode, obs, log_base, yv) for yv in ys]
    if jobs > 1 and ny > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_row, tasks, chunksize=max(1, ny // (4 * jobs))))
    else:
        results = [_run_row(t) for t in tasks]

    s_norm = np.empty((ny, nx))
    ok = np.empty((ny, nx), dtype=bool)
    values = {o: np.full((ny, nx), np.nan) for o in obs}
    for j, row in enumerate(results):
        for i, (r, good, vals) in enumerate(row):
            s_norm[j, i] = r
            ok[j, i] = good
            if good:
                for o, v in zip(obs, vals):
                    values[o][j, i] = v
    return SweepGrid(plane, mode, obs, np.array(xs), np.array(ys), values, s_norm, ok, log_base)


@dataclass(frozen=True)
class FigureSpec:
    figure: str
    plane: SweepPlane
    observables: tuple
    caption: str


def figure_suite(
    resolution: int = DEFAULT_RESOLUTION,
    time: float = DEFAULT_TIME,
    omega0_range: tuple[float, float] = FIGURE_OMEGA0_RANGE,
    delta_range: tuple[float, float] = FIGURE_DELTA_RANGE,
) -> list[FigureSpec]:
    """The nine contour planes of the reference figures."""
    n = resolution

    def theta_axis():
        return Axis(Param.THETA, 0.0, math.pi, n)

    def phi_axis():
        return Axis(Param.PHI, 0.0, TWO_PI, n)

    def omega_axis():
        return Axis(Param.OMEGA0, omega0_range[0], omega0_range[1], n)

    def delta_axis():
        return Axis(Param.DELTA, delta_range[0], delta_range[1], n)

    qt, ic, qp = (Observable.QFI_THETA,), (Observable.I_COD,), (Observable.QFI_PHI,)
    rows = [
        ("fig1", theta_axis(), omega_axis(), {"delta": 0.2, "phi": math.pi}, qt, "F_theta in (theta, omega0), delta=0.2, phi=pi"),
        ("fig2", theta_axis(), omega_axis(), {"delta": 0.2, "phi": math.pi}, ic, "I_cod in (theta, omega0), delta=0.2, phi=pi"),
        ("fig3", theta_axis(), omega_axis(), {"delta": 0.9, "phi": math.pi}, qt, "F_theta in (theta, omega0), delta=0.9, phi=pi"),
        ("fig4", theta_axis(), omega_axis(), {"delta": 0.9, "phi": math.pi}, ic, "I_cod in (theta, omega0), delta=0.9, phi=pi"),
        ("fig5", theta_axis(), delta_axis(), {"omega0": 0.1, "phi": math.pi}, qt, "F_theta in (theta, delta), omega0=0.1, phi=pi"),
        ("fig6", theta_axis(), delta_axis(), {"omega0": 0.1, "phi": math.pi}, ic, "I_cod in (theta, delta), omega0=0.1, phi=pi"),
        ("fig7", phi_axis(), delta_axis(), {"omega0": 0.5, "theta": math.pi}, qp, "F_phi in (phi, delta), omega0=0.5, theta=pi"),
        ("fig8", phi_axis(), delta_axis(), {"omega0": 0.5, "theta": math.pi}, ic, "I_cod in (phi, delta), omega0=0.5, theta=pi"),
        ("fig9", phi_axis(), delta_axis(), {"omega0": 0.5, "theta": 0.0}, ic, "I_cod in (phi, delta), omega0=0.5, theta=0"),
    ]
    return [
        FigureSpec(fig, SweepPlane(x, y, {**fixed, "time": float(time)}), obs, caption)
        for fig, x, y, fixed, obs, caption in rows
    ]
