"""
propagator.py - the 3x3 matrix A(t) with s(t) = A(t) s(0) during the pulse.

Equations of motion for the Bloch components while the pulse is on:

    ds_x/dt = -Delta s_y
    ds_y/dt =  Delta s_x - Omega0 s_z
    ds_z/dt =  Omega0 s_y

i.e. ds/dt = w x s with w = (Omega0, 0, Delta). Three ways to get A:

  * exact:  Rodrigues rotation about n = (1, 0, delta)/sqrt(eta) by the
            angle tau sqrt(eta), delta = Delta/Omega0, eta = 1 + delta^2,
            tau = Omega0 t.
  * paper:  the published closed-form coefficients, transcribed as printed.
            Not orthogonal, so |s| is not conserved.
  * RK4:    fixed-step numerical integration of the equations above, used
            only as an oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from pulsefisher.bloch import BlochVector, PulseConfig
from pulsefisher.errors import InvalidStep, InvalidTime

Rows = tuple[tuple[float, float, float], tuple[float, float, float], tuple[float, float, float]]


class PropagatorMode(str, enum.Enum):
    EXACT = "exact"
    PAPER_LITERAL = "paper"


@dataclass(frozen=True, eq=False)
class Propagator:
    """Evolution matrix ``a`` (read-only 3x3 array) tagged with how it was built."""

    a: np.ndarray
    mode: PropagatorMode
    tau: float
    delta_ratio: float

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        if a.shape != (3, 3):
            raise ValueError(f"propagator matrix must be 3x3, got shape {a.shape}")
        a.flags.writeable = False
        object.__setattr__(self, "a", a)

    @property
    def rows(self) -> Rows:
        return tuple(tuple(r) for r in self.a.tolist())

    def orthogonality_defect(self) -> float:
        """max |A^T A - I|."""
        return float(np.max(np.abs(self.a.T @ self.a - np.eye(3))))


@dataclass(frozen=True)
class AppendixIntermediates:
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float
    c: float


def check_time(cfg: PulseConfig, t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0.0 or t > cfg.duration:
        raise InvalidTime(f"t = {t!r} lies outside the pulse window [0, {cfg.duration!r}]")
    return t


def exact_rows(delta_ratio: float, tau: float) -> Rows:
    d = delta_ratio
    eta = 1.0 + d * d
    sq = math.sqrt(eta)
    alpha = tau * sq
    c = math.cos(alpha)
    sn = math.sin(alpha) / sq
    # 1 - cos(alpha), without cancellation at small angles
    vers = 2.0 * math.sin(0.5 * alpha) ** 2 / eta
    return (
        (1.0 - d * d * vers, -d * sn, d * vers),
        (d * sn, c, -sn),
        (d * vers, sn, 1.0 - vers),
    )


def appendix_values(delta_ratio: float, tau: float) -> AppendixIntermediates:
    d = delta_ratio
    eta = 1.0 + d * d
    sq = math.sqrt(eta)
    c = math.cos(tau * sq)
    lam1 = math.sin(tau * sq) / sq
    lam2 = d * d + c
    lam3 = 0.5 * eta * lam1 * lam1
    lam4 = 1.0 + (eta + d * d) * c
    return AppendixIntermediates(lam1, lam2, lam3, lam4, c)


def paper_rows(delta_ratio: float, tau: float) -> Rows:
    # Printed coefficients, verbatim except: the trailing "eta = Omega0 t" is
    # read as tau, a12's open parenthesis is closed at the end, and the stray
    # double comma in lambda2 is dropped.
    d = delta_ratio
    eta = 1.0 + d * d
    iv = appendix_values(d, tau)
    lam1, lam2, lam3, lam4, c = iv.lambda1, iv.lambda2, iv.lambda3, iv.lambda4, iv.c
    return (
        (1.0 / eta + d * d * c - d * lam1, 0.5 * (1.0 + lam2 / eta + d * lam1), (d / eta) * lam3 + lam1),
        (lam4 / (2.0 * eta) + lam1, c - d * lam1, (d / eta) * lam3 - d * lam1),
        ((d / eta) * lam3, lam1, lam2 / eta),
    )


_BUILDERS = {
    PropagatorMode.EXACT: lambda d, tau: exact_rows(d, tau),
    PropagatorMode.PAPER_LITERAL: lambda d, tau: paper_rows(d, tau),
}


def propagator(cfg: PulseConfig, t: float, mode: PropagatorMode) -> Propagator:
    """Build A(t) in the requested mode."""
    mode = PropagatorMode(mode)
    t = check_time(cfg, t)
    tau = cfg.tau(t)
    d = cfg.delta_ratio
    return Propagator(np.array(_BUILDERS[mode](d, tau)), mode, tau, d)


def propagator_exact(cfg: PulseConfig, t: float) -> Propagator:
    """Rotation matrix solving the Bloch equations exactly over [0, t].

    Examples
    --------
    >>> p = propagator_exact(PulseConfig(1.0, 0.0, 2.0), 0.0)
    >>> p.a.tolist()
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    """
    return propagator(cfg, t, PropagatorMode.EXACT)


def propagator_paper_literal(cfg: PulseConfig, t: float) -> Propagator:
    return propagator(cfg, t, PropagatorMode.PAPER_LITERAL)


def appendix_intermediates(cfg: PulseConfig, t: float) -> AppendixIntermediates:
    t = check_time(cfg, t)
    return appendix_values(cfg.delta_ratio, cfg.tau(t))


def matvec(rows: Rows, v) -> tuple[float, float, float]:
    # Plain left-to-right sums so every caller gets bitwise-identical results.
    x, y, z = v
    r0, r1, r2 = rows
    return (
        r0[0] * x + r0[1] * y + r0[2] * z,
        r1[0] * x + r1[1] * y + r1[2] * z,
        r2[0] * x + r2[1] * y + r2[2] * z,
    )


def evolve(p: Propagator, s0: BlochVector) -> BlochVector:
    """A @ s0."""
    return BlochVector(*matvec(p.rows, s0.as_tuple()))


def default_step(cfg: PulseConfig) -> float:
    return 1e-4 * min(1.0, 1.0 / cfg.omega0, 1.0 / max(cfg.delta_detuning, 1e-12))


def rk4_bloch(omega0, delta, states, t: float, step: float) -> np.ndarray:
    """Classical RK4 for a batch of Bloch vectors.

    ``omega0`` and ``delta`` broadcast against ``states[..., 0]``; ``states``
    has shape (..., 3). The last step is shortened to land exactly on t.
    """
    if not step > 0.0:
        raise InvalidStep(f"integration step must be > 0, got {step!r}")
    s = np.array(states, dtype=float, copy=True)
    om = np.asarray(omega0, dtype=float)
    de = np.asarray(delta, dtype=float)

    def rhs(v):
        out = np.empty_like(v)
        out[..., 0] = -de * v[..., 1]
        out[..., 1] = de * v[..., 0] - om * v[..., 2]
        out[..., 2] = om * v[..., 1]
        return out

    def advance(v, h):
        k1 = rhs(v)
        k2 = rhs(v + 0.5 * h * k1)
        k3 = rhs(v + 0.5 * h * k2)
        k4 = rhs(v + h * k3)
        return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    if t <= 0.0:
        return s
    n_full = int(math.floor(t / step))
    for _ in range(n_full):
        s = advance(s, step)
    rest = t - n_full * step
    if rest > 1e-14 * t:
        s = advance(s, rest)
    return s


def integrate_bloch_ode(cfg: PulseConfig, s0: BlochVector, t: float, step: float | None = None) -> BlochVector:
    """Integrate the Bloch equations numerically from 0 to t (RK4, fixed step).

    A step larger than t collapses to a single step of length t.
    """
    if step is None:
        step = default_step(cfg)
    step = float(step)
    if not step > 0.0:
        raise InvalidStep(f"integration step must be > 0, got {step!r}")
    t = check_time(cfg, t)
    out = rk4_bloch(cfg.omega0, cfg.delta_detuning, np.array(s0.as_tuple()), t, min(step, t) if t > 0 else step)
    return BlochVector.from_seq(out)
