"""
qfi.py - quantum Fisher information of the evolved qubit w.r.t. theta or phi.

For a qubit with Bloch vector s(beta):

    F = [s . ds]^2 / (1 - |s|^2) + |ds|^2     if |s| < 1
    F = |ds|^2                                if |s| = 1

The propagator does not depend on beta, so ds(t) = A ds(0) with ds(0)
known in closed form. ``qfi_spectral_oracle`` recomputes the same number
from the eigen-decomposition of rho and a finite-difference d rho; it shares
nothing with the main path beyond the propagator itself.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from pulsefisher.bloch import EPS_PHYS, Angles, BlochVector, PulseConfig, initial_bloch
from pulsefisher.errors import DomainEdge, DomainError, NonPhysicalState
from pulsefisher.propagator import Propagator, PropagatorMode, matvec, propagator

EPS_PURE = 1e-9

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class EstimableParameter(str, enum.Enum):
    THETA = "theta"
    PHI = "phi"


class Branch(str, enum.Enum):
    MIXED = "mixed"
    PURE = "pure"


@dataclass(frozen=True)
class QfiResult:
    value: float
    branch: Branch
    s_norm: float


def d_initial_bloch(angles: Angles, param: EstimableParameter) -> BlochVector:
    """Analytic partial derivative of the initial Bloch vector."""
    param = EstimableParameter(param)
    th, ph = angles.theta, angles.phi
    if param is EstimableParameter.THETA:
        ct = math.cos(th)
        return BlochVector(ct * math.cos(ph), ct * math.sin(ph), math.sin(th))
    st = math.sin(th)
    return BlochVector(-st * math.sin(ph), st * math.cos(ph), 0.0)


def qfi_from_vectors(s, ds) -> QfiResult:
    """Two-branch Bloch-vector QFI given s and ds/dbeta as 3-sequences."""
    sx, sy, sz = s
    dx, dy, dz = ds
    r = math.hypot(sx, sy, sz)
    if r > 1.0 + EPS_PHYS:
        raise NonPhysicalState(r)
    d2 = dx * dx + dy * dy + dz * dz
    if r >= 1.0 - EPS_PURE:
        return QfiResult(d2, Branch.PURE, r)
    proj = sx * dx + sy * dy + sz * dz
    return QfiResult(proj * proj / (1.0 - r * r) + d2, Branch.MIXED, r)


def qfi_from_propagator(p: Propagator, angles: Angles, param: EstimableParameter) -> QfiResult:
    rows = p.rows
    s = matvec(rows, initial_bloch(angles).as_tuple())
    ds = matvec(rows, d_initial_bloch(angles, param).as_tuple())
    return qfi_from_vectors(s, ds)


def qfi_bloch(
    cfg: PulseConfig,
    t: float,
    angles: Angles,
    param: EstimableParameter,
    mode: PropagatorMode = PropagatorMode.EXACT,
) -> QfiResult:
    """QFI for ``param`` after evolving the initial state to time t.

    Raises NonPhysicalState if the evolved vector is longer than one, which
    happens for the paper-literal propagator at many parameter values.
    """
    return qfi_from_propagator(propagator(cfg, t, mode), angles, EstimableParameter(param))


def density_matrix(s) -> np.ndarray:
    sx, sy, sz = s
    return 0.5 * (np.eye(2, dtype=complex) + sx * _PAULI[0] + sy * _PAULI[1] + sz * _PAULI[2])


def spectral_qfi(rho: np.ndarray, drho: np.ndarray, cutoff: float = 1e-10) -> float:
    """sum_{ij} 2 |<i|drho|j>|^2 / (p_i + p_j) over pairs with p_i + p_j > cutoff."""
    p, vecs = np.linalg.eigh(rho)
    p = np.clip(p, 0.0, None)
    m = vecs.conj().T @ drho @ vecs
    total = 0.0
    for i in range(len(p)):
        for j in range(len(p)):
            denom = p[i] + p[j]
            if denom > cutoff:
                total += 2.0 * abs(m[i, j]) ** 2 / denom
    return float(total)


def qfi_spectral_oracle(
    cfg: PulseConfig,
    t: float,
    angles: Angles,
    param: EstimableParameter,
    mode: PropagatorMode = PropagatorMode.EXACT,
    fd_step: float = 1e-5,
) -> float:
    """Spectral QFI with d rho from a central difference of the full pipeline."""
    param = EstimableParameter(param)
    if not 1e-8 <= fd_step <= 1e-3:
        raise DomainError(f"fd_step must lie in [1e-8, 1e-3], got {fd_step!r}")
    rows = propagator(cfg, t, mode).rows

    def state(a: Angles):
        s = matvec(rows, initial_bloch(a).as_tuple())
        r = math.hypot(*s)
        if r > 1.0 + EPS_PHYS:
            raise NonPhysicalState(r)
        return s

    th, ph = angles.theta, angles.phi
    if param is EstimableParameter.THETA:
        if th - fd_step < 0.0 or th + fd_step > math.pi:
            raise DomainEdge(f"theta = {th!r} +/- {fd_step!r} leaves [0, pi]")
        plus, minus = Angles(th + fd_step, ph), Angles(th - fd_step, ph)
    else:
        if ph - fd_step < 0.0 or ph + fd_step > 2.0 * math.pi:
            raise DomainEdge(f"phi = {ph!r} +/- {fd_step!r} leaves [0, 2pi]")
        plus, minus = Angles(th, ph + fd_step), Angles(th, ph - fd_step)

    rho = density_matrix(state(angles))
    drho = (density_matrix(state(plus)) - density_matrix(state(minus))) / (2.0 * fd_step)
    return spectral_qfi(rho, drho)
