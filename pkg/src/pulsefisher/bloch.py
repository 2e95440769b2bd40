"""
bloch.py - state and parameter types for a driven two-level atom.

The qubit is always carried as its Bloch vector s; the density matrix
rho = (I + s.sigma)/2 is never built here. Its spectrum follows from |s|
alone: (1 +/- |s|)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from pulsefisher.errors import DomainError, NonPhysicalState

# Drift tolerance on |s| above one. Anything larger comes from a propagator
# that is not a rotation rather than from rounding.
EPS_PHYS = 1e-9

TWO_PI = 2.0 * math.pi


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Angles:
    """Initial-state angles of cos(theta/2)|0> + exp(-i phi) sin(theta/2)|1>.

    theta lies in [0, pi] and phi in [0, 2 pi], both ends included. Values
    are validated, never wrapped.
    """

    theta: float
    phi: float

    def __post_init__(self):
        theta = _finite("theta", self.theta)
        phi = _finite("phi", self.phi)
        if not 0.0 <= theta <= math.pi:
            raise DomainError(f"theta must lie in [0, pi], got {theta!r}")
        if not 0.0 <= phi <= TWO_PI:
            raise DomainError(f"phi must lie in [0, 2pi], got {phi!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class PulseConfig:
    """Rectangular drive: Rabi strength, detuning and pulse duration T."""

    omega0: float
    delta_detuning: float
    duration: float

    def __post_init__(self):
        omega0 = _finite("omega0", self.omega0)
        delta = _finite("delta", self.delta_detuning)
        duration = _finite("duration", self.duration)
        if omega0 <= 0.0:
            raise DomainError(f"omega0 must be > 0, got {omega0!r}")
        if delta < 0.0:
            raise DomainError(f"delta must be >= 0, got {delta!r}")
        if duration < 0.0:
            raise DomainError(f"duration must be >= 0, got {duration!r}")
        object.__setattr__(self, "omega0", omega0)
        object.__setattr__(self, "delta_detuning", delta)
        object.__setattr__(self, "duration", duration)

    @property
    def delta_ratio(self) -> float:
        """Dimensionless detuning Delta / Omega0."""
        return self.delta_detuning / self.omega0

    @property
    def eta(self) -> float:
        return 1.0 + self.delta_ratio ** 2

    def tau(self, t: float) -> float:
        """Dimensionless time Omega0 * t."""
        return self.omega0 * t


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector. Used both for states and for their parameter derivatives."""

    sx: float
    sy: float
    sz: float

    @classmethod
    def from_seq(cls, values) -> "BlochVector":
        sx, sy, sz = values
        return cls(float(sx), float(sy), float(sz))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.sx, self.sy, self.sz)

    def norm(self) -> float:
        return math.hypot(self.sx, self.sy, self.sz)

    def dot(self, other: "BlochVector") -> float:
        return self.sx * other.sx + self.sy * other.sy + self.sz * other.sz

    def __iter__(self):
        return iter(self.as_tuple())


@dataclass(frozen=True)
class SpectralPair:
    """Eigenvalues of rho, largest first."""

    lambda1: float
    lambda2: float


def initial_bloch(angles: Angles) -> BlochVector:
    """Bloch vector of the coherent initial state.

    >>> initial_bloch(Angles(0.0, 0.0))
    BlochVector(sx=0.0, sy=0.0, sz=-1.0)
    """
    st = math.sin(angles.theta)
    return BlochVector(st * math.cos(angles.phi), st * math.sin(angles.phi), -math.cos(angles.theta))


def physical_norm(s_norm: float) -> float:
    """Clamp drift in (1, 1 + EPS_PHYS] to 1; raise beyond that."""
    if s_norm > 1.0 + EPS_PHYS:
        raise NonPhysicalState(s_norm)
    return min(s_norm, 1.0)


def spectrum_from_bloch(s: BlochVector) -> SpectralPair:
    """Eigenvalues (1 + |s|)/2 and (1 - |s|)/2 of (I + s.sigma)/2."""
    r = physical_norm(s.norm())
    return SpectralPair(0.5 * (1.0 + r), 0.5 * (1.0 - r))
