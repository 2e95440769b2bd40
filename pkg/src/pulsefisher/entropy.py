"""Encoded information: von Neumann entropy of the evolved qubit."""

from __future__ import annotations

import math
from dataclasses import dataclass

from pulsefisher.bloch import Angles, PulseConfig, initial_bloch, physical_norm
from pulsefisher.errors import DomainError
from pulsefisher.propagator import Propagator, PropagatorMode, matvec, propagator

DEFAULT_LOG_BASE = 2.0


@dataclass(frozen=True)
class InfoResult:
    value: float
    s_norm: float


def _log(x: float, base: float) -> float:
    if base == 2.0:
        return math.log2(x)
    return math.log(x) / math.log(base)


def check_log_base(base: float) -> float:
    base = float(base)
    # base >= 2 keeps the single-qubit maximum at or below 1
    if not (math.isfinite(base) and base >= 2.0):
        raise DomainError(f"log base must be a finite number >= 2, got {base!r}")
    return base


def binary_entropy(p: float, base: float = DEFAULT_LOG_BASE) -> float:
    """-p log p - (1-p) log(1-p), with 0 log 0 = 0.

    >>> binary_entropy(0.5)
    1.0
    """
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {p!r}")
    base = check_log_base(base)
    if p == 0.0 or p == 1.0:
        return 0.0
    q = 1.0 - p
    return -p * _log(p, base) - q * _log(q, base)


def info_from_norm(s_norm: float, base: float = DEFAULT_LOG_BASE) -> InfoResult:
    r = physical_norm(s_norm)
    return InfoResult(binary_entropy(0.5 * (1.0 + r), base), s_norm)


def info_from_propagator(p: Propagator, angles: Angles, base: float = DEFAULT_LOG_BASE) -> InfoResult:
    s = matvec(p.rows, initial_bloch(angles).as_tuple())
    return info_from_norm(math.hypot(*s), base)


def encoded_information(
    cfg: PulseConfig,
    t: float,
    angles: Angles,
    mode: PropagatorMode = PropagatorMode.EXACT,
    base: float = DEFAULT_LOG_BASE,
) -> InfoResult:
    """Entropy of rho(t) in units set by ``base`` (bits by default).

    Under the exact propagator the state stays pure and this is zero up to
    rounding; non-zero values only arise from the paper-literal matrix.
    """
    return info_from_propagator(propagator(cfg, t, mode), angles, base)
