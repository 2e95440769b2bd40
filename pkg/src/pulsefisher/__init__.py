"""Single-qubit rectangular-pulse dynamics, quantum Fisher information and
encoded information, with dense parameter sweeps for contour figures."""

from pulsefisher.bloch import (
    EPS_PHYS,
    Angles,
    BlochVector,
    PulseConfig,
    SpectralPair,
    initial_bloch,
    spectrum_from_bloch,
)
from pulsefisher.entropy import InfoResult, binary_entropy, encoded_information
from pulsefisher.errors import (
    DomainEdge,
    DomainError,
    InvalidPlane,
    InvalidStep,
    InvalidTime,
    NonPhysicalState,
    PulseFisherError,
)
from pulsefisher.propagator import (
    AppendixIntermediates,
    Propagator,
    PropagatorMode,
    appendix_intermediates,
    evolve,
    integrate_bloch_ode,
    propagator,
    propagator_exact,
    propagator_paper_literal,
)
from pulsefisher.qfi import (
    EPS_PURE,
    EstimableParameter,
    QfiResult,
    d_initial_bloch,
    qfi_bloch,
    qfi_spectral_oracle,
)
from pulsefisher.sweep import (
    Axis,
    Observable,
    SweepGrid,
    SweepPlane,
    figure_suite,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "EPS_PHYS",
    "EPS_PURE",
    "Angles",
    "AppendixIntermediates",
    "Axis",
    "BlochVector",
    "DomainEdge",
    "DomainError",
    "EstimableParameter",
    "InfoResult",
    "InvalidPlane",
    "InvalidStep",
    "InvalidTime",
    "NonPhysicalState",
    "Observable",
    "Propagator",
    "PropagatorMode",
    "PulseConfig",
    "PulseFisherError",
    "QfiResult",
    "SpectralPair",
    "SweepGrid",
    "SweepPlane",
    "appendix_intermediates",
    "binary_entropy",
    "d_initial_bloch",
    "encoded_information",
    "evolve",
    "figure_suite",
    "initial_bloch",
    "integrate_bloch_ode",
    "propagator",
    "propagator_exact",
    "propagator_paper_literal",
    "qfi_bloch",
    "qfi_spectral_oracle",
    "run_sweep",
    "spectrum_from_bloch",
]
