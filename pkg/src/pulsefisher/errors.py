"""Exception hierarchy."""


class PulseFisherError(ValueError):
    """Base class for all domain errors raised by the package."""


class DomainError(PulseFisherError):
    """An argument lies outside its mathematical domain."""


class NonPhysicalState(PulseFisherError):
    """A Bloch vector longer than one (beyond the drift tolerance).

    The offending norm is kept on ``s_norm`` so callers can report it.
    """

    def __init__(self, s_norm, message=None):
        self.s_norm = s_norm
        super().__init__(message or f"non-physical Bloch vector: |s| = {s_norm!r} > 1")


class InvalidTime(PulseFisherError):
    """Evolution requested outside the pulse window [0, T]."""


class InvalidStep(PulseFisherError):
    """Non-positive integration step."""


class DomainEdge(PulseFisherError):
    """A finite-difference stencil would leave the angle domain."""


class InvalidPlane(PulseFisherError):
    """A sweep plane violates a parameter domain or is ill-formed."""
