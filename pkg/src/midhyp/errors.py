"""Exception hierarchy shared by all midhyp modules."""


class MidhypError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(MidhypError, ValueError):
    """A caller-supplied argument violates an operation's precondition."""


class DegenerateConfigError(MidhypError):
    """An object configuration is not in general position.

    Raised when two objects coincide or two midpoints coincide (exactly for
    rational input, within 1e-12 for floating-point input).
    """


class TieError(MidhypError):
    """An ideal point coincides with a midpoint, so two distances tie."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class GuardError(InvalidParameterError):
    """A brute-force oracle was asked to exceed its cost guard."""


class UnderdeterminedError(MidhypError):
    """Too few point counts to determine the characteristic polynomial."""


class InconsistentCountsError(MidhypError):
    """Point counts are incompatible with an integer characteristic
    polynomial; the usual cause is an inadmissible (too small) prime."""


class InvariantViolation(MidhypError):
    """An internal consistency check failed; indicates a bug or bad input
    that slipped past validation, never a recoverable condition."""


class UnsafePrimeError(InvalidParameterError):
    """The requested prime does not exceed the admissibility threshold."""


class CheckpointError(MidhypError):
    """A checkpoint file is corrupt or belongs to a different job."""


class DegenerateConeError(MidhypError):
    """Cone normals are not in general position."""


class EmptyTetrahedronError(MidhypError):
    """No vertex sign choice satisfies the remaining facet inequality."""


class PathError(MidhypError):
    """A deformation path left the space of nondegenerate tetrahedra."""


class ToleranceError(MidhypError):
    """Numerical quadrature could not reach the requested tolerance."""
