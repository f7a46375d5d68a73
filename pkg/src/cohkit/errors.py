"""Exception types shared across the toolkit.

``ValidationError`` covers every contract violation on inputs or constructed
objects (the CLI maps it to exit code 3); ``ParseError`` covers malformed
files (exit code 2).
"""


class CohkitError(Exception):
    """Base class for all toolkit errors."""


class ParseError(CohkitError):
    """A file or JSON object could not be decoded into a known format."""


class NoConvergenceError(CohkitError):
    """An iterative numerical routine exhausted its budget."""


class ValidationError(CohkitError):
    """Base class for contract violations on inputs or constructed objects."""


class ShapeMismatchError(ValidationError):
    """Operands have incompatible shapes."""


class DimMismatchError(ValidationError):
    """Operands have incompatible dimensions."""


class LengthMismatchError(ValidationError):
    """Sequences that must be equally long are not."""


class BadParameterError(ValidationError):
    """A scalar or structural parameter is outside its admissible range."""


class NotHermitianError(ValidationError):
    """A matrix required to be Hermitian is not, within tolerance."""


class NotPositiveError(ValidationError):
    """A matrix required to be positive semidefinite has a negative eigenvalue."""


class TraceNotOneError(ValidationError):
    """A density matrix does not have unit trace, within tolerance."""


class InvalidStateError(ValidationError):
    """A matrix fails the density-matrix contract."""


class AmbiguousGroupingError(ValidationError):
    """Eigenvalue clustering cannot be decided at the requested tolerance."""


class BadProfileError(ValidationError):
    """A degeneracy profile does not match the requested dimension."""


class BadBasisError(ValidationError):
    """A matrix passed as an orthonormal basis is not unitary, within tolerance."""


class NonOrthonormalError(ValidationError):
    """A vector family required to be orthonormal is not, within tolerance."""


class VectorOutsideEigenspaceError(ValidationError):
    """A vector does not lie in the eigenspace it is assigned to."""


class ZeroProbabilityOutcomeError(ValidationError):
    """A measurement outcome with (numerically) zero probability was requested."""


class IncompatibleFineGrainingError(ValidationError):
    """A fine-graining does not refine the observable it is used with."""


class NotTracePreservingError(ValidationError):
    """A channel required to be trace preserving is not, within tolerance."""


class NotGIOError(ValidationError):
    """All Kraus operators were required to be diagonal in the reference basis."""


class NotPSDError(ValidationError):
    """A correlation matrix has a negative eigenvalue beyond tolerance."""


class DiagonalNotOneError(ValidationError):
    """A correlation matrix does not have a unit diagonal, within tolerance."""


class NotIOFormError(ValidationError):
    """A Kraus operator has more than one nonzero entry in some column."""


class NotUnitalError(ValidationError):
    """A channel required to be unital is not, within tolerance."""


class NotIsometryError(ValidationError):
    """A matrix required to be an isometry is not, within tolerance."""


class InvalidModelError(ValidationError):
    """A dilation model violates its structural contract."""


class BadDimensionError(ValidationError):
    """A dimension argument is outside its admissible range."""


class UnsupportedClassError(ValidationError):
    """No construction is available for this channel class."""
