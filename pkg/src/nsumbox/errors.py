"""Exception types raised across the package.

Everything derives from :class:`NsumboxError` so callers can catch the
whole family; most classes also subclass ``ValueError`` because they
signal bad inputs rather than internal faults.
"""


class NsumboxError(Exception):
    """Base class for all package errors."""


class FieldConstructionError(NsumboxError, ValueError):
    """Invalid finite-field parameters."""


class NonPrimeError(FieldConstructionError):
    """Characteristic is not prime."""


class DegreeError(FieldConstructionError):
    """Extension degree is not a positive integer."""


class FieldTooLargeError(FieldConstructionError):
    """Requested field order exceeds the supported bound."""


class ReducibleModulusError(FieldConstructionError):
    """Supplied modulus polynomial is not irreducible (or not monic)."""


class FieldMismatchError(NsumboxError, ValueError):
    """Operands belong to different fields."""


class LengthMismatchError(NsumboxError, ValueError):
    """Vector operands have different lengths."""


class OddLengthError(NsumboxError, ValueError):
    """Symplectic form requires an even-length vector."""


class DimMismatchError(NsumboxError, ValueError):
    """Matrix shapes are incompatible for the requested operation."""


class BadShapeError(NsumboxError, ValueError):
    """Matrix has the wrong shape for this operation."""


class SingularMatrixError(NsumboxError, ValueError):
    """Matrix is not invertible."""


class NotAPermutationError(NsumboxError, ValueError):
    """Index sequence is not a permutation of 0..n-1."""


class NotSymplecticError(NsumboxError, ValueError):
    """Matrix does not satisfy F^T J F = J."""


class NotSelfOrthogonalError(NsumboxError, ValueError):
    """Columns are not symplectically self-orthogonal (G^T J G != 0)."""


class RankDeficientError(NsumboxError, ValueError):
    """Matrix does not have the required rank."""


class NotSSOError(NotSelfOrthogonalError):
    """Matrix is not strongly self-orthogonal (self-orthogonal + full rank)."""


class AlgorithmFailureError(NsumboxError):
    """Signed column swap failed; unreachable for valid SSO input."""


class NotALitError(NsumboxError, ValueError):
    """Block-diagonal transform is not locally invertible."""


class BadCompletionError(NsumboxError, ValueError):
    """Supplied completion H does not make (G^perp | H) invertible."""


class NotRealizableError(NsumboxError, ValueError):
    """Transfer matrix fails the conditions for a direct box realization."""


class IndexOutOfRangeError(NsumboxError, ValueError):
    """Transmitter or qudit index out of range."""


class TooLargeError(NsumboxError, ValueError):
    """State-vector or density-operator dimension exceeds the desk-scale cap."""


class NotDeterministicError(NsumboxError):
    """No coset-basis element reached unit overlap; invariant violation."""


class NumericalDegeneracyError(NsumboxError):
    """No joint eigenvector found; indicates a bug, never expected."""


class BadIndexSetError(NsumboxError, ValueError):
    """Partial-trace keep-set is not a subset of the qudit indices."""


class InvalidSpecError(NsumboxError, ValueError):
    """GRS/QCSA parameter record violates its invariants."""


class DuplicatePointsError(InvalidSpecError):
    """Evaluation points are not pairwise distinct."""


class ZeroMultiplierError(InvalidSpecError):
    """GRS column multiplier is zero."""


class LTooLargeError(InvalidSpecError):
    """QCSA box needs L <= floor(N/2)."""


class FieldTooSmallError(InvalidSpecError):
    """Field cannot host the required number of distinct evaluation points."""


class BadRoundError(NsumboxError, ValueError):
    """Retrieval round index out of range."""


class DecodeMismatchError(NsumboxError):
    """Recovered symbols disagree with the planted ones."""
