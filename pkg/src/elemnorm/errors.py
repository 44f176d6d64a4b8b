"""Exception types shared across the library.

``InvalidInput`` and its subclasses mark problems with caller-supplied data;
``ToleranceViolation`` marks an internal cross-check that failed beyond its
tolerance (a bug or a genuinely ill-posed instance, never a user error).
"""


class ElemnormError(Exception):
    """Base class for all elemnorm errors."""


class InvalidInput(ElemnormError):
    """Malformed input: bad shape, non-finite entries, out-of-range values."""


class NotHermitian(InvalidInput):
    """A matrix required to be Hermitian deviates beyond the tolerance."""


class NotPSD(InvalidInput):
    """A matrix required to be positive semidefinite has a genuinely
    negative eigenvalue (beyond the relative clamping tolerance)."""


class DimMismatch(InvalidInput):
    """Operands have incompatible dimensions."""


class InvalidProjection(InvalidInput):
    """A matrix required to be an orthogonal projection is not one."""


class InvalidState(InvalidInput):
    """A density matrix violates its invariants (trace, PSD, rank bound)."""


class SingularBase(InvalidInput):
    """The base matrix of a geometric mean is singular beyond what the
    regularisation policy can absorb."""


class IllConditioned(InvalidInput):
    """A matrix that must be inverted is numerically singular."""


class ResourceGuard(InvalidInput):
    """The requested computation exceeds the configured size limit."""


class ToleranceViolation(ElemnormError):
    """Two evaluation routes that must agree disagreed beyond tolerance."""
