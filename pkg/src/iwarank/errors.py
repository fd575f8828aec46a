"""Exception types shared across the package.

Every error raised on purpose by the library derives from IwarankError,
so callers (and the CLI) can separate "the input violates a precondition"
from genuine bugs.
"""


class IwarankError(Exception):
    """Base class for all library-raised errors."""


class InvalidContext(IwarankError):
    """p is not an odd prime, precision/margin out of range, or a level
    request is outside what exact construction supports."""


class ZeroElement(IwarankError):
    """An operation needed a nonzero ring element (e.g. mu/lambda of 0)."""


class DuplicateLevel(IwarankError):
    """Two interpolation points were given at the same cyclotomic level."""


class PrecisionUnstable(IwarankError):
    """A length read off at working precision N changed when recomputed
    at N + margin; the finite-ring proxy cannot be trusted."""


class NotNested(IwarankError):
    """The alleged sub-span is not contained in the enclosing span."""


class PhiDivides(IwarankError):
    """The level-n cyclotomic factor divides the data, so the requested
    quantity is infinite/undefined at that level."""


class NotTorsion(IwarankError):
    """The relation matrix does not have full rank over Frac(Lambda)."""


class SingularMatrix(IwarankError):
    """A 2x2 matrix with zero determinant where a nonzero one is needed."""


class NotSpecial(IwarankError):
    """Matrix fails the column-divisibility condition at some level."""


class DegenerateColeman(IwarankError):
    """Coleman data violates one of its structural invariants."""


class NotCoprime(IwarankError):
    """det B shares a cyclotomic factor with omega_n."""
