"""Exception hierarchy for the qortho package."""


class QOrthoError(Exception):
    """Base class for all qortho errors."""


class DegenerateFamily(QOrthoError):
    """Both a-coefficients or both b-coefficients of a family are zero."""


class InvalidZeroPattern(DegenerateFamily):
    """The zero pattern of (a1, a2, b1, b2) admits no canonical case."""


class InvalidCase(QOrthoError):
    """A canonical-parameter record carries an unknown case tag."""


class NotApplicable(QOrthoError):
    """The requested transformation does not apply to these parameters."""


class IndexOutOfRange(QOrthoError, IndexError):
    """A lattice or matrix index exceeds the tabulated range."""


class CoincidentEigenvalues(QOrthoError):
    """Two eigenvalues h_j = h_k coincide; connection products are undefined."""


class ZeroDenominator(QOrthoError):
    """A resonant parameter value makes a closed-form denominator vanish."""


class NoConvergence(QOrthoError):
    """A series failed to satisfy the geometric-tail criterion."""


class InsufficientNodes(QOrthoError):
    """A weight table is too short for the requested tail tolerance."""


class DegenerateNorm(QOrthoError):
    """A diagonal Gram norm K_n is numerically indistinguishable from zero."""


class ConstraintViolation(QOrthoError, ValueError):
    """Preset arguments violate the family's admissibility constraints."""
