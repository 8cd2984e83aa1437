"""Exception hierarchy shared by the exact and numeric engines."""


class QBilateralError(Exception):
    """Base class for all library errors."""


class IncompatibleGrid(QBilateralError):
    """Exponent grids cannot be combined (denominator divisibility failed)."""


class ZeroConstantTerm(QBilateralError):
    """Series inversion requested for a series with vanishing constant term."""


class PolePoch(QBilateralError):
    """A q-shifted factorial (or its reciprocal) is requested at a pole."""


class DomainError(QBilateralError):
    """Argument outside the mathematical domain of the operation."""


class PrecisionLoss(QBilateralError):
    """Requested tolerance unreachable within the iteration budget."""


class NoBracket(QBilateralError):
    """Root solver found no sign change on the search interval."""


class Divergence(QBilateralError):
    """A bilateral or multiple sum diverges for the given parameters."""


class NonPositiveResidual(QBilateralError):
    """Rate fitting requires strictly positive residual samples."""


class UnsupportedMode(QBilateralError):
    """Identity does not support the requested check mode."""


class UnknownIdentity(QBilateralError):
    """Identity id not present in the registry."""
