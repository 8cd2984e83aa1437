"""Dual-engine toolkit for bilateral basic hypergeometric series and theta functions.

Two engines back every computation:

* an exact engine over truncated formal series in fractional powers of q with
  rational coefficients (:mod:`qbilateral.exactq`), and
* an arbitrary-precision numeric engine built on mpmath
  (:mod:`qbilateral.numq`).

Higher layers provide q-shifted factorials and theta functions
(:mod:`qbilateral.qfun`), the bilateral series families
(:mod:`qbilateral.bilateral`), asymptotic main terms with exponential
rate fitting (:mod:`qbilateral.asym`), and an identity-check registry with
structured reports (:mod:`qbilateral.verify`).
"""

from .errors import (
    Divergence,
    DomainError,
    IncompatibleGrid,
    NoBracket,
    NonPositiveResidual,
    PolePoch,
    PrecisionLoss,
    QBilateralError,
    UnknownIdentity,
    UnsupportedMode,
    ZeroConstantTerm,
)
from .exactq import ExactSeries, ExponentGrid, QMono, grid_for
from .numq import Precision

__all__ = [
    "Divergence",
    "DomainError",
    "ExactSeries",
    "ExponentGrid",
    "IncompatibleGrid",
    "NoBracket",
    "NonPositiveResidual",
    "PolePoch",
    "Precision",
    "PrecisionLoss",
    "QBilateralError",
    "QMono",
    "UnknownIdentity",
    "UnsupportedMode",
    "ZeroConstantTerm",
    "grid_for",
]

__version__ = "0.1.0"
