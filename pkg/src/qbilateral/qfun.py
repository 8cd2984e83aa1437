"""q-shifted factorials and theta functions in both engines.

Exact-engine arguments are :class:`~qbilateral.exactq.QMono` values
``c * q^e`` (plain rationals are promoted with ``e = 0``), and every builder
takes a ``base`` exponent ``b`` so Pochhammer symbols and thetas in ``q^b``
(for example ``(x; q^2)_n`` or ``theta(z; q^(1/2))``) live on one grid.

Negative integer indices are normalized through the reflection relation
``(x)_(-m) = (-x)^(-m) q^(m(m+1)/2) / (q/x; q)_m`` so that only series with
computable truncations appear; requesting a symbol at one of its poles raises
:class:`~qbilateral.errors.PolePoch`, while reciprocals through
:func:`poch_recip_series` degenerate to the zero series there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .errors import DomainError, PolePoch, PrecisionLoss
from .exactq import ExactSeries, ExponentGrid, QMono, Rat
from .numq import Precision, to_mp

_ONE = Fraction(1)

INFINITY = "infinity"


@dataclass(frozen=True)
class PochIndex:
    """Index of a q-shifted factorial: integer, infinity, or real (numeric only)."""

    kind: str
    n: int = 0
    c: object = None

    @staticmethod
    def integer(n: int) -> "PochIndex":
        return PochIndex("integer", n=int(n))

    @staticmethod
    def infinity() -> "PochIndex":
        return PochIndex("infinity")

    @staticmethod
    def real(c) -> "PochIndex":
        return PochIndex("real", c=c)


def _as_index(index) -> PochIndex:
    if isinstance(index, PochIndex):
        return index
    if index == INFINITY or index is math.inf:
        return PochIndex.infinity()
    if isinstance(index, int):
        return PochIndex.integer(index)
    raise TypeError(f"bad Pochhammer index {index!r}")


# ----------------------------------------------------------------------
# exact engine
# ----------------------------------------------------------------------


def _extended(grid: ExponentGrid, extra: int) -> ExponentGrid:
    return ExponentGrid(grid.denom, grid.order + max(0, extra))


def _finite_product(x: QMono, n: int, grid: ExponentGrid, base: Fraction) -> ExactSeries:
    """prod_{j=0}^{n-1} (1 - x q^(base j)) at the grid order (exact)."""
    if x.is_zero or n == 0:
        return ExactSeries.one(grid)
    ex = grid.index_of(x.exp)
    eb = grid.index_of(base)
    dip = sum(max(0, -(ex + eb * j)) for j in range(n))
    out = ExactSeries.one(_extended(grid, dip))
    for j in range(n):
        out = out.times_factor([(0, _ONE), (ex + eb * j, -x.coef)])
    return out.truncated(grid.order)


def _infinite_product(x: QMono, grid: ExponentGrid, base: Fraction) -> ExactSeries:
    """(x; q^base)_infinity truncated to the grid order (exact)."""
    if x.is_zero:
        return ExactSeries.one(grid)
    if base <= 0:
        raise DomainError("infinite product needs a positive base exponent")
    ex = grid.index_of(x.exp)
    eb = grid.index_of(base)
    # factors with exponent >= N only touch discarded coefficients
    jmax = max(0, -(-(grid.order - ex) // eb))  # ceil((N - ex)/eb)
    dip = sum(max(0, -(ex + eb * j)) for j in range(jmax))
    out = ExactSeries.one(_extended(grid, dip))
    for j in range(jmax):
        out = out.times_factor([(0, _ONE), (ex + eb * j, -x.coef)])
    return out.truncated(grid.order)


def poch_series(x, index, grid: ExponentGrid, base=_ONE) -> ExactSeries:
    """Truncation of the q-shifted factorial (x; q^base)_index.

    Negative integer indices are rewritten through the reflection relation so
    only non-negative powers of the coefficient recursion appear; a pole
    (some factor identically zero in the denominator product) raises PolePoch.
    """
    x = QMono.of(x)
    base = Rat(base)
    idx = _as_index(index)
    if idx.kind == "real":
        raise DomainError("real Pochhammer index is numeric-engine only")
    if idx.kind == "infinity":
        return _infinite_product(x, grid, base)
    n = idx.n
    if n >= 0:
        return _finite_product(x, n, grid, base)
    m = -n
    if x.is_zero:
        return ExactSeries.one(grid)
    # (x)_{-m} = (-x)^{-m} q^{base m(m+1)/2} / (q_b/x; q_b)_m
    pref = QMono(x.coef, x.exp).power(-m) * QMono(_ONE, base * Rat(m * (m + 1), 2))
    pref = QMono((-1) ** m * pref.coef, pref.exp)
    denom = _reflection_poly(x, m, grid, base, extra=abs(grid.index_of(pref.exp)))
    if denom.is_zero:
        raise PolePoch(f"(x; q^{base})_{n} has a pole at x = {x}")
    return _scaled_inverse(denom, pref, grid)


def _reflection_poly(x: QMono, m: int, grid: ExponentGrid, base: Fraction, extra: int = 0) -> ExactSeries:
    """(q_b/x; q_b)_m built with enough headroom to invert back to grid order."""
    u = QMono(1 / x.coef, base - x.exp)
    exps = [grid.index_of(u.exp + base * j) for j in range(m)]
    dips = sum(max(0, -e) for e in exps)
    out = ExactSeries.one(_extended(grid, 2 * dips + extra))
    for e in exps:
        out = out.times_factor([(0, _ONE), (e, -u.coef)])
    return out


def _scaled_inverse(poly: ExactSeries, pref: QMono, grid: ExponentGrid) -> ExactSeries:
    """pref / poly truncated back to the requested grid order."""
    lo = poly.min_index()
    unit = poly.shifted(-lo)
    inv = unit.invert().shifted(-lo)
    k = grid.index_of(pref.exp)
    out = inv.scaled(pref.coef).shifted(k)
    return out.truncated(min(out.grid.order, grid.order))


def poch_recip_series(x, index, grid: ExponentGrid, base=_ONE) -> ExactSeries:
    """Truncation of 1 / (x; q^base)_index.

    For negative indices at a pole of the reciprocal's denominator the result
    degenerates to the exact zero series (the `1/(q)_(-n) = 0` convention).
    """
    x = QMono.of(x)
    base = Rat(base)
    idx = _as_index(index)
    if idx.kind == "real":
        raise DomainError("real Pochhammer index is numeric-engine only")
    if idx.kind == "infinity":
        prod = _infinite_product(x, _extended(grid, 0), base)
        return _scaled_inverse(prod, QMono(_ONE), grid) if not prod.is_zero else _raise_pole(x)
    n = idx.n
    if n >= 0:
        prod = _finite_product(x, n, grid, base)
        if prod.is_zero:
            raise PolePoch(f"1/(x; q^{base})_{n} undefined, (x)_{n} vanishes at x = {x}")
        return _scaled_inverse(prod, QMono(_ONE), grid)
    m = -n
    if x.is_zero:
        return ExactSeries.one(grid)
    # 1/(x)_{-m} = (-x)^m q^{-base m(m+1)/2} (q_b/x; q_b)_m  -- a polynomial,
    # identically zero exactly when the reflection product has a zero factor.
    pref = QMono(x.coef, x.exp).power(m) * QMono(_ONE, -base * Rat(m * (m + 1), 2))
    pref = QMono((-1) ** m * pref.coef, pref.exp)
    poly = _reflection_poly(x, m, grid, base, extra=abs(grid.index_of(pref.exp)))
    out = poly.scaled(pref.coef).shifted(grid.index_of(pref.exp))
    return out.truncated(min(out.grid.order, grid.order))


def _raise_pole(x):
    raise PolePoch(f"infinite product vanishes identically at x = {x}")


def poch_prod_series(xs, index, grid: ExponentGrid, base=_ONE) -> ExactSeries:
    """Compact product (x1, ..., xm; q^base)_index."""
    out = ExactSeries.one(grid)
    for x in xs:
        out = out * poch_series(x, index, grid, base)
    return out


def theta_series(z, grid: ExponentGrid, base=_ONE, form: str = "sum") -> ExactSeries:
    """theta(z; q^base) = sum_n (-z)^n q^(base n(n-1)/2) = (z, q^b/z, q^b)_inf.

    Exact engine; z must be a nonzero rational times a grid power of q so both
    forms live on the same lattice.
    """
    z = QMono.of(z)
    base = Rat(base)
    if z.is_zero:
        raise DomainError("theta undefined at z = 0 (q/z pole)")
    if form == "product":
        qb_over_z = QMono(1 / z.coef, base - z.exp)
        a = _infinite_product(z, grid, base)
        b = _infinite_product(qb_over_z, grid, base)
        c = _infinite_product(QMono(_ONE, base), grid, base)
        return (a * b * c).truncated(min(grid.order, (a * b * c).grid.order))
    if form != "sum":
        raise ValueError(f"unknown theta form {form!r}")
    ez = grid.index_of(z.exp)
    eb = grid.index_of(base)
    n_limit = grid.order

    def exponent(n):
        return n * ez + eb * (n * (n - 1) // 2)

    coeffs: dict[int, Fraction] = {}

    def add(n):
        e = exponent(n)
        if e < n_limit:
            c = (-z.coef) ** n if n >= 0 else (-1 / z.coef) ** (-n)
            coeffs[e] = coeffs.get(e, Fraction(0)) + c

    n = 0
    while True:
        e = exponent(n)
        if e >= n_limit and exponent(n + 1) > e and n > 0:
            break
        add(n)
        n += 1
        if n > 4 * (n_limit + abs(ez) + eb + 4):
            raise DomainError("theta sum cut failed to terminate")
    n = -1
    while True:
        e = exponent(n)
        if e >= n_limit and exponent(n - 1) > e:
            break
        add(n)
        n -= 1
        if n < -4 * (n_limit + abs(ez) + eb + 4):
            raise DomainError("theta sum cut failed to terminate")
    return ExactSeries(grid, {k: v for k, v in coeffs.items() if v})


# ----------------------------------------------------------------------
# numeric engine
# ----------------------------------------------------------------------


def poch_value(x, index, q, prec: Precision):
    """Numeric q-shifted factorial (x; q)_index for |q| < 1.

    Infinite and real indices truncate the product once |x q^j| drops below
    2^-(bits+guard); the neglected tail perturbs the result by less than
    2^-(bits+guard-8) relatively, within the documented slack.
    """
    idx = _as_index(index) if not isinstance(index, PochIndex) else index
    with mp.workprec(prec.work):
        qv = to_mp(q, prec)
        xv = to_mp(x, prec)
        if abs(qv) >= 1:
            raise DomainError(f"poch_value needs |q| < 1, got |q| = {abs(qv)}")
        if idx.kind == "integer":
            n = idx.n
            if n >= 0:
                out = mp.mpf(1)
                for j in range(n):
                    out = out * (1 - xv * qv ** j)
                return out
            out = mp.mpf(1)
            for j in range(1, -n + 1):
                f = 1 - xv * qv ** (-j)
                if f == 0:
                    raise PolePoch(f"(x; q)_{idx.n} pole: x = q^{j}")
                out = out * f
            return 1 / out
        if idx.kind == "infinity":
            return _inf_product_value(xv, qv, prec)
        cv = to_mp(idx.c, prec)
        qc = mp.exp(cv * mp.log(qv))
        return _inf_product_value(xv, qv, prec) / _inf_product_value(xv * qc, qv, prec)


def _inf_product_value(x, q, prec: Precision):
    if x == 0:
        return mp.mpf(1)
    tiny = mpf(2) ** (-prec.work)
    out = mp.mpf(1)
    term = x
    j = 0
    cap = 64 + int((prec.work + 8) * 0.6931471805599453 / max(1e-9, -mp.log(abs(q)))) + int(
        max(0, mp.log(abs(x) + 1))
    )
    while abs(term) >= tiny:
        out = out * (1 - term)
        term = term * q
        j += 1
        if j > cap + 16:
            raise DomainError("infinite product did not converge")
    return out


def theta_value(z, q, prec: Precision, form: str = "sum"):
    """Numeric theta(z; q) via the bilateral sum or the triple product."""
    with mp.workprec(prec.work):
        zv = to_mp(z, prec)
        qv = to_mp(q, prec)
        if zv == 0:
            raise DomainError("theta undefined at z = 0")
        if abs(qv) >= 1:
            raise DomainError("theta needs |q| < 1")
        if form == "product":
            a = _inf_product_value(zv, qv, prec)
            b = _inf_product_value(qv / zv, qv, prec)
            c = _inf_product_value(qv, qv, prec)
            return a * b * c
        if form != "sum":
            raise ValueError(f"unknown theta form {form!r}")
        tiny = mpf(2) ** (-prec.work)
        total = mp.mpc(0) if isinstance(zv, mp.mpc) else mp.mpf(0)
        # upward: term_n = (-z)^n q^(n(n-1)/2)
        term = mp.mpf(1)
        n = 0
        scale = mp.mpf(1)
        while True:
            total += term
            scale = max(scale, abs(term))
            term = term * (-zv) * qv ** n
            n += 1
            if abs(term) < tiny * scale and n > 2:
                break
            if n > 8 * prec.work:
                raise DomainError("theta sum did not converge (upward)")
        term = (-1 / zv) * qv  # n = -1 term: binom(-1, 2) = 1
        n = -1
        while True:
            total += term
            scale = max(scale, abs(term))
            term = term * (-1 / zv) * qv ** (1 - n)
            n -= 1
            if abs(term) < tiny * scale and n < -2:
                break
            if n < -8 * prec.work:
                raise DomainError("theta sum did not converge (downward)")
        if total != 0 and abs(total) < scale * mpf(2) ** (-prec.bits):
            raise PrecisionLoss(
                "theta sum cancels below the precision budget; use the product form"
            )
        return total


def eta_transform_sides(t, prec: Precision):
    """Both sides of the modular transformation of (e^-t; e^-t)_infinity.

    Left: the product at q = e^-t.  Right: sqrt(2 pi / t) *
    exp(t/24 - pi^2/(6 t)) times the product at e^(-4 pi^2 / t).
    """
    with mp.workprec(prec.work):
        tv = to_mp(t, prec)
        if tv <= 0:
            raise DomainError("eta transform needs t > 0")
        q = mp.exp(-tv)
        lhs = _inf_product_value(q, q, prec)
        tdual = 4 * mp.pi ** 2 / tv
        qdual = mp.exp(-tdual)
        rhs = mp.sqrt(2 * mp.pi / tv) * mp.exp(tv / 24 - mp.pi ** 2 / (6 * tv))
        rhs = rhs * _inf_product_value(qdual, qdual, prec)
        return lhs, rhs
