"""Exact arithmetic on truncated formal series in fractional powers of q.

A series lives on an :class:`ExponentGrid` ``(D, N)``: the key ``k`` of the
coefficient map stands for the monomial ``q^(k/D)``, and the series is known
modulo ``q^(N/D)`` (every coefficient with index ``k < N`` is stored exactly,
everything at ``k >= N`` is unknown and discarded).  Coefficients are
arbitrary-precision rationals.

Keys may be negative: intermediate objects such as theta functions of
``z * q^(-j)`` arguments are honest truncated Laurent series.  Multiplication
accounts for negative supports when propagating the known order, so results
are never silently claimed beyond what the inputs determine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Iterator

from .errors import IncompatibleGrid, ZeroConstantTerm

Rat = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class ExponentGrid:
    """Fractional exponent lattice: index k means q^(k/D), order N means mod q^(N/D)."""

    denom: int
    order: int

    def __post_init__(self):
        if self.denom < 1:
            raise IncompatibleGrid(f"grid denominator must be >= 1, got {self.denom}")
        if self.order < 1:
            raise IncompatibleGrid(f"grid order must be >= 1, got {self.order}")

    def index_of(self, exponent: Fraction) -> int:
        """Integer index of an exact exponent; IncompatibleGrid if off-lattice."""
        e = _as_rat(exponent) * self.denom
        if e.denominator != 1:
            raise IncompatibleGrid(f"exponent {exponent} not on a 1/{self.denom} grid")
        return int(e)

    def powers(self) -> Fraction:
        """Order expressed in powers of q."""
        return Fraction(self.order, self.denom)


def grid_for(powers: int, *denoms: int) -> ExponentGrid:
    """Grid covering `powers` whole powers of q with denominator lcm(denoms, 1)."""
    d = 1
    for x in denoms:
        d = math.lcm(d, int(x))
    return ExponentGrid(d, powers * d)


class ExactSeries:
    """Immutable truncated series over Q with exponents on a fixed grid."""

    __slots__ = ("grid", "_c")

    def __init__(self, grid: ExponentGrid, coeffs: dict[int, Fraction] | None = None):
        self.grid = grid
        c: dict[int, Fraction] = {}
        if coeffs:
            n = grid.order
            for k, v in coeffs.items():
                if k < n and v != 0:
                    c[k] = _as_rat(v)
        self._c = c

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, grid: ExponentGrid) -> "ExactSeries":
        return cls(grid)

    @classmethod
    def one(cls, grid: ExponentGrid) -> "ExactSeries":
        return cls(grid, {0: _ONE})

    @classmethod
    def monomial(cls, grid: ExponentGrid, coef, k: int) -> "ExactSeries":
        return cls(grid, {int(k): _as_rat(coef)})

    # -- inspection ----------------------------------------------------

    def coeff(self, k: int) -> Fraction:
        return self._c.get(k, _ZERO)

    def coefficient_of(self, exponent) -> Fraction:
        """Coefficient of q^exponent for an exact rational exponent."""
        return self.coeff(self.grid.index_of(_as_rat(exponent)))

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(sorted(self._c.items()))

    @property
    def is_zero(self) -> bool:
        return not self._c

    def min_index(self) -> int:
        """Smallest stored exponent index (0 for the zero series)."""
        return min(self._c) if self._c else 0

    def __eq__(self, other) -> bool:
        """Coefficientwise equality on the common known range of both operands."""
        if not isinstance(other, ExactSeries):
            return NotImplemented
        a, b = common_grid(self, other)
        n = min(a.grid.order, b.grid.order)
        for k in set(a._c) | set(b._c):
            if k < n and a._c.get(k, _ZERO) != b._c.get(k, _ZERO):
                return False
        return True

    __hash__ = None

    def __repr__(self):
        terms = sorted(self._c.items())
        head = ", ".join(f"q^({k}/{self.grid.denom}): {v}" for k, v in terms[:6])
        more = "" if len(terms) <= 6 else f", ... ({len(terms)} terms)"
        return f"ExactSeries(D={self.grid.denom}, N={self.grid.order}, {{{head}{more}}})"

    # -- grid management -------------------------------------------------

    def regrid(self, new_denom: int) -> "ExactSeries":
        """Same formal series on a finer grid; current denom must divide new_denom."""
        d = self.grid.denom
        if new_denom == d:
            return self
        if new_denom % d != 0:
            raise IncompatibleGrid(f"cannot regrid denominator {d} -> {new_denom}")
        f = new_denom // d
        g = ExponentGrid(new_denom, self.grid.order * f)
        return ExactSeries(g, {k * f: v for k, v in self._c.items()})

    def truncated(self, order: int) -> "ExactSeries":
        """Restrict to a smaller known order on the same denominator."""
        if order > self.grid.order:
            raise IncompatibleGrid(
                f"cannot extend known order {self.grid.order} -> {order}"
            )
        g = ExponentGrid(self.grid.denom, order)
        return ExactSeries(g, {k: v for k, v in self._c.items() if k < order})

    # -- ring operations ---------------------------------------------

    def __neg__(self) -> "ExactSeries":
        s = ExactSeries.__new__(ExactSeries)
        s.grid = self.grid
        s._c = {k: -v for k, v in self._c.items()}
        return s

    def __add__(self, other) -> "ExactSeries":
        if not isinstance(other, ExactSeries):
            return NotImplemented
        a, b = common_grid(self, other)
        n = min(a.grid.order, b.grid.order)
        out = dict(a._c)
        for k, v in b._c.items():
            w = out.get(k, _ZERO) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return ExactSeries(ExponentGrid(a.grid.denom, n), out)

    def __sub__(self, other) -> "ExactSeries":
        if not isinstance(other, ExactSeries):
            return NotImplemented
        return self.__add__(-other)

    def scaled(self, c) -> "ExactSeries":
        c = _as_rat(c)
        if c == 0:
            return ExactSeries.zero(self.grid)
        return ExactSeries(self.grid, {k: c * v for k, v in self._c.items()})

    def shifted(self, k: int) -> "ExactSeries":
        """Multiply by the monomial q^(k/D); the known order moves with it."""
        k = int(k)
        g = ExponentGrid(self.grid.denom, self.grid.order + k)
        return ExactSeries(g, {i + k: v for i, v in self._c.items()})

    def __mul__(self, other) -> "ExactSeries":
        if not isinstance(other, ExactSeries):
            return NotImplemented
        a, b = common_grid(self, other)
        ma = a.min_index()
        mb = b.min_index()
        n = min(a.grid.order + mb, b.grid.order + ma)
        grid = ExponentGrid(a.grid.denom, n)
        if not a._c or not b._c:
            return ExactSeries.zero(grid)
        return ExactSeries(grid, _convolve(a._c, b._c, n))

    def __pow__(self, k: int) -> "ExactSeries":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.invert() ** (-k)
        out = ExactSeries.one(self.grid)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def invert(self) -> "ExactSeries":
        """Multiplicative inverse mod q^(N/D); needs unit constant term.

        Requires non-negative support: series with genuinely negative leading
        exponent should be shifted to index 0 by the caller first.
        """
        if self.min_index() < 0:
            raise ZeroConstantTerm("inverse of a series with negative leading exponent")
        a0 = self.coeff(0)
        if a0 == 0:
            raise ZeroConstantTerm("constant term vanishes, series not invertible")
        n = self.grid.order
        inv0 = 1 / a0
        out: dict[int, Fraction] = {0: inv0}
        akeys = sorted(k for k in self._c if k > 0)
        for k in range(1, n):
            acc = _ZERO
            for j in akeys:
                if j > k:
                    break
                w = out.get(k - j)
                if w is not None:
                    acc += self._c[j] * w
            if acc:
                out[k] = -acc * inv0
        return ExactSeries(self.grid, out)

    def __truediv__(self, other) -> "ExactSeries":
        if not isinstance(other, ExactSeries):
            return NotImplemented
        return self * other.invert()

    # -- factor helpers (sparse linear factors, O(N) each) ---------------

    def times_factor(self, factor: Iterable[tuple[int, Fraction]]) -> "ExactSeries":
        """Multiply by a sparse polynomial given as [(index, coef), ...]."""
        fac = [(int(g), _as_rat(c)) for g, c in factor if c != 0]
        if not fac:
            return ExactSeries.zero(self.grid)
        gmin = min(g for g, _ in fac)
        n = self.grid.order + min(0, gmin)
        out: dict[int, Fraction] = {}
        for k, v in self._c.items():
            for g, c in fac:
                i = k + g
                if i >= n:
                    continue
                w = out.get(i, _ZERO) + c * v
                if w:
                    out[i] = w
                else:
                    out.pop(i, None)
        return ExactSeries(ExponentGrid(self.grid.denom, n), out)

    def div_one_minus(self, c: Fraction, g: int) -> "ExactSeries":
        """Divide by (1 - c * q^(g/D)) with g > 0, via the geometric recurrence."""
        g = int(g)
        if g <= 0:
            raise ValueError("div_one_minus needs a strictly positive shift")
        c = _as_rat(c)
        if c == 0 or self.is_zero:
            return self
        lo = self.min_index()
        n = self.grid.order
        dense = [_ZERO] * (n - lo)
        for k, v in self._c.items():
            dense[k - lo] = v
        for i in range(g, n - lo):
            prev = dense[i - g]
            if prev:
                dense[i] += c * prev
        return ExactSeries(self.grid, {lo + i: v for i, v in enumerate(dense) if v})


def common_grid(a: ExactSeries, b: ExactSeries) -> tuple[ExactSeries, ExactSeries]:
    """Regrid both operands to the lcm denominator."""
    da, db = a.grid.denom, b.grid.denom
    if da == db:
        return a, b
    d = math.lcm(da, db)
    return a.regrid(d), b.regrid(d)


def _convolve(a: dict[int, Fraction], b: dict[int, Fraction], order: int) -> dict[int, Fraction]:
    """Cauchy product of coefficient maps, truncated below `order`.

    Works over a single common integer denominator per operand so the inner
    loop is pure big-int arithmetic.
    """
    if len(a) > len(b):
        a, b = b, a
    da = math.lcm(*(v.denominator for v in a.values())) if a else 1
    db = math.lcm(*(v.denominator for v in b.values())) if b else 1
    ia = [(k, int(v * da)) for k, v in a.items()]
    ib = sorted((k, int(v * db)) for k, v in b.items())
    out: dict[int, int] = {}
    bkeys = [k for k, _ in ib]
    bvals = [v for _, v in ib]
    import bisect

    for ka, va in ia:
        hi = bisect.bisect_left(bkeys, order - ka)
        for idx in range(hi):
            i = ka + bkeys[idx]
            out[i] = out.get(i, 0) + va * bvals[idx]
    den = da * db
    return {k: Fraction(v, den) for k, v in out.items() if v}


# -- parameters of the form c * q^e ------------------------------------


@dataclass(frozen=True)
class QMono:
    """Exact parameter value c * q^e with rational c and rational exponent e."""

    coef: Fraction
    exp: Fraction = _ZERO

    @staticmethod
    def of(x, exp=_ZERO) -> "QMono":
        if isinstance(x, QMono):
            return x
        return QMono(_as_rat(x), _as_rat(exp))

    @property
    def is_zero(self) -> bool:
        return self.coef == 0

    def __neg__(self) -> "QMono":
        return QMono(-self.coef, self.exp)

    def __mul__(self, other: "QMono") -> "QMono":
        other = QMono.of(other)
        return QMono(self.coef * other.coef, self.exp + other.exp)

    def inverse(self) -> "QMono":
        if self.coef == 0:
            raise ZeroDivisionError("inverse of zero parameter")
        return QMono(1 / self.coef, -self.exp)

    def power(self, k: int) -> "QMono":
        if self.coef == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero parameter")
            return QMono(_ONE if k == 0 else _ZERO)
        return QMono(self.coef ** k, self.exp * k)

    def to_series(self, grid: ExponentGrid) -> ExactSeries:
        if self.coef == 0:
            return ExactSeries.zero(grid)
        return ExactSeries.monomial(grid, self.coef, grid.index_of(self.exp))


# -- coefficient dump format -------------------------------------------


def write_coeff_csv(series: ExactSeries, fh: IO[str]) -> None:
    """Dump rows `k, numerator, denominator` with a `# D=.. N=..` header.

    Every index from min(0, lowest stored) through N-1 is emitted so that two
    dumps of equal series are equal line for line.
    """
    g = series.grid
    fh.write(f"# D={g.denom} N={g.order}\n")
    lo = min(0, series.min_index())
    for k in range(lo, g.order):
        v = series.coeff(k)
        fh.write(f"{k},{v.numerator},{v.denominator}\n")


def read_coeff_csv(fh: IO[str]) -> ExactSeries:
    """Inverse of :func:`write_coeff_csv`."""
    header = fh.readline().strip()
    if not header.startswith("# D=") or " N=" not in header:
        raise ValueError(f"bad coefficient dump header: {header!r}")
    dpart, npart = header[2:].split()
    grid = ExponentGrid(int(dpart[2:]), int(npart[2:]))
    coeffs: dict[int, Fraction] = {}
    for line in fh:
        line = line.strip()
        if not line:
            continue
        k, num, den = line.split(",")
        coeffs[int(k)] = Fraction(int(num), int(den))
    return ExactSeries(grid, coeffs)


def max_abs_diff(a: ExactSeries, b: ExactSeries) -> tuple[Fraction, int]:
    """Largest |coefficient difference| on the common known range.

    Returns (deviation, comparable_order) where comparable_order is the number
    of grid indices actually compared.
    """
    x, y = common_grid(a, b)
    n = min(x.grid.order, y.grid.order)
    dev = _ZERO
    for k in set(x._c) | set(y._c):
        if k < n:
            d = abs(x.coeff(k) - y.coeff(k))
            if d > dev:
                dev = d
    return dev, n
