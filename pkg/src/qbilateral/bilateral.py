"""Bilateral q-series families in both engines.

The central objects, for r parameter pairs (x_s, y_s), slope alpha >= r and
argument z, with every Pochhammer symbol in base q^base:

  L_alpha(x; y; q, z)  = sum_{n in Z} z^n q^{(alpha-r) C(n,2)}
                           prod_s (1/y_s)_n (-y_s)^n / (x_s)_n
  H_alpha(x; y; q)     = sum_{i_s, j_s >= 0} q^{Q_alpha(i,j)/2}
                           prod_s (-x_s)^{i_s} (-y_s)^{j_s} / ((q)_{i_s} (q)_{j_s})
  Q_alpha(i, j)        = sum_s (i_s^2 + j_s^2) - (1/alpha) (sum_s (i_s - j_s))^2

plus the classical bilateral r-psi-r wrapper and the one-variable families
f1, f2 with their hat (bilateral) and tilde (companion) versions.

Negative summation indices are normalized by the reflection relation so the
exact engine only manipulates computable truncations:

  n = -m:   (1/y)_n (-y)^n = q^{m(m+1)/2} / (q y)_m
            1 / (x)_n      = (-x)^m q^{-m(m+1)/2} (q/x)_m     (x != 0).

For alpha = r the termwise exponents stop growing; the exact engine then sums
explicitly until the terms stabilize modulo the grid order and closes the
remaining geometric tail in closed form (step ratio must be a rational
different from 1, otherwise Divergence).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .errors import Divergence, DomainError, PolePoch
from .exactq import ExactSeries, ExponentGrid, QMono, Rat
from .numq import Precision, to_mp
from .qfun import INFINITY, poch_series

_ONE = Fraction(1)
_ZERO = Fraction(0)


@dataclass(frozen=True)
class AlphaRational:
    """Slope alpha = a/b as a reduced positive fraction."""

    a: int
    b: int = 1

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise DomainError("alpha must be a positive rational")
        if math.gcd(self.a, self.b) != 1:
            raise DomainError(f"alpha = {self.a}/{self.b} not in lowest terms")

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.b)


@dataclass(frozen=True)
class BilateralParams:
    """One L/H instance: slope, rank, parameter vectors and argument."""

    alpha: object
    r: int
    x: tuple
    y: tuple
    z: object

    def __post_init__(self):
        if self.r not in (1, 2):
            raise DomainError("rank r is capped at 2")
        if len(self.x) != self.r or len(self.y) != self.r:
            raise DomainError("parameter vectors must have length r")


class QuadFormQ:
    """The convergence-controlling quadratic form of the multiple series."""

    def __init__(self, alpha, r: int):
        self.alpha = alpha.value if isinstance(alpha, AlphaRational) else Rat(alpha)
        self.r = int(r)
        if self.alpha < self.r:
            raise DomainError("quadratic form needs alpha >= r")

    def value(self, i, j) -> Fraction:
        i = (i,) if isinstance(i, int) else tuple(i)
        j = (j,) if isinstance(j, int) else tuple(j)
        if len(i) != self.r or len(j) != self.r:
            raise DomainError("index vectors must have length r")
        s2 = sum(v * v for v in i) + sum(v * v for v in j)
        d = sum(i) - sum(j)
        return Fraction(s2) - Fraction(d * d) / self.alpha

    def lambda_min_orthant(self) -> Fraction:
        """Largest c with Q >= c |v|^2 on the nonnegative orthant: 1 - r/alpha."""
        return 1 - Fraction(self.r) / self.alpha


def _qm(v) -> QMono:
    return v if isinstance(v, QMono) else QMono.of(v)


def _alpha_frac(alpha) -> Fraction:
    if isinstance(alpha, AlphaRational):
        return alpha.value
    return Rat(alpha)


# ----------------------------------------------------------------------
# exact engine: the generic bilateral sum
# ----------------------------------------------------------------------


def _plan_side(grid, base, alpha, r, xs, ys, z, negative, n_target):
    """Index range, tail kind and headroom for one summation wing, exactly.

    Returns (n_stop, kind, dips) with kind in {terminating, geometric,
    vanishing}; every term with index beyond n_stop either vanishes, lies
    above the grid order, or is covered by the closed geometric tail.
    """
    idx = grid.index_of
    target = Fraction(n_target, grid.denom)

    if negative:
        zero_cnt = sum(1 for s in xs if s.is_zero)
        quad = base * (alpha - r + zero_cnt)
        lin = base * (alpha - r + zero_cnt) - z.exp + sum(
            (s.exp for s in xs if not s.is_zero), _ZERO
        )
        vanish = None
        for s in xs:
            if not s.is_zero and s.coef == 1:
                jj = s.exp / base
                if jj.denominator == 1 and jj >= 1:
                    vanish = int(jj) if vanish is None else min(vanish, int(jj))
        stabilizers = [(base - s.exp, base) for s in xs if not s.is_zero]
        stabilizers += [(base + s.exp, base) for s in ys if not s.is_zero]
        ratio = None
        if quad == 0 and lin == 0:
            ratio = Fraction(1) / z.coef
            for s in xs:
                ratio *= -s.coef
    else:
        zero_cnt = sum(1 for s in ys if s.is_zero)
        quad = base * (alpha - r + zero_cnt)
        lin = z.exp + sum((min(_ZERO, s.exp) for s in ys if not s.is_zero), _ZERO)
        vanish = None
        for s in ys:
            if not s.is_zero and s.coef == 1:
                jj = s.exp / base
                if jj.denominator == 1 and jj >= 0:
                    v = int(jj) + 1
                    vanish = v if vanish is None else min(vanish, v)
        stabilizers = [(-s.exp, base) for s in ys if not s.is_zero]
        stabilizers += [(s.exp, base) for s in xs if not s.is_zero]
        ratio = None
        if quad == 0 and lin == 0:
            ratio = z.coef
            for s in ys:
                ratio *= -s.coef

    def dips_through(count: int) -> int:
        total = 0
        if negative:
            for s in xs:
                if not s.is_zero:
                    for j in range(1, count + 1):
                        e = base * j - s.exp
                        if e < 0:
                            total += -idx(e)
            # (q y_s)_m divisions never lower the minimal exponent
        else:
            for s in xs:
                if not s.is_zero:
                    for j in range(count):
                        e = s.exp + base * j
                        if e < 0:
                            total += -idx(e)
            for s in ys:
                if not s.is_zero and s.exp < 0:
                    total += -idx(s.exp) * count
        return total

    def bound(n: int) -> Fraction:
        return quad * Fraction(n * (n - 1), 2) + lin * n - Fraction(dips_through(n), grid.denom)

    if vanish is not None:
        return vanish, "vanishing", dips_through(vanish + 1)
    if quad > 0:
        vertex = Fraction(1, 2) - lin / quad
        n = 1 if negative else 0
        cap = 64 * (n_target + grid.denom + 8)
        while not (n > vertex and bound(n) >= target):
            n += 1
            if n > cap:
                raise Divergence("bilateral cut failed to terminate")
        return n, "terminating", dips_through(n + 1)
    if quad == 0 and lin > 0:
        n = 1
        while bound(n) < target:
            n += 1
        return n + 1, "terminating", dips_through(n + 2)
    if ratio is not None:
        if ratio == 1:
            raise Divergence("bilateral geometric tail at ratio 1")
        extra = Fraction(dips_through(8), grid.denom)
        thresh = 1
        for e0, step in stabilizers:
            # correction factor exponent e0 + step*n must clear the order
            need = (target + extra - e0) / step
            thresh = max(thresh, int(math.ceil(need)) + 1)
        return thresh + 1, "geometric", dips_through(thresh + 2)
    raise Divergence("bilateral sum diverges for these parameters")


def _divide_linear(p: ExactSeries, c: Fraction, e: int) -> ExactSeries:
    """Divide by (1 - c q^(e/D)) handling zero, scalar and negative shifts."""
    if c == 0:
        return p
    if e > 0:
        return p.div_one_minus(c, e)
    if e == 0:
        if c == 1:
            raise PolePoch("bilateral term divides by a vanishing factor")
        return p.scaled(1 / (1 - c))
    # (1 - c q^e) = -c q^e (1 - q^(-e)/c) for e < 0
    return p.shifted(-e).scaled(-1 / c).div_one_minus(1 / c, -e)


def l_vector_series(params: BilateralParams, grid: ExponentGrid, base=_ONE) -> ExactSeries:
    """Exact truncation of L_alpha(x; y; q^base, z), both summation wings."""
    base = Rat(base)
    alpha = _alpha_frac(params.alpha)
    r = params.r
    xs = tuple(_qm(v) for v in params.x)
    ys = tuple(_qm(v) for v in params.y)
    z = _qm(params.z)
    if z.is_zero:
        return ExactSeries.one(grid)

    n_pos, kind_pos, dip_pos = _plan_side(grid, base, alpha, r, xs, ys, z, False, grid.order)
    n_neg, kind_neg, dip_neg = _plan_side(grid, base, alpha, r, xs, ys, z, True, grid.order)

    idxof = grid.index_of
    pref_min = 0
    for n in range(n_pos + 1):
        e = idxof(z.exp * n + base * (alpha - r) * Fraction(n * (n - 1), 2))
        pref_min = min(pref_min, e)
    xs_exp = sum((s.exp for s in xs if not s.is_zero), _ZERO)
    for m in range(1, n_neg + 2):
        e = idxof(
            -z.exp * m + base * (alpha - r) * Fraction(m * (m + 1), 2) + xs_exp * m
        )
        pref_min = min(pref_min, e)
    ext = dip_pos + dip_neg - pref_min + 4 * grid.denom
    work = ExponentGrid(grid.denom, grid.order + ext)

    total = _sum_positive(work, base, alpha, r, xs, ys, z, n_pos, kind_pos)
    total = total + _sum_negative(work, base, alpha, r, xs, ys, z, n_neg, kind_neg)
    return total.truncated(min(total.grid.order, grid.order))


def _sum_positive(work, base, alpha, r, xs, ys, z, n_stop, kind) -> ExactSeries:
    idx = work.index_of
    p = ExactSeries.one(work)
    total = ExactSeries.zero(work)
    term = None
    for n in range(0, n_stop + 1):
        if n > 0:
            for s in ys:
                if s.is_zero:
                    p = p.times_factor([(idx(base * (n - 1)), _ONE)])
                else:
                    p = p.times_factor(
                        [(idx(base * (n - 1)), _ONE), (idx(s.exp), -s.coef)]
                    )
            for s in xs:
                if not s.is_zero:
                    p = _divide_linear(p, s.coef, idx(s.exp + base * (n - 1)))
            if p.is_zero:
                return total
        pref = idx(z.exp * n + base * (alpha - r) * Fraction(n * (n - 1), 2))
        term = p.scaled(z.coef ** n).shifted(pref)
        total = total + term
    if kind == "geometric" and term is not None:
        ratio = z.coef
        for s in ys:
            ratio *= -s.coef
        total = total + term.scaled(ratio / (1 - ratio))
    return total


def _sum_negative(work, base, alpha, r, xs, ys, z, m_stop, kind) -> ExactSeries:
    idx = work.index_of
    p = ExactSeries.one(work)
    total = ExactSeries.zero(work)
    term = None
    zc_inv = 1 / z.coef
    xsign = _ONE
    for s in xs:
        if not s.is_zero:
            xsign *= -s.coef
    xs_exp = sum((s.exp for s in xs if not s.is_zero), _ZERO)
    for m in range(1, m_stop + 1):
        zero_hit = False
        for s in xs:
            if s.is_zero:
                p = p.times_factor([(idx(base * m), _ONE)])
            else:
                e = idx(base * m - s.exp)
                if e == 0 and s.coef == 1:
                    zero_hit = True
                p = p.times_factor([(0, _ONE), (e, -1 / s.coef)])
        for s in ys:
            if not s.is_zero:
                p = _divide_linear(p, s.coef, idx(s.exp + base * m))
        if zero_hit or p.is_zero:
            return total
        pref = idx(
            -z.exp * m + base * (alpha - r) * Fraction(m * (m + 1), 2) + xs_exp * m
        )
        term = p.scaled(zc_inv ** m * xsign ** m).shifted(pref)
        total = total + term
    if kind == "geometric" and term is not None:
        ratio = zc_inv * xsign
        total = total + term.scaled(ratio / (1 - ratio))
    return total


def l_scalar_series(x, z, alpha, grid: ExponentGrid, base=_ONE) -> ExactSeries:
    """L_alpha(x; q^base, z) = sum_n z^n q^{alpha C(n,2)} / (x)_n, exact."""
    p = BilateralParams(
        alpha=_alpha_frac(alpha), r=1, x=(_qm(x),), y=(QMono(_ZERO),), z=_qm(z)
    )
    return l_vector_series(p, grid, base)


def l_vector_series_expanded(params: BilateralParams, grid: ExponentGrid, base=_ONE) -> ExactSeries:
    """Independent expansion through the reflected product representation:

    L = [prod_s (x_s, q y_s)_inf]^(-1) sum_n z^n q^{alpha C(n,2)}
          prod_s (x_s q^n)_inf (y_s q^(1-n))_inf.

    Slower than :func:`l_vector_series`; it exists to cross-check the two
    displayed forms of the definition against each other (alpha > r).
    """
    base = Rat(base)
    alpha = _alpha_frac(params.alpha)
    r = params.r
    xs = tuple(_qm(v) for v in params.x)
    ys = tuple(_qm(v) for v in params.y)
    z = _qm(params.z)
    if z.is_zero:
        return ExactSeries.one(grid)
    if alpha <= r:
        raise DomainError("expanded form implemented for alpha > r")
    idx = grid.index_of

    def term_dips(n: int) -> Fraction:
        """Total negative-exponent mass of the n-th term's product factors."""
        d = _ZERO
        for s in xs:
            if not s.is_zero:
                j = 0
                while s.exp + base * (n + j) < 0:
                    d += -(s.exp + base * (n + j))
                    j += 1
        for s in ys:
            if not s.is_zero:
                j = 0
                while s.exp + base * (1 - n + j) < 0:
                    d += -(s.exp + base * (1 - n + j))
                    j += 1
        return d

    def term_floor(n: int) -> Fraction:
        return z.exp * n + base * alpha * Fraction(n * (n - 1), 2) - term_dips(n)

    target = Fraction(grid.order, grid.denom)
    lo = 0
    while term_floor(lo - 1) < target or term_floor(lo - 2) < target:
        lo -= 1
        if lo < -16 * grid.order:
            raise Divergence("expanded form cut failed (downward)")
    hi = 0
    while term_floor(hi + 1) < target or term_floor(hi + 2) < target:
        hi += 1
        if hi > 16 * grid.order:
            raise Divergence("expanded form cut failed (upward)")

    den_dip = _ZERO
    for s in xs:
        if not s.is_zero:
            j = 0
            while s.exp + base * j < 0:
                den_dip += -(s.exp + base * j)
                j += 1
    for s in ys:
        if not s.is_zero:
            j = 0
            while s.exp + base * (1 + j) < 0:
                den_dip += -(s.exp + base * (1 + j))
                j += 1
    ext = 4 * grid.denom + 2 * idx(den_dip)
    for n in range(lo, hi + 1):
        ext = max(ext, idx(term_dips(n)) + 2 * idx(den_dip) + 4 * grid.denom)
    work = ExponentGrid(grid.denom, grid.order + ext)
    total = ExactSeries.zero(work)
    for n in range(lo, hi + 1):
        t = ExactSeries.monomial(
            work, z.coef ** n, idx(z.exp * n + base * alpha * Fraction(n * (n - 1), 2))
        )
        for s in xs:
            t = t * poch_series(QMono(s.coef, s.exp + base * n), INFINITY, work, base)
        for s in ys:
            t = t * poch_series(QMono(s.coef, s.exp + base * (1 - n)), INFINITY, work, base)
        total = total + t
    denom = ExactSeries.one(work)
    for s in xs:
        denom = denom * poch_series(s, INFINITY, work, base)
    for s in ys:
        denom = denom * poch_series(QMono(s.coef, s.exp + base), INFINITY, work, base)
    lo_idx = denom.min_index()
    inv = denom.shifted(-lo_idx).invert().shifted(-lo_idx)
    out = total * inv
    return out.truncated(min(out.grid.order, grid.order))


def h_alpha_series(x, y, alpha, grid: ExponentGrid, base=_ONE) -> ExactSeries:
    """Exact H_alpha(x; y; q^base) for rank 1 and alpha > 1.

    Enumerates the (i, j) box certified complete by the orthant bound
    Q(i, j) >= (1 - 1/alpha)(i^2 + j^2).
    """
    base = Rat(base)
    alpha = _alpha_frac(alpha)
    if alpha <= 1:
        raise DomainError("exact multiple sum needs alpha > r = 1")
    xm, ym = _qm(x), _qm(y)
    target = Fraction(grid.order, grid.denom)
    lam = 1 - 1 / alpha

    def exp_of(i: int, j: int) -> Fraction:
        q2 = Fraction(i * i + j * j) - Fraction((i - j) * (i - j)) / alpha
        return base * q2 / 2 + xm.exp * i + ym.exp * j

    def cap(e_lin: Fraction, other_lin: Fraction) -> int:
        slack = _ZERO
        if other_lin < 0:
            slack = other_lin * other_lin / (2 * base * lam)
        n = 0
        while base * lam * Fraction(n * n, 2) + e_lin * n < target + slack + 1:
            n += 1
            if n > 64 * (grid.order + 16):
                raise Divergence("multiple-sum box cut failed")
        return n

    imax = cap(xm.exp, ym.exp) if not xm.is_zero else 0
    jmax = cap(ym.exp, xm.exp) if not ym.is_zero else 0

    ext = 4 * grid.denom
    for i in range(imax + 1):
        for j in range(jmax + 1):
            e = exp_of(i, j)
            if e < 0:
                ext += -grid.index_of(e)
    work = ExponentGrid(grid.denom, grid.order + ext)
    widx = work.index_of

    bcache: list[ExactSeries] = []
    rb = ExactSeries.one(work)
    for j in range(jmax + 1):
        if j > 0:
            rb = rb.div_one_minus(_ONE, widx(base * j))
        bcache.append(rb.scaled((-ym.coef) ** j))
    total = ExactSeries.zero(work)
    recip_a = ExactSeries.one(work)
    for i in range(imax + 1):
        if i > 0:
            recip_a = recip_a.div_one_minus(_ONE, widx(base * i))
        inner = ExactSeries.zero(work)
        hit = False
        for j in range(jmax + 1):
            e = exp_of(i, j)
            if e >= target:
                continue
            hit = True
            inner = inner + bcache[j].shifted(widx(e))
        if not hit:
            continue
        total = total + recip_a.scaled((-xm.coef) ** i) * inner
    return total.truncated(min(total.grid.order, grid.order))


def h1_closed_series(x, y, grid: ExponentGrid, base=_ONE) -> ExactSeries:
    """H_1(x; y; q^base) = (xy)_inf / ((-x)_inf (-y)_inf), the rank-1 boundary case."""
    base = Rat(base)
    xm, ym = _qm(x), _qm(y)
    num = poch_series(xm * ym, INFINITY, grid, base)
    den = poch_series(-xm, INFINITY, grid, base) * poch_series(-ym, INFINITY, grid, base)
    lo = den.min_index()
    inv = den.shifted(-lo).invert().shifted(-lo)
    out = num * inv
    return out.truncated(min(out.grid.order, grid.order))


def psi_series(upper, lower, arg, grid: ExponentGrid, base=_ONE) -> ExactSeries:
    """Classical bilateral r-psi-r sum through its L representation.

    psi(upper; lower; q, w) = sum_n (upper_1, ...)_n / (lower_1, ...)_n w^n
                            = L_r(lower; 1/upper; q, (-1)^r w prod(upper)).
    """
    upper = tuple(_qm(u) for u in upper)
    lower = tuple(_qm(v) for v in lower)
    if len(upper) != len(lower):
        raise DomainError("psi needs matching parameter counts")
    r = len(upper)
    w = _qm(arg)
    if w.is_zero:
        return ExactSeries.one(grid)
    if any(u.is_zero for u in upper):
        raise DomainError("zero numerator parameters not supported by the L route")
    z = w
    for u in upper:
        z = z * u
    if r % 2:
        z = -z
    params = BilateralParams(
        alpha=Fraction(r), r=r, x=lower, y=tuple(u.inverse() for u in upper), z=z
    )
    return l_vector_series(params, grid, base)


# ----------------------------------------------------------------------
# numeric engine
# ----------------------------------------------------------------------


def _base_power(q, base: Fraction):
    if base == 1:
        return q
    return mp.power(q, mpf(base.numerator) / base.denominator)


def l_vector_value(params: BilateralParams, q, prec: Precision, base=_ONE):
    """Numeric bilateral L sum; cuts once terms fall below 2^-(bits+guard)."""
    base = Rat(base)
    with mp.workprec(prec.work):
        qv = to_mp(q, prec)
        if abs(qv) >= 1:
            raise DomainError("numeric engine needs |q| < 1")
        qb = _base_power(qv, base)
        alpha = to_mp(
            _alpha_frac(params.alpha)
            if isinstance(params.alpha, (Fraction, AlphaRational, int))
            else params.alpha,
            prec,
        )
        r = params.r
        xs = [to_mp(v, prec) for v in params.x]
        ys = [to_mp(v, prec) for v in params.y]
        zv = to_mp(params.z, prec)
        if zv == 0:
            return mp.mpf(1)
        real_in = all(isinstance(v, mpf) for v in xs + ys + [zv, qv, qb])
        tiny = mpf(2) ** (-prec.work)
        cap = 64 * prec.work

        total = mp.mpc(0)
        pnum = mp.mpc(1)
        scale = mpf(1)
        drops = 0
        n = 0
        while True:
            pref = zv ** n * mp.power(qb, (alpha - r) * mpf(n * (n - 1)) / 2)
            term = pref * pnum
            total += term
            a = abs(term)
            scale = max(scale, a)
            drops = drops + 1 if a < tiny * scale else 0
            if drops >= 3 and n >= 2:
                break
            if a > mpf(2) ** (4 * prec.work):
                raise Divergence("bilateral sum grows without bound (positive side)")
            for s in ys:
                pnum *= qb ** n - s
            for s in xs:
                f = 1 - s * qb ** n
                if f == 0:
                    raise PolePoch("bilateral term hits a Pochhammer pole")
                pnum /= f
            n += 1
            if n > cap:
                raise Divergence("positive side failed to converge")

        pnum = mp.mpc(1)
        drops = 0
        m = 1
        while True:
            zero_hit = False
            for s in xs:
                if s == 0:
                    pnum *= qb ** m
                else:
                    f = 1 - qb ** m / s
                    if f == 0:
                        zero_hit = True
                    pnum *= f
            for s in ys:
                f = 1 - s * qb ** m
                if f == 0:
                    raise PolePoch("bilateral term hits a Pochhammer pole")
                pnum /= f
            if zero_hit:
                break
            pref = zv ** (-m) * mp.power(qb, (alpha - r) * mpf(m * (m + 1)) / 2)
            for s in xs:
                if s != 0:
                    pref *= (-s) ** m
            term = pref * pnum
            total += term
            a = abs(term)
            scale = max(scale, a)
            drops = drops + 1 if a < tiny * scale else 0
            if drops >= 3 and m >= 2:
                break
            if a > mpf(2) ** (4 * prec.work):
                raise Divergence("bilateral sum grows without bound (negative side)")
            m += 1
            if m > cap:
                raise Divergence("negative side failed to converge")
        return total.real if real_in else total


def l_scalar_value(x, z, alpha, q, prec: Precision, base=_ONE):
    params = BilateralParams(alpha=alpha, r=1, x=(x,), y=(0,), z=z)
    return l_vector_value(params, q, prec, base)


def h_alpha_value(xs, ys, alpha, q, prec: Precision, base=_ONE):
    """Numeric H_alpha for rank r in {1, 2}.

    Splits q^{Q/2} along the coupled index k = sum_s (i_s - j_s):
    H = sum_k q^{-k^2/(2 alpha)} G_k, where G_k is the k-th Laurent
    coefficient of prod_s (x_s q^{1/2} xi)_inf (y_s q^{1/2} / xi)_inf,
    assembled by convolving per-axis Euler coefficient arrays
    c_i = (-v)^i q^{i^2/2} / (q)_i.  On the orthant k^2 <= r |v|^2, so
    weighting each axis by q^{-r i^2 / (2 alpha)} certifies the cut for
    alpha > r (and for alpha = r with all |x_s|, |y_s| < 1).
    """
    base = Rat(base)
    if not isinstance(xs, (tuple, list)):
        xs, ys = (xs,), (ys,)
    r = len(xs)
    if r not in (1, 2) or len(ys) != r:
        raise DomainError("numeric multiple sum supports rank 1 and 2")
    with mp.workprec(prec.work):
        qv = to_mp(q, prec)
        if not isinstance(qv, mpf) or not (0 < qv < 1):
            raise DomainError("numeric multiple sum needs real 0 < q < 1")
        qb = _base_power(qv, base)
        av = to_mp(
            _alpha_frac(alpha) if isinstance(alpha, (Fraction, AlphaRational, int)) else alpha,
            prec,
        )
        if av < r:
            raise DomainError("multiple sum needs alpha >= r")
        xv = [to_mp(v, prec) for v in xs]
        yv = [to_mp(v, prec) for v in ys]
        if av == r:
            for v in list(xv) + list(yv):
                if abs(v) >= 1:
                    raise Divergence("alpha = r needs all |x_s|, |y_s| < 1")
        tiny = mpf(2) ** (-prec.work - 8)

        def axis(val):
            out = [mp.mpc(1)]
            poch = mp.mpc(1)
            i = 1
            peak = mpf(1)
            while True:
                poch *= 1 - qb ** i
                c = (-val) ** i * mp.power(qb, mpf(i * i) / 2) / poch
                w = abs(c) * mp.power(qb, -r * mpf(i * i) / (2 * av))
                if w < tiny and w < peak and i > 2:
                    break
                peak = max(peak, w)
                out.append(c)
                i += 1
                if i > 64 * prec.work:
                    raise Divergence("axis coefficients failed to decay")
            return out

        def conv(a, b):
            out = [mp.mpc(0)] * (len(a) + len(b) - 1)
            for i, va in enumerate(a):
                for j, vb in enumerate(b):
                    out[i + j] += va * vb
            return out

        ax = [axis(v) if v != 0 else [mp.mpc(1)] for v in xv]
        ay = [axis(v) if v != 0 else [mp.mpc(1)] for v in yv]
        pos = ax[0] if r == 1 else conv(ax[0], ax[1])
        neg = ay[0] if r == 1 else conv(ay[0], ay[1])
        total = mp.mpc(0)
        for ip, vp in enumerate(pos):
            for jn, vn in enumerate(neg):
                k = ip - jn
                total += vp * vn * mp.power(qb, -mpf(k * k) / (2 * av))
        if all(isinstance(v, mpf) for v in xv + yv):
            return total.real
        return total


def psi_value(upper, lower, arg, q, prec: Precision, base=_ONE):
    """Numeric bilateral r-psi-r through the L representation."""
    upper = tuple(upper)
    lower = tuple(lower)
    r = len(upper)
    with mp.workprec(prec.work):
        w = to_mp(arg, prec)
        if w == 0:
            return mp.mpf(1)
        uv = [to_mp(u, prec) for u in upper]
        if any(u == 0 for u in uv):
            raise DomainError("zero numerator parameters not supported by the L route")
        z = w
        for u in uv:
            z = z * u
        if r % 2:
            z = -z
        params = BilateralParams(
            alpha=Fraction(r), r=r, x=lower, y=tuple(1 / u for u in uv), z=z
        )
        return l_vector_value(params, q, prec, base)


# ----------------------------------------------------------------------
# the f-families
# ----------------------------------------------------------------------

_F_KINDS = ("f1", "f2", "f1hat", "f2hat", "f1tilde", "f2tilde")


def _f_domain_check(which: str, a, b):
    """Domain of the user-facing (a, b, c); tilde/hat re-parameterizations are
    applied after this and may legitimately leave the region."""
    if which.startswith("f1"):
        if not a > 0:
            raise DomainError("f1 family needs a > 0")
        if not b >= 0.5:
            raise DomainError("f1 family needs b >= 1/2")
    else:
        ok = (a > 0.5 and b > 0) or (0.5 < a < 1 and b == 0)
        if not ok:
            raise DomainError("f2 family needs a > 1/2, b > 0 (or 1/2 < a < 1, b = 0)")


def _unilateral_f(grid: ExponentGrid, a, b, c, kind: str) -> ExactSeries:
    """sum_n a^n q^{b n^2 + c n} w_n with w_n = 1/(q)_n (f1) or (-q)_n (f2)."""
    idx = grid.index_of
    nmax = 0
    dips = 0
    while True:
        e = b * nmax * nmax + c * nmax
        if idx(e) >= grid.order and b * (2 * nmax + 1) + c > 0:
            break
        if e < 0:
            dips += -idx(e)
        nmax += 1
        if nmax > 64 * (grid.order + 8):
            raise Divergence("f-family cut failed to terminate")
    work = ExponentGrid(grid.denom, grid.order + dips + 2 * grid.denom)
    widx = work.index_of
    total = ExactSeries.zero(work)
    weight = ExactSeries.one(work)
    for n in range(nmax + 1):
        if n > 0:
            if kind == "f1":
                weight = weight.div_one_minus(_ONE, widx(Fraction(n)))
            else:
                weight = weight.times_factor([(0, _ONE), (widx(Fraction(n)), _ONE)])
        e = b * n * n + c * n
        if widx(e) < grid.order:
            total = total + weight.scaled(a ** n).shifted(widx(e))
    return total.truncated(min(total.grid.order, grid.order))


def f_family_series(which: str, a, b, c, grid: ExponentGrid) -> ExactSeries:
    """Exact truncation of one f-family member with rational (a, b, c).

    f1 and f2 are summed from their defining unilateral series; the hat
    versions run through the bilateral L representation, so the two routes
    are independent.  The tilde members need a^(1/(2b))-type roots and are
    exact only when those are rational.
    """
    if which not in _F_KINDS:
        raise DomainError(f"unknown family member {which!r}")
    a, b, c = Rat(a), Rat(b), Rat(c)
    _f_domain_check(which, a, b)
    if which == "f1":
        return _unilateral_f(grid, a, b, c, "f1")
    if which == "f2":
        return _unilateral_f(grid, a, b, c, "f2")
    if which == "f1hat":
        return l_scalar_series(QMono(_ONE, _ONE), QMono(a, b + c), 2 * b, grid)
    if which == "f2hat":
        return l_scalar_series(QMono(Fraction(-1)), QMono(1 / a, b - c), 1 + 2 * b, grid)
    if which == "f1tilde":
        aa = _exact_root(a, 2 * b)
        return _unilateral_f(
            grid, -1 / aa, Fraction(1, 2) - 1 / (4 * b), Fraction(1, 2) - c / (2 * b), "f1"
        )
    aa = _exact_root(a, 1 + 2 * b)
    return _unilateral_f(grid, aa, b / (1 + 2 * b), (c - b) / (1 + 2 * b), "f1")


def f2hat_tail_series(a, b, c, grid: ExponentGrid) -> ExactSeries:
    """The bilateral surplus sum_{n>=1} q^{b n^2 - c n} / (a^n (-1; 1/q)_n).

    Built literally from its display, factors (1 + q^-j) included, so it is
    an independent route against f2hat - f2.
    """
    a, b, c = Rat(a), Rat(b), Rat(c)
    total = ExactSeries.zero(grid)
    n = 1
    while True:
        e = b * n * n - c * n - Fraction(n * (n - 1), 2)
        if grid.index_of(e) >= grid.order and b * (2 * n + 1) - c - n > 0:
            break
        dip = grid.index_of(Fraction(n * (n - 1), 2))
        work = ExponentGrid(grid.denom, grid.order + 2 * dip + 2 * grid.denom)
        prod = ExactSeries.one(work)
        for j in range(n):
            prod = prod.times_factor([(0, _ONE), (-work.index_of(Fraction(j)), _ONE)])
        lo = prod.min_index()
        inv = prod.shifted(-lo).invert().shifted(-lo)
        term = inv.scaled(a ** (-n)).shifted(work.index_of(b * n * n - c * n))
        total = total + term.truncated(min(term.grid.order, grid.order))
        n += 1
        if n > 64 * (grid.order + 8):
            raise Divergence("tail cut failed to terminate")
    return total


def _exact_root(a: Fraction, k: Fraction) -> Fraction:
    """Exact a^(1/k) for rational a when the root is rational; DomainError otherwise."""
    if a == 1:
        return Fraction(1)
    if k.denominator != 1:
        a = a ** k.denominator
    kk = int(k.numerator)
    num = round(a.numerator ** (1.0 / kk))
    den = round(a.denominator ** (1.0 / kk))
    for dn in (0, 1, -1):
        for dd in (0, 1, -1):
            n, d = num + dn, den + dd
            if n > 0 and d > 0 and Fraction(n, d) ** kk == a:
                return Fraction(n, d)
    raise DomainError(f"{a}^(1/{k}) is irrational; tilde members need the numeric engine")


def _f_direct_value(kind: str, av, bv, cv, tv, prec: Precision):
    """Raw numeric sum of f1 or f2 at q = e^-t, no domain filtering."""
    q = mp.exp(-tv)
    tiny = mpf(2) ** (-prec.work)
    total = mp.mpf(0)
    poch = mp.mpf(1)
    scale = mpf(1)
    n = 0
    drops = 0
    while True:
        if n > 0:
            poch = poch / (1 - q ** n) if kind == "f1" else poch * (1 + q ** n)
        term = av ** n * mp.exp(-(bv * n * n + cv * n) * tv) * poch
        total += term
        mag = abs(term)
        scale = max(scale, mag)
        drops = drops + 1 if mag < tiny * scale else 0
        if drops >= 3 and n > 2:
            break
        n += 1
        if n > 64 * prec.work:
            raise Divergence("f-family sum failed to converge")
    return total


def f_family_value(which: str, a, b, c, t, prec: Precision):
    """Numeric f-family member at q = e^-t."""
    if which not in _F_KINDS:
        raise DomainError(f"unknown family member {which!r}")
    with mp.workprec(prec.work):
        av = to_mp(a, prec)
        bv = to_mp(b, prec)
        cv = to_mp(c, prec)
        _f_domain_check(which, av, bv)
        tv = to_mp(t, prec)
        q = mp.exp(-tv)
        if which == "f1tilde":
            aa = mp.power(av, -1 / (2 * bv))
            return _f_direct_value("f1", -aa, mpf(1) / 2 - 1 / (4 * bv), mpf(1) / 2 - cv / (2 * bv), tv, prec)
        if which == "f2tilde":
            aa = mp.power(av, 1 / (1 + 2 * bv))
            return _f_direct_value("f1", aa, bv / (1 + 2 * bv), (cv - bv) / (1 + 2 * bv), tv, prec)
        if which == "f1hat":
            return l_scalar_value(q, av * mp.power(q, bv + cv), 2 * bv, q, prec)
        if which == "f2hat":
            return l_scalar_value(mpf(-1), mp.power(q, bv - cv) / av, 1 + 2 * bv, q, prec)
        return _f_direct_value(which, av, bv, cv, tv, prec)
