"""Arbitrary-precision numerics: dilogarithm, root solvers, delta constants.

All public functions take an explicit :class:`Precision` and run under
``mp.workprec(bits + guard)``.  Results are therefore accurate to roughly
``2^(-bits)`` with the slack documented per operation; nothing reads or
mutates global precision outside the local context.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

from .errors import DomainError, NoBracket, PrecisionLoss

DEFAULT_GUARD = 32


@dataclass(frozen=True)
class Precision:
    """Precision budget: `bits` of claimed accuracy plus internal guard bits."""

    bits: int = 256
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        if self.bits < 64:
            raise DomainError("precision must be at least 64 bits")
        if self.guard < 0:
            raise DomainError("guard bits must be non-negative")

    @property
    def work(self) -> int:
        return self.bits + self.guard

    @property
    def eps(self) -> mpf:
        with mp.workprec(self.work):
            return mpf(2) ** (-self.bits)

    def tiny(self, extra: int = 0) -> mpf:
        with mp.workprec(self.work):
            return mpf(2) ** (-(self.work + extra))


def to_mp(x, prec: Precision):
    """Convert int/Fraction/float/str/mpf/mpc to an mp number at working precision."""
    with mp.workprec(prec.work):
        if isinstance(x, (mpf, mpc)):
            return x
        if isinstance(x, Fraction):
            return mpf(x.numerator) / mpf(x.denominator)
        if isinstance(x, complex):
            return mpc(x.real, x.imag)
        if isinstance(x, (int, float, str)):
            return mpf(x)
    raise TypeError(f"cannot convert {type(x).__name__} to mp number")


def pi_val(prec: Precision) -> mpf:
    with mp.workprec(prec.work):
        return +mp.pi


def exp_(x, prec: Precision):
    with mp.workprec(prec.work):
        return mp.exp(to_mp(x, prec))


def log_(x, prec: Precision):
    """Natural log; DomainError for non-positive reals (complex args allowed)."""
    with mp.workprec(prec.work):
        v = to_mp(x, prec)
        if isinstance(v, mpf) and v <= 0:
            raise DomainError(f"log of non-positive real {v}")
        return mp.log(v)


def pow_(x, y, prec: Precision):
    """Principal power x**y; DomainError for 0**0 and negative real bases."""
    with mp.workprec(prec.work):
        xv = to_mp(x, prec)
        yv = to_mp(y, prec)
        if xv == 0:
            if yv == 0:
                raise DomainError("0**0 is undefined")
            return mpf(0)
        if isinstance(xv, mpf) and xv < 0 and not (isinstance(yv, mpf) and yv == int(yv)):
            raise DomainError("negative real base with non-integer exponent")
        return xv ** yv


def sqrt_(x, prec: Precision):
    with mp.workprec(prec.work):
        return mp.sqrt(to_mp(x, prec))


def binom2(n):
    """n*(n-1)/2 for real or complex n."""
    return n * (n - 1) / 2


# -- dilogarithm -------------------------------------------------------


def _li2_direct(z, cap: int):
    """Power series sum z^n / n^2, caller guarantees |z| <= ~0.75."""
    total = mp.mpf(0) if isinstance(z, mpf) else mp.mpc(0)
    term = z
    n = 1
    eps = mpf(2) ** (-(mp.prec + 4))
    while n <= cap:
        total += term / (n * n)
        if abs(term) < eps * (1 + abs(total)):
            return total
        term *= z
        n += 1
    raise PrecisionLoss(f"dilogarithm series did not converge within {cap} terms")


def li2(z, prec: Precision):
    """Dilogarithm Li2(z) = sum_{n>=1} z^n/n^2 on the closed unit disk.

    Direct summation for |z| <= 1/2; otherwise the argument is moved by the
    reflection identity Li2(z) + Li2(1-z) + log(z)log(1-z) = pi^2/6 and the
    Landen map z -> z/(z-1) until the series applies.  Slack: a few ulps from
    the final combination, absorbed by the guard bits.
    """
    with mp.workprec(prec.work):
        zv = to_mp(z, prec)
        if abs(zv) > 1 + mpf(2) ** (-prec.bits // 2):
            raise DomainError(f"li2 restricted to |z| <= 1, got |z|={abs(zv)}")
        cap = 10 * prec.bits
        pi2_6 = mp.pi ** 2 / 6
        if zv == 1:
            return pi2_6
        if abs(zv) <= mpf("0.5"):
            return _li2_direct(zv, cap)
        if abs(1 - zv) <= mpf("0.5"):
            return pi2_6 - mp.log(zv) * mp.log(1 - zv) - _li2_direct(1 - zv, cap)
        w = zv / (zv - 1)
        if abs(w) <= mpf("0.5"):
            return -_li2_direct(w, cap) - mp.log(1 - zv) ** 2 / 2
        # remaining ring: combine reflection with the Landen map; the image
        # (1-z)/(-z) ... fall back to the direct series, still geometric for
        # |z| <= 1 away from 1 after mapping through 1 - 1/z.
        u = 1 - 1 / zv
        if abs(u) <= mpf("0.75"):
            # Li2(z) = pi^2/6 - log(z)log(1-z) - Li2(1-z); Li2(1-z) via Landen
            # with (1-z)/(-z) = u.
            li2_1mz = -_li2_direct(u, cap) - mp.log(zv) ** 2 / 2
            return pi2_6 - mp.log(zv) * mp.log(1 - zv) - li2_1mz
        return _li2_direct(zv, cap)


# -- root solvers ------------------------------------------------------


def _solve_increasing(f, fprime, lo, hi, prec: Precision):
    """Root of strictly increasing f on (lo, hi): bisection bracket, Newton polish."""
    with mp.workprec(prec.work):
        flo, fhi = f(lo), f(hi)
        if flo == 0:
            return lo
        if fhi == 0:
            return hi
        if flo > 0 or fhi < 0:
            raise NoBracket(f"no sign change: f({lo})={flo}, f({hi})={fhi}")
        for _ in range(60):
            mid = (lo + hi) / 2
            fm = f(mid)
            if fm == 0:
                return mid
            if fm < 0:
                lo = mid
            else:
                hi = mid
        # Newton doubles the correct digits each step; keep iterates bracketed
        # and remember the smallest-residual point seen.
        x = (lo + hi) / 2
        stop = abs(x) * mpf(2) ** (-prec.work + 2) + mpf(2) ** (-prec.work - 8)
        best, bestf = x, abs(f(x))
        for _ in range(prec.work.bit_length() + 6):
            fx = f(x)
            if fx == 0:
                return x
            if abs(fx) < bestf:
                best, bestf = x, abs(fx)
            d = fprime(x)
            if d == 0:
                break
            step = fx / d
            nx = x - step
            if not (lo <= nx <= hi):
                nx = (lo + hi) / 2
            fnx = f(nx)
            if fnx == 0:
                return nx
            if abs(fnx) < bestf:
                best, bestf = nx, abs(fnx)
            if fnx < 0:
                lo = nx
            else:
                hi = nx
            x = nx
            if abs(step) < stop:
                break
        return best


def solve_w(alpha, z, exponent, prec: Precision) -> mpf:
    """Positive root w in (0,1) of  w + z^(-1) * w^e = 1  for e in (0, 1].

    The left side is strictly increasing on (0,1), so the root is unique.
    Residual is kept below 2^(-bits+8).
    """
    with mp.workprec(prec.work):
        av = to_mp(alpha, prec)
        zv = to_mp(z, prec)
        ev = to_mp(exponent, prec)
        if av < 1:
            raise DomainError("alpha must be >= 1")
        if zv <= 0:
            raise DomainError("z must be positive")
        if not (0 < ev <= 1):
            raise DomainError("exponent must lie in (0, 1]")
        zi = 1 / zv

        def f(w):
            return w + zi * w ** ev - 1

        def fprime(w):
            return 1 + zi * ev * w ** (ev - 1)

        edge = mpf(2) ** (-prec.bits)
        root = _solve_increasing(f, fprime, edge, 1 - edge, prec)
        if abs(f(root)) > mpf(2) ** (-prec.bits + 8):
            raise PrecisionLoss("solve_w residual above tolerance")
        return root


def solve_macmain_z(a, b, prec: Precision) -> mpf:
    """Positive root z in (0,1) of  a*z^(2b) + z - 1 = 0  for a, b > 0."""
    with mp.workprec(prec.work):
        av = to_mp(a, prec)
        bv = to_mp(b, prec)
        if av <= 0 or bv <= 0:
            raise DomainError("a and b must be positive")

        def f(z):
            return av * z ** (2 * bv) + z - 1

        def fprime(z):
            return 2 * av * bv * z ** (2 * bv - 1) + 1

        edge = mpf(2) ** (-prec.bits)
        root = _solve_increasing(f, fprime, edge, 1 - edge, prec)
        if abs(f(root)) > mpf(2) ** (-prec.bits + 8):
            raise PrecisionLoss("solve_macmain_z residual above tolerance")
        return root


# -- the delta constant ------------------------------------------------


def delta_alpha(alpha, z, prec: Precision) -> mpf:
    """Decay constant delta_alpha(z) controlling the companion-quotient error.

    delta = 1/alpha - 1/6 + [Li2(w_a) + Li2(w_b) + log^2(w_a)/(2 alpha)
            + (1 - 1/alpha) log^2(w_b)/2 - log(z) log(w_a w_b)] / (2 pi^2),

    where w_a solves w + z^(-1) w^(1/alpha) = 1 and w_b solves
    w + z^(-1) w^(1 - 1/alpha) = 1.  At alpha = 1 the w_b equation
    degenerates to w = 1 - 1/z: defined for z > 1, extended by continuity
    (the w_b terms vanish) at z = 1, DomainError below.
    """
    with mp.workprec(prec.work):
        av = to_mp(alpha, prec)
        zv = to_mp(z, prec)
        if av < 1:
            raise DomainError("alpha must be >= 1")
        if zv <= 0:
            raise DomainError("z must be positive")
        pi2 = mp.pi ** 2
        wa = solve_w(av, zv, 1 / av, prec)
        la = mp.log(wa)
        if av == 1:
            if zv > 1:
                wb = 1 - 1 / zv
                lb = mp.log(wb)
                acc = li2(wa, prec) + li2(wb, prec) + la * la / (2 * av)
                acc += (1 - 1 / av) * lb * lb / 2 - mp.log(zv) * (la + lb)
            elif zv == 1:
                acc = li2(wa, prec) + la * la / 2
            else:
                raise DomainError("alpha = 1 requires z >= 1")
        else:
            wb = solve_w(av, zv, 1 - 1 / av, prec)
            lb = mp.log(wb)
            acc = li2(wa, prec) + li2(wb, prec) + la * la / (2 * av)
            acc += (1 - 1 / av) * lb * lb / 2 - mp.log(zv) * (la + lb)
        return 1 / av - mpf(1) / 6 + acc / (2 * pi2)


def delta_alpha_growth_form(alpha, z, prec: Precision) -> mpf:
    """Same constant assembled from the two series growth rates.

    delta = 1/alpha - (1/(2 pi^2)) (pi^2/6 + c(z) + (alpha/2) log^2 z) with
    c(z) = Li2(1-w2) + (1-1/alpha) log^2(w2)/2 - Li2(1-w1) - (alpha/2) log^2(w1),
    where w1 solves z^alpha w^alpha + w = 1 and w2 solves
    w + z^(-1) w^(1-1/alpha) = 1.  Independent route used to cross-check
    :func:`delta_alpha`.
    """
    with mp.workprec(prec.work):
        av = to_mp(alpha, prec)
        zv = to_mp(z, prec)
        if av <= 1:
            raise DomainError("growth form needs alpha > 1")
        pi2 = mp.pi ** 2
        za = zv ** av

        def f1(w):
            return za * w ** av + w - 1

        def f1prime(w):
            return za * av * w ** (av - 1) + 1

        edge = mpf(2) ** (-prec.bits)
        w1 = _solve_increasing(f1, f1prime, edge, 1 - edge, prec)
        w2 = solve_w(av, zv, 1 - 1 / av, prec)
        c = li2(1 - w2, prec) + (1 - 1 / av) * mp.log(w2) ** 2 / 2
        c -= li2(1 - w1, prec) + av * mp.log(w1) ** 2 / 2
        return 1 / av - (pi2 / 6 + c + av * mp.log(zv) ** 2 / 2) / (2 * pi2)


# -- evaluation of exact series ----------------------------------------


def eval_series(series, q, prec: Precision):
    """Evaluate an ExactSeries at a numeric q: sum c_k * q^(k/D)."""
    with mp.workprec(prec.work):
        qv = to_mp(q, prec)
        d = series.grid.denom
        q1 = qv if d == 1 else mp.exp(mp.log(qv) / d)
        total = mp.mpf(0) if isinstance(q1, mpf) else mp.mpc(0)
        last_k = None
        power = None
        for k, c in series.items():
            if last_k is None:
                power = q1 ** k
            else:
                power = power * q1 ** (k - last_k)
            last_k = k
            total += power * mpf(c.numerator) / mpf(c.denominator)
        return total
