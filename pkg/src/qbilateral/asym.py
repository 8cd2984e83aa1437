"""Asymptotic main terms as q -> 1 and exponential error-rate fitting.

The transformation identities pair a slowly-converging series at q = e^-t
with a dual expression whose error decays like exp(-C/t).  This module
computes both sides of those pairings, the closed-form predicted quotients,
and fits the constant C from measured residuals at decreasing t.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mp, mpf

from .bilateral import (
    AlphaRational,
    BilateralParams,
    f_family_value,
    h_alpha_value,
    l_scalar_value,
    l_vector_value,
)
from .errors import DomainError, NonPositiveResidual
from .numq import Precision, binom2, delta_alpha, li2, solve_macmain_z, to_mp
from .qfun import INFINITY, poch_value, theta_value


def _alpha_mp(alpha, prec: Precision):
    if isinstance(alpha, AlphaRational):
        alpha = alpha.value
    return to_mp(alpha, prec)


@dataclass
class RateFit:
    """Least-squares fit of residual ~ A exp(-C/t) from (t, residual) samples."""

    samples: list = field(default_factory=list)
    c_fit: object = None
    c_pred: object = None
    rel_err: object = None

    @property
    def decaying(self) -> bool:
        vals = [r for _, r in self.samples]
        return all(b < a for a, b in zip(vals, vals[1:]))


def rate_fit(samples, c_pred=None, prec: Precision = Precision(128)) -> RateFit:
    """Fit C in log(residual) = log A - C/t by least squares.

    Requires at least 3 samples with strictly decreasing t and strictly
    positive residuals.
    """
    pts = [(to_mp(t, prec), to_mp(r, prec)) for t, r in samples]
    if len(pts) < 3:
        raise DomainError("rate fit needs at least 3 samples")
    for (t1, _), (t2, _) in zip(pts, pts[1:]):
        if not t2 < t1:
            raise DomainError("rate fit needs strictly decreasing t")
    for _, r in pts:
        if not r > 0:
            raise NonPositiveResidual(f"residual {r} is not positive")
    with mp.workprec(prec.work):
        xs = [-1 / t for t, _ in pts]
        ys = [mp.log(r) for _, r in pts]
        n = len(pts)
        sx = mp.fsum(xs)
        sy = mp.fsum(ys)
        sxx = mp.fsum(x * x for x in xs)
        sxy = mp.fsum(x * y for x, y in zip(xs, ys))
        denom = n * sxx - sx * sx
        slope = (n * sxy - sx * sy) / denom
        fit = RateFit(samples=list(samples), c_fit=slope)
        if c_pred is not None:
            cp = to_mp(c_pred, prec)
            fit.c_pred = cp
            fit.rel_err = abs(slope - cp) / cp
        return fit


# ----------------------------------------------------------------------
# closed-form main terms
# ----------------------------------------------------------------------


def macmain_leading(a, b, c, t, prec: Precision):
    """Leading factor z^c / sqrt(z + 2b(1-z)) * exp((Li2(1-z) + b log^2 z)/t)
    of the q -> 1 expansion of sum a^n q^{b n^2 + c n} / (q)_n, with z the
    positive root of a z^(2b) + z - 1 = 0.  Power corrections excluded.
    """
    with mp.workprec(prec.work):
        av, bv, cv, tv = (to_mp(v, prec) for v in (a, b, c, t))
        if tv <= 0:
            raise DomainError("needs t > 0")
        z = solve_macmain_z(av, bv, prec)
        rate = li2(1 - z, prec) + bv * mp.log(z) ** 2
        return z ** cv / mp.sqrt(z + 2 * bv * (1 - z)) * mp.exp(rate / tv)


def macmain_rate(a, b, prec: Precision):
    """The exponential growth constant Li2(1-z) + b log^2 z alone."""
    with mp.workprec(prec.work):
        z = solve_macmain_z(to_mp(a, prec), to_mp(b, prec), prec)
        return li2(1 - z, prec) + to_mp(b, prec) * mp.log(z) ** 2


def _gaussian_cut(alpha, t, prec: Precision) -> int:
    # include n while exp(-2 pi^2 n^2 / (alpha t)) >= 2^-work
    with mp.workprec(prec.work):
        av = to_mp(alpha, prec)
        tv = to_mp(t, prec)
        n = mp.sqrt(prec.work * mp.log(2) * av * tv) / (mp.pi * mp.sqrt(2))
        return int(mp.ceil(n)) + 2


def main1_sides(alpha, x, z, t, prec: Precision, n_cut: int | None = None):
    """Both sides of the rank-1 bilateral transformation at q = e^-t.

    Left: L_alpha(z x; q, z^alpha).  Right: the Gaussian-weighted sum of
    L_{1-1/alpha}(q; q, -e^{2 pi i n / alpha} x q^{(1-1/alpha)/2}) terms with
    the sqrt(2 pi z^alpha/(alpha t)) prefactor, truncated once
    exp(-2 pi^2 n^2/(alpha t)) falls below the precision budget.
    """
    with mp.workprec(prec.work):
        av = to_mp(alpha, prec)
        xv = to_mp(x, prec)
        zv = to_mp(z, prec)
        tv = to_mp(t, prec)
        if tv <= 0 or zv <= 0:
            raise DomainError("needs z > 0 and t > 0")
        if av < 1 or (av == 1 and abs(xv) >= 1):
            raise DomainError("needs alpha > 1 (alpha = 1 allowed only for |x| < 1)")
        q = mp.exp(-tv)
        lhs = l_scalar_value(zv * xv, zv ** av, av, q, prec)
        if n_cut is None:
            n_cut = _gaussian_cut(av, tv, prec)
        pref = mp.sqrt(2 * mp.pi * zv ** av / (av * tv)) * mp.exp(
            av * tv / 8 + av * mp.log(zv) ** 2 / (2 * tv)
        )
        pref /= poch_value(zv * xv, INFINITY, q, prec)
        gsum = mp.mpc(0)
        half = mp.power(q, (1 - 1 / av) / 2)
        for n in range(-n_cut, n_cut + 1):
            rot = mp.exp(2j * mp.pi * n / av)
            inner = l_scalar_value(q, -rot * xv * half, 1 - 1 / av, q, prec)
            gsum += inner * mp.exp(
                2j * mp.pi * n * (mpf(1) / 2 - mp.log(zv) / tv) - 2 * mp.pi ** 2 * n * n / (av * tv)
            )
        rhs = pref * gsum
        if abs(rhs.imag) < abs(rhs) * mpf(2) ** (-prec.bits // 2):
            rhs = rhs.real
        return lhs, rhs


def mth1_sides(params: BilateralParams, z, t, prec: Precision, n_cut: int | None = None):
    """Both sides of the rank-r transformation at q = e^-t (alpha > r).

    Left: L_alpha(z x; z^-1 y; q, z^alpha).  Right: the Gaussian-weighted sum
    of H_alpha(e^{2 pi i n/alpha} x; e^{-2 pi i n/alpha} y; q), with the same
    prefactor divided by prod_s (z x_s, q y_s / z)_inf.
    """
    with mp.workprec(prec.work):
        av = _alpha_mp(params.alpha, prec)
        zv = to_mp(z, prec)
        tv = to_mp(t, prec)
        q = mp.exp(-tv)
        xs = [to_mp(v, prec) for v in params.x]
        ys = [to_mp(v, prec) for v in params.y]
        r = params.r
        if av <= r:
            raise DomainError("transformation needs alpha > r")
        lp = BilateralParams(
            alpha=params.alpha, r=r,
            x=tuple(zv * v for v in xs), y=tuple(v / zv for v in ys), z=zv ** av,
        )
        lhs = l_vector_value(lp, q, prec)
        if n_cut is None:
            n_cut = _gaussian_cut(av, tv, prec)
        pref = mp.sqrt(2 * mp.pi * zv ** av / (av * tv)) * mp.exp(
            av * tv / 8 + av * mp.log(zv) ** 2 / (2 * tv)
        )
        for s in range(r):
            pref /= poch_value(zv * xs[s], INFINITY, q, prec)
            pref /= poch_value(q * ys[s] / zv, INFINITY, q, prec)
        gsum = mp.mpc(0)
        for n in range(-n_cut, n_cut + 1):
            rot = mp.exp(2j * mp.pi * n / av)
            h = h_alpha_value(
                tuple(rot * v for v in xs), tuple(v / rot for v in ys), av, q, prec
            )
            gsum += h * mp.exp(
                2j * mp.pi * n * (mpf(1) / 2 - mp.log(zv) / tv) - 2 * mp.pi ** 2 * n * n / (av * tv)
            )
        rhs = pref * gsum
        if abs(rhs.imag) < abs(rhs) * mpf(2) ** (-prec.bits // 2):
            rhs = rhs.real
        return lhs, rhs


def lem21_sides(z, t, mu, prec: Precision, n_cut: int | None = None):
    """Both sides of the Gaussian/theta modular flip of sum z^n e^{-t C(n,2)}
    over n in mu + Z.
    """
    with mp.workprec(prec.work):
        zv = to_mp(z, prec)
        tv = to_mp(t, prec)
        muv = to_mp(mu, prec)
        if zv <= 0 or tv <= 0:
            raise DomainError("needs z > 0 and t > 0")
        budget = (prec.work + 8) * mp.log(2)
        lz = mp.log(zv)

        def expo(n):
            return tv * binom2(n) - n * lz

        lhs = mp.mpf(0)
        k = 0
        while True:
            n = muv + k
            e = expo(n)
            if e > budget and expo(muv + k + 1) > e:
                break
            lhs += mp.exp(-e)
            k += 1
        k = -1
        while True:
            n = muv + k
            e = expo(n)
            if e > budget and expo(muv + k - 1) > e:
                break
            lhs += mp.exp(-e)
            k -= 1

        if n_cut is None:
            n_cut = _gaussian_cut(1, tv, prec)
        gsum = mp.mpc(0)
        for n in range(-n_cut, n_cut + 1):
            gsum += mp.exp(2j * mp.pi * n * (muv - mpf(1) / 2 - lz / tv) - 2 * mp.pi ** 2 * n * n / tv)
        rhs = mp.sqrt(2 * mp.pi * zv / tv) * mp.exp(tv / 8 + lz ** 2 / (2 * tv)) * gsum
        if abs(rhs.imag) < abs(rhs) * mpf(2) ** (-prec.bits // 2):
            rhs = rhs.real
        return lhs, rhs


# ----------------------------------------------------------------------
# predicted and measured companion quotients
# ----------------------------------------------------------------------

_RATIO_KINDS = ("mm10", "mm20", "cor2", "cor1")


def predicted_ratio(which: str, params: dict, t, prec: Precision):
    """Closed-form predicted quotient (error term excluded) for one claim.

    mm10 / mm20 expect keys a, b, c; cor2 / cor1 expect alpha, z.
    """
    if which not in _RATIO_KINDS:
        raise DomainError(f"unknown ratio kind {which!r}")
    with mp.workprec(prec.work):
        tv = to_mp(t, prec)
        if tv <= 0:
            raise DomainError("needs t > 0")
        pi = mp.pi
        if which == "mm10":
            a, b, c = (to_mp(params[k], prec) for k in ("a", "b", "c"))
            if a <= 0 or b <= 0.5:
                raise DomainError("mm10 needs a > 0, b > 1/2")
            la = mp.log(a)
            lead = a ** c / mp.sqrt(2 * b * a ** (c / b))
            return lead * mp.exp(
                (pi ** 2 + 3 * la ** 2 / (2 * b)) / (6 * tv) + (c * c / (4 * b) - mpf(1) / 24) * tv
            )
        if which == "mm20":
            a, b, c = (to_mp(params[k], prec) for k in ("a", "b", "c"))
            if a <= 0.5 or b <= 0:
                raise DomainError("mm20 needs a > 1/2, b > 0")
            la = mp.log(a)
            lead = mp.sqrt(pi * a ** (-(1 + 2 * c) / (1 + 2 * b)) / ((1 + 2 * b) * tv))
            return lead * mp.exp(
                (6 * la ** 2 / (2 * b + 1) - pi ** 2) / (12 * tv)
                + (6 * c * c + 6 * c - b + 1) / (12 * (2 * b + 1)) * tv
            )
        alpha = to_mp(params["alpha"], prec)
        z = to_mp(params["z"], prec)
        if alpha <= 1 or z <= 0:
            raise DomainError("needs alpha > 1 and z > 0")
        lz = mp.log(z)
        if which == "cor2":
            lead = mp.sqrt(pi * z ** alpha / (alpha * tv))
            return lead * mp.exp(
                (6 * alpha * lz ** 2 - pi ** 2) / (12 * tv) + (3 * alpha - 1) / 24 * tv
            )
        lead = z ** (alpha / 2) / mp.sqrt(alpha)
        return lead * mp.exp(
            (pi ** 2 + 3 * alpha * lz ** 2) / (6 * tv) + (3 * alpha - 1) / 24 * tv
        )


def measured_ratio(which: str, params: dict, t, prec: Precision):
    """The quotient that predicted_ratio approximates, evaluated directly."""
    if which not in _RATIO_KINDS:
        raise DomainError(f"unknown ratio kind {which!r}")
    with mp.workprec(prec.work):
        tv = to_mp(t, prec)
        q = mp.exp(-tv)
        if which == "mm10":
            a, b, c = params["a"], params["b"], params["c"]
            return f_family_value("f1", a, b, c, tv, prec) / f_family_value(
                "f1tilde", a, b, c, tv, prec
            )
        if which == "mm20":
            a, b, c = params["a"], params["b"], params["c"]
            return f_family_value("f2", a, b, c, tv, prec) / f_family_value(
                "f2tilde", a, b, c, tv, prec
            )
        alpha = to_mp(params["alpha"], prec)
        z = to_mp(params["z"], prec)
        if which == "cor2":
            num = l_scalar_value(mpf(-1), z ** alpha, alpha, q, prec)
            den = l_scalar_value(
                q, mp.power(q, (1 - 1 / alpha) / 2) / z, 1 - 1 / alpha, q, prec
            )
            return num / den
        num = l_scalar_value(q, z ** alpha, alpha, q, prec)
        den = l_scalar_value(
            q, -mp.power(q, mpf(3) / 2 - 1 / (2 * alpha)) / z, 1 - 1 / alpha, q, prec
        )
        return num / den


# ----------------------------------------------------------------------
# the paired-sum product asymptotics
# ----------------------------------------------------------------------


def _partial_theta_sum(z, y, q, prec: Precision, base=2):
    """sum_{n>=1} z^n Q^{C(n,2)} / (y; Q)_n with Q = q^base, numerically."""
    with mp.workprec(prec.work):
        Q = q ** base
        tiny = mpf(2) ** (-prec.work)
        total = mp.mpf(0)
        den = mp.mpf(1)
        scale = mpf(1)
        n = 1
        drops = 0
        while True:
            den *= 1 - y * Q ** (n - 1)
            term = z ** n * mp.power(Q, mpf(n * (n - 1)) / 2) / den
            total += term
            a = abs(term)
            scale = max(scale, a)
            drops = drops + 1 if a < tiny * scale else 0
            if drops >= 3 and n > 2:
                break
            n += 1
            if n > 64 * prec.work:
                raise DomainError("partial theta sum failed to converge")
        return total


def asymm_sides(a, c, t, prec: Precision):
    """Both sides of the paired-sum product asymptotic at q = e^-t.

    Left: the product of sum_{n>=1} (a q^{2c})^{±n} q^{n(n-1)} / (q; q^2)_n.
    Right: pi/(2 a^c t) exp((pi^2/3 + log^2 a)/(4t) + (c^2 + 2/3) t).
    """
    with mp.workprec(prec.work):
        av = to_mp(a, prec)
        cv = to_mp(c, prec)
        tv = to_mp(t, prec)
        if av <= 0 or tv <= 0:
            raise DomainError("needs a > 0 and t > 0")
        q = mp.exp(-tv)
        zp = av * mp.power(q, 2 * cv)
        s1 = _partial_theta_sum(zp, q, q, prec)
        s2 = _partial_theta_sum(1 / zp, q, q, prec)
        lhs = s1 * s2
        rhs = mp.pi / (2 * av ** cv * tv) * mp.exp(
            (mp.pi ** 2 / 3 + mp.log(av) ** 2) / (4 * tv) + (cv * cv + mpf(2) / 3) * tv
        )
        return lhs, rhs


def asymm_theta_quotient(a, c, t, prec: Precision, form: str = "sum"):
    """Theta-quotient representation of the paired-sum product:

    (Q; Q)_inf^2 theta(-z; Q) theta(-1/z; Q) / (theta(q; Q) theta(-q/z; Q))
    with Q = q^2, z = a q^{2c}.  `form` selects the theta evaluation route.
    """
    with mp.workprec(prec.work):
        av = to_mp(a, prec)
        cv = to_mp(c, prec)
        tv = to_mp(t, prec)
        q = mp.exp(-tv)
        Q = q * q
        z = av * mp.power(q, 2 * cv)
        num = (
            poch_value(Q, INFINITY, Q, prec) ** 2
            * theta_value(-z, Q, prec, form=form)
            * theta_value(-1 / z, Q, prec, form=form)
        )
        den = theta_value(q, Q, prec, form=form) * theta_value(-q / z, Q, prec, form=form)
        return num / den


def cor32_sides(z, y, t, prec: Precision):
    """Partial theta sum vs its theta-product main term (base q)."""
    with mp.workprec(prec.work):
        zv = to_mp(z, prec)
        yv = to_mp(y, prec)
        tv = to_mp(t, prec)
        q = mp.exp(-tv)
        if not (0 < q < yv < 1):
            raise DomainError("needs 0 < q < y < 1")
        if zv <= 0:
            raise DomainError("needs z > 0")
        lhs = _partial_theta_sum(zv, yv, q, prec, base=1)
        rhs = theta_value(-zv, q, prec) / (
            poch_value(yv, INFINITY, q, prec) * poch_value(-yv / zv, INFINITY, q, prec)
        )
        return lhs, rhs


def delta_positive(b, a, prec: Precision):
    """delta_{2b}(a^(1/(2b))): the positivity certificate behind the f1 quotient claim."""
    with mp.workprec(prec.work):
        bv = to_mp(b, prec)
        av = to_mp(a, prec)
        return delta_alpha(2 * bv, mp.power(av, 1 / (2 * bv)), prec)
