"""Registry of identity and asymptotic checks with structured reports.

Every registered identity knows which modes it supports:

* ``exact``       both sides expanded as truncated series with rational
                  coefficients through disjoint code paths; passing means the
                  coefficientwise deviation is literally zero;
* ``numeric``     both sides evaluated at a numeric base point; passing means
                  the relative residual stays below 2^-(bits/2);
* ``asymptotic``  a measured companion quotient is compared against its
                  closed-form prediction over a decreasing t-grid and the
                  exponential decay constant of the residual is fitted.

Big-O error claims bound the error from above, so their rate verdicts are
one-sided: residuals must decay and the fitted constant must reach the
predicted envelope (faster decay than the bound is a pass, not a failure).
The eta transformation, whose leading correction coefficient is exactly -1,
gets a two-sided band instead.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpf

from . import asym as _asym
from .asym import (
    asymm_sides,
    cor32_sides,
    delta_positive,
    lem21_sides,
    main1_sides,
    measured_ratio,
    mth1_sides,
    predicted_ratio,
    rate_fit,
)
from .bilateral import (
    BilateralParams,
    f2hat_tail_series,
    f_family_series,
    f_family_value,
    h1_closed_series,
    h_alpha_series,
    h_alpha_value,
    l_scalar_series,
    l_scalar_value,
    l_vector_series,
    l_vector_value,
    psi_value,
)
from .errors import DomainError, UnknownIdentity, UnsupportedMode
from .exactq import ExactSeries, ExponentGrid, QMono, Rat, max_abs_diff
from .numq import Precision, binom2, delta_alpha, to_mp
from .qfun import INFINITY, poch_recip_series, poch_series, poch_value, theta_series, theta_value

F = Fraction
_ONE = F(1)

DEFAULT_ORDER = 40
DEFAULT_BITS = 256
DEFAULT_ASYM_BITS = 512
DEFAULT_T_GRID = (mpf("0.5"), mpf("0.25"), mpf("0.125"))


@dataclass
class CheckReport:
    """Outcome of one identity / asymptotic check."""

    id: str
    mode: str
    params: dict
    order_or_bits: int
    deviation: str
    threshold: str | None
    c_fit: str | None
    c_pred: str | None
    verdict: str
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "mode": self.mode,
            "params": self.params,
            "order_or_bits": self.order_or_bits,
            "deviation": self.deviation,
            "threshold": self.threshold,
            "c_fit": self.c_fit,
            "c_pred": self.c_pred,
            "verdict": self.verdict,
            "elapsed_ms": self.elapsed_ms,
        }


@dataclass
class Identity:
    id: str
    description: str
    exact_fn: object = None
    exact_defaults: list = field(default_factory=list)
    exact_denom: object = 1
    numeric_fn: object = None
    numeric_defaults: list = field(default_factory=list)
    asym_measure: object = None
    asym_c_pred: object = None
    asym_defaults: dict = field(default_factory=dict)
    asym_rate_mode: str = "positive"  # positive | at_least | two_sided
    asym_rate_tol: float = 0.15
    asym_extra: object = None

    @property
    def modes(self) -> tuple:
        out = []
        if self.exact_fn is not None:
            out.append("exact")
        if self.numeric_fn is not None:
            out.append("numeric")
        if self.asym_measure is not None:
            out.append("asymptotic")
        return tuple(out)


# ----------------------------------------------------------------------
# small exact builders shared by several checks
# ----------------------------------------------------------------------


def _grid(order: int, denom: int) -> ExponentGrid:
    return ExponentGrid(denom, order * denom)


def _recip(series: ExactSeries) -> ExactSeries:
    lo = series.min_index()
    return series.shifted(-lo).invert().shifted(-lo)


def _euler_sum(z: QMono, grid: ExponentGrid) -> ExactSeries:
    """sum_n z^n q^binom(n,2) / (q)_n by direct unilateral accumulation."""
    total = ExactSeries.zero(grid)
    recip = ExactSeries.one(grid)
    n = 0
    d = grid.denom
    while d * (n * (n - 1) // 2) + grid.index_of(z.exp) * n < grid.order or n < 2:
        if n > 0:
            recip = recip.div_one_minus(_ONE, n * d)
        e = d * (n * (n - 1) // 2) + grid.index_of(z.exp * n)
        total = total + recip.scaled(z.coef ** n).shifted(e)
        n += 1
    return total


def _qpoch_inf(grid, coef=_ONE, exp=_ONE, base=_ONE) -> ExactSeries:
    return poch_series(QMono(Rat(coef), Rat(exp)), INFINITY, grid, base=base)


# -- per-identity exact check functions (each returns [(label, lhs, rhs)]) --


def _exact_euler(p, grid):
    z = QMono.of(p["z"])
    lhs = _euler_sum(z, grid)
    rhs = poch_series(QMono(-z.coef, z.exp), INFINITY, grid)
    return [("euler", lhs, rhs)]


def _exact_jtp(p, grid):
    z = QMono.of(p["z"])
    return [("jtp", theta_series(z, grid, form="sum"), theta_series(z, grid, form="product"))]


def _exact_watson(p, grid):
    d = grid.denom
    lhs = ExactSeries.zero(grid)
    recip_sq = ExactSeries.one(grid)
    n = 0
    while d * (n * (n + 1) // 2) < grid.order:
        if n > 0:
            recip_sq = recip_sq.div_one_minus(_ONE, n * d).div_one_minus(_ONE, n * d)
        lhs = lhs + recip_sq.shifted(d * (n * (n + 1) // 2))
        n += 1
    inner = ExactSeries.zero(grid)
    recip2 = ExactSeries.one(grid)
    n = 0
    while d * (2 * n * n + n) < grid.order:
        if n > 0:
            recip2 = recip2.div_one_minus(_ONE, 2 * n * d)
        inner = inner + recip2.shifted(d * (2 * n * n + n))
        n += 1
    rhs = _recip(_qpoch_inf(grid)) * inner
    return [("watson", lhs, rhs)]


def _exact_pentagonal(p, grid):
    prod = _qpoch_inf(grid)
    d = grid.denom
    coeffs = {0: _ONE}
    k = 1
    while d * (k * (3 * k - 1) // 2) < grid.order or d * (k * (3 * k + 1) // 2) < grid.order:
        sign = _ONE if k % 2 == 0 else -_ONE
        for e in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if d * e < grid.order:
                coeffs[d * e] = sign
        k += 1
    return [("pentagonal", prod, ExactSeries(grid, coeffs))]


def _rama_sides(x: F, y: F, z: F, grid):
    lp = BilateralParams(alpha=_ONE, r=1, x=(QMono(z * x),), y=(QMono(y / z),), z=QMono(z))
    lhs = l_vector_series(lp, grid)
    num = theta_series(QMono(-z), grid, form="sum") * _qpoch_inf(grid, x * y, 0)
    den = (
        _qpoch_inf(grid, z * x, 0)
        * _qpoch_inf(grid, y / z, 1)
        * _qpoch_inf(grid, -x, 0)
        * _qpoch_inf(grid, -y, 0)
    )
    return lhs, num * _recip(den)


def _exact_rama_1psi1(p, grid):
    x, y, z = (Rat(p[k]) for k in ("x", "y", "z"))
    lhs, rhs = _rama_sides(x, y, z, grid)
    return [("rama-1psi1", lhs, rhs)]


def _corm1_a1_sides(x, y, z, grid):
    lp = BilateralParams(alpha=_ONE, r=1, x=(QMono(z * x),), y=(QMono(y / z),), z=QMono(z))
    lhs = l_vector_series(lp, grid)
    num = theta_series(QMono(-z), grid, form="sum") * h1_closed_series(x, y, grid)
    den = _qpoch_inf(grid, z * x, 0) * _qpoch_inf(grid, y / z, 1)
    return lhs, num * _recip(den)


def _corm1_a2_sides(x, y, z, grid):
    lp = BilateralParams(alpha=F(2), r=1, x=(QMono(z * x),), y=(QMono(y / z),), z=QMono(z * z))
    lhs = l_vector_series(lp, grid)
    half = F(1, 2)
    t_plus = theta_series(QMono(-z, F(-1, 4)), grid, base=half, form="sum")
    t_minus = theta_series(QMono(z, F(-1, 4)), grid, base=half, form="sum")
    h_pp = h_alpha_series(x, y, F(2), grid)
    h_mm = h_alpha_series(-x, -y, F(2), grid)
    num = t_plus * h_pp + t_minus * h_mm
    den = (_qpoch_inf(grid, z * x, 0) * _qpoch_inf(grid, y / z, 1)).scaled(2)
    return lhs, num * _recip(den)


def _exact_cor_corm1(p, grid):
    x, y, z = (Rat(p[k]) for k in ("x", "y", "z"))
    l1, r1 = _corm1_a1_sides(x, y, z, grid)
    l2, r2 = _corm1_a2_sides(x, y, z, grid)
    return [("1.11-1", l1, r1), ("1.11-2", l2, r2)]


def _exact_thm_mth(p, grid):
    a = int(p["a"])
    x, y, z = (Rat(p[k]) for k in ("x", "y", "z"))
    if a == 1:
        lhs, rhs = _corm1_a1_sides(x, y, z, grid)
    elif a == 2:
        lhs, rhs = _corm1_a2_sides(x, y, z, grid)
    else:
        raise UnsupportedMode("exact mode requires a in {1, 2} (roots of unity otherwise)")
    return [(f"a={a}", lhs, rhs)]


def _exact_lebesgue(p, grid):
    x, z = Rat(p["x"]), Rat(p["z"])
    lp = BilateralParams(alpha=F(2), r=1, x=(QMono(z * x),), y=(QMono(-x / z),), z=QMono(z * z))
    lhs1 = l_vector_series(lp, grid)
    num1 = _qpoch_inf(grid, -x * x, 1, base=2) * theta_series(QMono(-z * z), grid, base=2, form="sum")
    den1 = _qpoch_inf(grid, z * x, 0) * _qpoch_inf(grid, -x / z, 1)
    a, b = Rat(p["a"]), Rat(p["b"])
    lp2 = BilateralParams(
        alpha=F(2), r=1, x=(QMono(b, _ONE),), y=(QMono(1 / a),), z=QMono(-a * b, _ONE)
    )
    lhs2 = l_vector_series(lp2, grid)
    num2 = (
        _qpoch_inf(grid, 1, 2, base=2)
        * _qpoch_inf(grid, a * b, 1, base=2)
        * _qpoch_inf(grid, 1 / (a * b), 1, base=2)
        * _qpoch_inf(grid, b / a, 2, base=2)
    )
    den2 = _qpoch_inf(grid, b, 1) * _qpoch_inf(grid, 1 / a, 1)
    return [
        ("bilateral-lebesgue", lhs1, num1 * _recip(den1)),
        ("schlosser-form", lhs2, num2 * _recip(den2)),
    ]


def _exact_cormm2(p, grid):
    x, z = Rat(p["x"]), Rat(p["z"])
    lp = BilateralParams(
        alpha=F(2), r=1, x=(QMono(z * x, _ONE),), y=(QMono(x / z),), z=QMono(z * z, F(2))
    )
    lhs = l_vector_series(lp, grid, base=2)
    half = F(1, 2)
    num = theta_series(QMono(-z, half), grid, base=1, form="sum") * _qpoch_inf(grid, x, half)
    num = num + theta_series(QMono(z, half), grid, base=1, form="sum") * _qpoch_inf(grid, -x, half)
    den = (_qpoch_inf(grid, z * x, 1, base=2) * _qpoch_inf(grid, x / z, 2, base=2)).scaled(2)
    return [("cormm-2", lhs, num * _recip(den))]


def _exact_corm2(p, grid):
    x, z = Rat(p["x"]), Rat(p["z"])
    out = []
    # main display at a = 2, b = 1
    lhs = l_scalar_series(QMono(z * x), QMono(z * z), F(2), grid)
    half = F(1, 2)
    acc = ExactSeries.zero(grid)
    for u in (0, 1):
        sgn = _ONE if u == 0 else -_ONE
        th = theta_series(QMono(-sgn * z, F(-1, 4)), grid, base=half, form="sum")
        inner = l_scalar_series(QMono(_ONE, _ONE), QMono(-sgn * x, F(1, 4)), F(1, 2), grid)
        acc = acc + th * inner
    rhs = acc * _recip(_qpoch_inf(grid, z * x, 0).scaled(2))
    out.append(("corm2-main", lhs, rhs))
    # corrected 'in particular' display; _half_grid_partial(g, v) sums (-v)^n
    lhs2 = l_scalar_series(QMono(x * z, _ONE), QMono(z * z, _ONE), F(2), grid)
    s_m = _half_grid_partial(grid, x)
    s_p = _half_grid_partial(grid, -x)
    num = theta_series(QMono(-z, F(1, 4)), grid, base=half, form="sum") * s_m
    num = num + theta_series(QMono(z, F(1, 4)), grid, base=half, form="sum") * s_p
    rhs2 = num * _recip(_qpoch_inf(grid, x * z, 1).scaled(2))
    out.append(("corm2-particular", lhs2, rhs2))
    return out


def _half_grid_partial(grid, x: F) -> ExactSeries:
    """sum_n (-x)^n q^(n(n+2)/4) / (q)_n"""
    total = ExactSeries.zero(grid)
    recip = ExactSeries.one(grid)
    n = 0
    while grid.index_of(F(n * (n + 2), 4)) < grid.order:
        if n > 0:
            recip = recip.div_one_minus(_ONE, n * grid.denom)
        total = total + recip.scaled((-x) ** n).shifted(grid.index_of(F(n * (n + 2), 4)))
        n += 1
    return total


def _exact_ramanujan_116(p, grid):
    z = Rat(p["z"])
    d = grid.denom
    lhs = ExactSeries.zero(grid)
    recip = ExactSeries.one(grid)
    n = 0
    while d * n * n < grid.order:
        if n > 0:
            recip = recip.div_one_minus(_ONE, n * d)
        lhs = lhs + recip.scaled(z ** (2 * n)).shifted(d * n * n)
        n += 1
    half = F(1, 2)
    num = theta_series(QMono(-z, F(1, 4)), grid, base=half, form="sum") * _half_grid_partial(grid, F(1) / z)
    num = num + theta_series(QMono(z, F(1, 4)), grid, base=half, form="sum") * _half_grid_partial(grid, -F(1) / z)
    rhs = num * _recip(_qpoch_inf(grid).scaled(2))
    return [("1.16", lhs, rhs)]


def _exact_mcor(p, grid):
    # corrected specialization chain display for one shift value
    ell = int(p["ell"])
    d = grid.denom
    lhs = ExactSeries.zero(grid)
    recip2 = ExactSeries.one(grid)
    n = 0
    while grid.index_of(F(2 * n * (n - 1) + (1 + 2 * ell) * n)) < grid.order:
        if n > 0:
            recip2 = recip2.div_one_minus(_ONE, 2 * n * d)
        lhs = lhs + recip2.shifted(grid.index_of(F(2 * n * (n - 1) + (1 + 2 * ell) * n)))
        n += 1
    inner = ExactSeries.zero(grid)
    recip2 = ExactSeries.one(grid)
    n = 0
    while grid.index_of(F(n * n, 2) + (F(3, 2) - ell) * n) < grid.order:
        if n > 0:
            recip2 = recip2.div_one_minus(_ONE, 2 * n * d)
        sign = _ONE if n % 2 == 0 else -_ONE
        inner = inner + recip2.scaled(sign).shifted(grid.index_of(F(n * n, 2) + (F(3, 2) - ell) * n))
        n += 1
    th = theta_series(QMono(-_ONE, F(ell)), grid, base=1, form="sum")
    rhs = th * inner * _recip(_qpoch_inf(grid, 1, 2, base=2).scaled(2))
    return [(f"1.18 l={ell}", lhs, rhs)]


def _exact_mci(p, grid):
    m = int(p["m"])
    d = grid.denom
    lhs = ExactSeries.zero(grid)
    recip2 = ExactSeries.one(grid)
    n = 0
    while True:
        e = 2 * n * n + (2 * m + 1) * n + m * (m + 1) // 2
        if d * e >= grid.order and 4 * n + 2 * m + 3 > 0 and n > abs(m):
            break
        if n > 0:
            recip2 = recip2.div_one_minus(_ONE, 2 * n * d)
        if d * e < grid.order:
            lhs = lhs + recip2.shifted(d * e)
        n += 1
    # the dual sum dips to exponent ~ -m(m-1)/2 for positive m; give headroom
    dip = d * max(0, max((m * j - j * (j + 1) // 2) for j in range(0, 4 * abs(m) + 4)))
    work = ExponentGrid(d, grid.order + 2 * dip)
    rhs_sum = ExactSeries.zero(work)
    recip2 = ExactSeries.one(work)
    j = 0
    while True:
        e = j * (j + 1) // 2 - m * j
        if d * e >= work.order and j - m + 1 > 0 and j > abs(m):
            break
        if j > 0:
            recip2 = recip2.div_one_minus(_ONE, 2 * j * d)
        if d * e < work.order:
            sign = _ONE if j % 2 == 0 else -_ONE
            rhs_sum = rhs_sum + recip2.scaled(sign).shifted(d * e)
        j += 1
    rhs = _qpoch_inf(work, -1, 1) * rhs_sum
    return [(f"m={m}", lhs, rhs.truncated(min(rhs.grid.order, grid.order)))]


def _exact_pro22_1(p, grid):
    x = Rat(p["x"])
    lhs = h_alpha_series(x, -x, F(2), grid)
    rhs = _qpoch_inf(grid, -x * x, 1, base=2)
    return [("pro22-1", lhs, rhs)]


def _exact_pro22_2(p, grid):
    x = Rat(p["x"])
    lhs = h_alpha_series(QMono(x), QMono(x, _ONE), F(2), grid, base=2)
    rhs = _qpoch_inf(grid, x, F(1, 2), base=1)
    return [("pro22-2", lhs, rhs)]


def _exact_f1hat(p, grid):
    a, b, c = (Rat(p[k]) for k in ("a", "b", "c"))
    return [("f1hat", f_family_series("f1hat", a, b, c, grid), f_family_series("f1", a, b, c, grid))]


def _exact_f2hat(p, grid):
    a, b, c = (Rat(p[k]) for k in ("a", "b", "c"))
    lhs = f_family_series("f2hat", a, b, c, grid) - f_family_series("f2", a, b, c, grid)
    rhs = f2hat_tail_series(a, b, c, grid)
    return [("f2hat-tail", lhs, rhs)]


# -- numeric check functions (each returns [(label, lhs, rhs)] of mp values) --


def _num(p, key, prec):
    return to_mp(Rat(p[key]) if isinstance(p[key], (str, int, Fraction)) else p[key], prec)


def _numeric_euler(p, prec):
    q = _num(p, "q", prec)
    z = _num(p, "z", prec)
    lhs = l_scalar_value(q, z, 1, q, prec)
    rhs = poch_value(-z, INFINITY, q, prec)
    return [("euler", lhs, rhs)]


def _numeric_jtp(p, prec):
    q = _num(p, "q", prec)
    z = _num(p, "z", prec)
    return [("jtp", theta_value(z, q, prec, form="sum"), theta_value(z, q, prec, form="product"))]


def _numeric_eta(p, prec):
    from .qfun import eta_transform_sides

    t = _num(p, "t", prec)
    lhs, rhs = eta_transform_sides(t, prec)
    return [("eta", lhs, rhs)]


def _numeric_thm_main1(p, prec):
    lhs, rhs = main1_sides(
        _num(p, "alpha", prec), _num(p, "x", prec), _num(p, "z", prec), _num(p, "t", prec), prec
    )
    return [("thm-main1", lhs, rhs)]


def _numeric_thm_mth1(p, prec):
    params = BilateralParams(
        alpha=Rat(p["alpha"]),
        r=2,
        x=(_num(p, "x1", prec), _num(p, "x2", prec)),
        y=(_num(p, "y1", prec), _num(p, "y2", prec)),
        z=_num(p, "z", prec),
    )
    lhs, rhs = mth1_sides(params, _num(p, "z", prec), _num(p, "t", prec), prec)
    return [("thm-mth1", lhs, rhs)]


def _numeric_thm_mth(p, prec):
    # the root-of-unity pairing: the multiple-series factor is rotated by
    # zeta_a^(b u) against theta at zeta_a^(-u) (they coincide for b = 1)
    a = int(p["a"])
    b = int(p.get("b", 1))
    with mp.workprec(prec.work):
        q = _num(p, "q", prec)
        x = _num(p, "x", prec)
        y = _num(p, "y", prec)
        z = _num(p, "z", prec)
        alpha = F(a, b)
        lp = BilateralParams(alpha=alpha, r=1, x=(z ** b * x,), y=(y / z ** b,), z=z ** a)
        lhs = l_vector_value(lp, q, prec)
        qab = mp.power(q, F(1, a * b))
        tot = mp.mpc(0)
        for u in range(a):
            zeta_bu = mp.exp(2j * mp.pi * (b * u % a) / a)
            zeta_u = mp.exp(2j * mp.pi * u / a)
            h = h_alpha_value((zeta_bu * x,), (y / zeta_bu,), alpha, q, prec)
            th = theta_value(-z * mp.power(q, F(1 - a, 2 * a * b)) / zeta_u, qab, prec)
            tot += h * th
        rhs = tot / (
            a
            * poch_value(z ** b * x, INFINITY, q, prec)
            * poch_value(q * y / z ** b, INFINITY, q, prec)
        )
        return [(f"a={a}", lhs, rhs)]


def _numeric_corm2(p, prec):
    a = int(p["a"])
    b = int(p["b"])
    if math.gcd(a, b) != 1 or a <= b:
        raise DomainError("needs coprime a > b")
    with mp.workprec(prec.work):
        q = _num(p, "q", prec)
        x = _num(p, "x", prec)
        z = _num(p, "z", prec)
        alpha = F(a, b)
        lhs = l_scalar_value(z ** b * x, z ** a, alpha, q, prec)
        qab = mp.power(q, F(1, a * b))
        tot = mp.mpc(0)
        for u in range(a):
            # zeta_a^(b u) in the dual series against theta at zeta_a^(-u)
            zeta_bu = mp.exp(2j * mp.pi * (b * u % a) / a)
            zeta_u = mp.exp(2j * mp.pi * u / a)
            th = theta_value(-z * mp.power(q, F(1 - a, 2 * a * b)) / zeta_u, qab, prec)
            inner = l_scalar_value(
                q, -zeta_bu * x * mp.power(q, F(a - b, 2 * a)), 1 - F(b, a), q, prec
            )
            tot += th * inner
        rhs = tot / (a * poch_value(z ** b * x, INFINITY, q, prec))
        return [(f"a/b={a}/{b}", lhs, rhs)]


def _numeric_lem21(p, prec):
    lhs, rhs = lem21_sides(_num(p, "z", prec), _num(p, "t", prec), _num(p, "mu", prec), prec)
    return [("lem21", lhs, rhs)]


def _numeric_lem22(p, prec):
    a = int(p["a"])
    b = int(p["b"])
    u = int(p["u"])
    with mp.workprec(prec.work):
        z = _num(p, "z", prec)
        q = _num(p, "q", prec)
        budget = (prec.work + 16) * mp.log(2)
        lt = -mp.log(q)
        tot = mp.mpc(0)
        for v in range(a):
            phase = mp.exp(-2j * mp.pi * u * b * v / a)
            mu = mpf(b * v) / a
            inner = mp.mpc(0)
            k = 0
            while True:
                n = mu + k
                e = a * lt * binom2(n) - a * n * mp.log(z)
                if e > budget and k > 1:
                    break
                inner += mp.power(z, a * n) * mp.power(q, a * binom2(n))
                k += 1
            k = -1
            while True:
                n = mu + k
                e = a * lt * binom2(n) - a * n * mp.log(z)
                if e > budget and k < -1:
                    break
                inner += mp.power(z, a * n) * mp.power(q, a * binom2(n))
                k -= 1
            tot += phase * inner
        zeta_u = mp.exp(2j * mp.pi * u / a)
        rhs = theta_value(
            -z / zeta_u * mp.power(q, F(1 - a, 2 * a)), mp.power(q, F(1, a)), prec
        )
        return [("lem22", tot, rhs)]


def _numeric_eq21(p, prec):
    with mp.workprec(prec.work):
        alpha = int(p["alpha"])
        x = _num(p, "x", prec)
        y = _num(p, "y", prec)
        z = _num(p, "z", prec)
        q = _num(p, "q", prec)
        lp = BilateralParams(alpha=F(alpha), r=1, x=(z * x,), y=(y / z,), z=z ** alpha)
        lhs = l_vector_value(lp, q, prec)
        lt = -mp.log(q)
        budget = (prec.work + 16) * mp.log(2)
        tot = mp.mpc(0)
        box = int(mp.sqrt(2 * budget / (lt * (1 - 1 / mpf(alpha))))) + 2
        poch_i = mp.mpf(1)
        for i in range(box + 1):
            if i > 0:
                poch_i *= 1 - q ** i
            poch_j = mp.mpf(1)
            for j in range(box + 1):
                if j > 0:
                    poch_j *= 1 - q ** j
                qq = F(i * i + j * j) - F((i - j) * (i - j), alpha)
                if mpf(qq.numerator) / qq.denominator * lt / 2 > budget:
                    continue
                mu = mpf(i - j) / alpha
                inner = mp.mpc(0)
                k = 0
                while True:
                    n = mu + k
                    e = alpha * lt * binom2(n) - alpha * n * mp.log(z)
                    if e > budget and k > 1:
                        break
                    inner += mp.power(z, alpha * n) * mp.power(q, alpha * binom2(n))
                    k += 1
                k = -1
                while True:
                    n = mu + k
                    e = alpha * lt * binom2(n) - alpha * n * mp.log(z)
                    if e > budget and k < -1:
                        break
                    inner += mp.power(z, alpha * n) * mp.power(q, alpha * binom2(n))
                    k -= 1
                c = mp.power(q, mpf(qq.numerator) / (2 * qq.denominator))
                c = c * (-x) ** i * (-y) ** j / (poch_i * poch_j)
                tot += c * inner
        rhs = tot / (
            poch_value(z * x, INFINITY, q, prec) * poch_value(q * y / z, INFINITY, q, prec)
        )
        return [("eq21", lhs, rhs)]


def _numeric_rama_1psi1(p, prec):
    with mp.workprec(prec.work):
        x = _num(p, "x", prec)
        y = _num(p, "y", prec)
        z = _num(p, "z", prec)
        q = _num(p, "q", prec)
        lp = BilateralParams(alpha=F(1), r=1, x=(z * x,), y=(y / z,), z=z)
        lhs = l_vector_value(lp, q, prec)
        num = theta_value(-z, q, prec) * poch_value(x * y, INFINITY, q, prec)
        den = (
            poch_value(z * x, INFINITY, q, prec)
            * poch_value(q * y / z, INFINITY, q, prec)
            * poch_value(-x, INFINITY, q, prec)
            * poch_value(-y, INFINITY, q, prec)
        )
        return [("rama-1psi1", lhs, num / den)]


def _numeric_promr1(p, prec):
    with mp.workprec(prec.work):
        y = _num(p, "y", prec)
        z = _num(p, "z", prec)
        q = _num(p, "q", prec)
        if abs(y) <= abs(q):
            raise DomainError("needs |y| > |q|")
        # refuse the excluded set 1/y, -z/y in {1, q, q^2, ...}
        for bad in (1 / y, -z / y):
            v = mp.mpf(1)
            for _ in range(8 * prec.work):
                if abs(bad - v) < mpf(2) ** (-prec.bits // 2):
                    raise DomainError("parameters on the excluded pole set")
                v *= q
                if abs(v) < abs(bad) / 2 and abs(v) < mpf(2) ** (-prec.bits):
                    break
        tiny = mpf(2) ** (-prec.work)
        s1 = mp.mpf(0)
        den = mp.mpf(1)
        n = 1
        scale = mpf(1)
        drops = 0
        while True:
            den *= 1 - y * q ** (n - 1)
            term = z ** n * mp.power(q, mpf(n * (n - 1)) / 2) / den
            s1 += term
            a = abs(term)
            scale = max(scale, a)
            drops = drops + 1 if a < tiny * scale else 0
            if drops >= 3 and n > 2:
                break
            n += 1
        s2 = mp.mpf(0)
        poch = mp.mpf(1)
        el = 0
        while True:
            if el > 0:
                poch *= 1 - q ** el
            term = (q / y) ** el / (poch * (1 + y * q ** el / z))
            s2 += term
            if abs(term) < tiny * (1 + abs(s2)) and el > 2:
                break
            el += 1
        lhs = s1 + poch_value(q / y, INFINITY, q, prec) * s2
        rhs = theta_value(-z, q, prec) / (
            poch_value(y, INFINITY, q, prec) * poch_value(-y / z, INFINITY, q, prec)
        )
        return [("promr1", lhs, rhs)]


def _numeric_mcor(p, prec):
    with mp.workprec(prec.work):
        q = _num(p, "q", prec)
        x1, x2 = _num(p, "x1", prec), _num(p, "x2", prec)
        y1, y2 = _num(p, "y1", prec), _num(p, "y2", prec)
        z = _num(p, "z", prec)
        out = []
        lhs = psi_value((z / y1, z / y2), (z * x1, z * x2), y1 * y2, q, prec)
        qh = mp.power(q, F(1, 2))
        hp = h_alpha_value((x1, x2), (y1, y2), 2, q, prec)
        hm = h_alpha_value((-x1, -x2), (-y1, -y2), 2, q, prec)
        num = hp * theta_value(-z * mp.power(q, -F(1, 4)), qh, prec)
        num += hm * theta_value(z * mp.power(q, -F(1, 4)), qh, prec)
        den = 2
        for xv, yv in ((x1, y1), (x2, y2)):
            den *= poch_value(z * xv, INFINITY, q, prec)
            den *= poch_value(q * yv / z, INFINITY, q, prec)
        out.append(("mcor-main", lhs, num / den))
        ell = int(p.get("ell", 0))
        arg = mp.power(q, F(1, 2) + ell) * y1 * y2
        lhs2 = psi_value((1 / y1, 1 / y2), (x1, x2), arg, q, prec)
        sh_m = mp.power(q, -F(1, 4) - F(ell, 2))
        sh_p = mp.power(q, F(1, 4) + F(ell, 2))
        h = h_alpha_value((sh_m * x1, sh_m * x2), (sh_p * y1, sh_p * y2), 2, q, prec)
        th = theta_value(-mp.power(q, F(ell, 2)), qh, prec)
        den2 = 2
        for xv, yv in ((x1, y1), (x2, y2)):
            den2 *= poch_value(xv, INFINITY, q, prec)
            den2 *= poch_value(q * yv, INFINITY, q, prec)
        out.append((f"mcor-1.12 l={ell}", lhs2, th * h / den2))
        return out


# -- asymptotic measure functions: params, t, prec -> (measured, predicted) --


def _asym_eta(p, t, prec):
    from .qfun import eta_transform_sides

    with mp.workprec(prec.work):
        tv = to_mp(t, prec)
        lhs, _ = eta_transform_sides(tv, prec)
        pref = mp.sqrt(2 * mp.pi / tv) * mp.exp(tv / 24 - mp.pi ** 2 / (6 * tv))
        return lhs, pref


def _asym_cor2(p, t, prec):
    params = {"alpha": Rat(p["alpha"]), "z": Rat(p["z"])}
    return (
        measured_ratio("cor2", params, t, prec),
        predicted_ratio("cor2", params, t, prec),
    )


def _asym_cor1(p, t, prec):
    params = {"alpha": Rat(p["alpha"]), "z": Rat(p["z"])}
    return (
        measured_ratio("cor1", params, t, prec),
        predicted_ratio("cor1", params, t, prec),
    )


def _asym_mm10(p, t, prec):
    params = {"a": Rat(p["a"]), "b": Rat(p["b"]), "c": Rat(p["c"])}
    return (
        measured_ratio("mm10", params, t, prec),
        predicted_ratio("mm10", params, t, prec),
    )


def _asym_mm20(p, t, prec):
    params = {"a": Rat(p["a"]), "b": Rat(p["b"]), "c": Rat(p["c"])}
    return (
        measured_ratio("mm20", params, t, prec),
        predicted_ratio("mm20", params, t, prec),
    )


def _asym_cor02(p, t, prec):
    with mp.workprec(prec.work):
        alpha = to_mp(Rat(p["alpha"]), prec)
        x = to_mp(Rat(p["x"]), prec)
        z = to_mp(Rat(p["z"]), prec)
        tv = to_mp(t, prec)
        q = mp.exp(-tv)
        main = l_scalar_value(z * x, z ** alpha, alpha, q, prec)
        norm = poch_value(z * x, INFINITY, q, prec) * mp.exp(
            -alpha * tv / 8 - alpha * mp.log(z) ** 2 / (2 * tv)
        ) / mp.sqrt(2 * mp.pi * z ** alpha / (alpha * tv))
        dual = l_scalar_value(q, -x * mp.power(q, (1 - 1 / alpha) / 2), 1 - 1 / alpha, q, prec)
        return norm * main, dual


def _asym_cor_mth1(p, t, prec):
    with mp.workprec(prec.work):
        alpha = to_mp(Rat(p["alpha"]), prec)
        x = to_mp(Rat(p["x"]), prec)
        y = to_mp(Rat(p["y"]), prec)
        z = to_mp(Rat(p["z"]), prec)
        tv = to_mp(t, prec)
        q = mp.exp(-tv)
        lp = BilateralParams(alpha=Rat(p["alpha"]), r=1, x=(z * x,), y=(y / z,), z=z ** alpha)
        num = l_vector_value(lp, q, prec)
        den = h_alpha_value((x,), (y,), Rat(p["alpha"]), q, prec)
        measured = num / den
        pred = mp.sqrt(2 * mp.pi * z ** alpha / (alpha * tv)) * mp.exp(
            alpha * tv / 8 + alpha * mp.log(z) ** 2 / (2 * tv)
        )
        pred /= poch_value(z * x, INFINITY, q, prec) * poch_value(q * y / z, INFINITY, q, prec)
        return measured, pred


def _asym_prop10(p, t, prec):
    a, b, c = (Rat(p[k]) for k in ("a", "b", "c"))
    with mp.workprec(prec.work):
        f2h = f_family_value("f2hat", a, b, c, t, prec)
        f2 = f_family_value("f2", a, b, c, t, prec)
        return f2h / f2, mp.mpf(1)


def _asym_cor32(p, t, prec):
    lhs, rhs = cor32_sides(Rat(p["z"]), Rat(p["y"]), t, prec)
    return lhs, rhs


def _asym_asymm(p, t, prec):
    lhs, rhs = asymm_sides(Rat(p["a"]), Rat(p["c"]), t, prec)
    return lhs, rhs


def _asymm_extra(identity, p, prec):
    """Pointwise and per-step dominance over the t^8 power law below crossover."""
    with mp.workprec(prec.work):
        samples = []
        for t in (mpf("0.01"), mpf("0.009"), mpf("0.008")):
            lhs, rhs = asymm_sides(Rat(p["a"]), Rat(p["c"]), t, prec)
            samples.append((t, abs(lhs / rhs - 1)))
        for t, r in samples:
            if not r < t ** 8:
                return False
        for (t1, r1), (t2, r2) in zip(samples, samples[1:]):
            if not r2 / r1 < (t2 / t1) ** 8:
                return False
        return True


def _mm10_extra(identity, p, prec):
    """The positivity certificate gating the f1-quotient claim."""
    return delta_positive(Rat(p["b"]), Rat(p["a"]), prec) > 0


def _cor1_c_pred(p, prec):
    with mp.workprec(prec.work):
        d = delta_alpha(to_mp(Rat(p["alpha"]), prec), to_mp(Rat(p["z"]), prec), prec)
        return 2 * mp.pi ** 2 * min(mpf(2), d)


def _envelope_c_pred(p, prec):
    with mp.workprec(prec.work):
        return 2 * mp.pi ** 2 / to_mp(Rat(p["alpha"]), prec)


def _eta_c_pred(p, prec):
    with mp.workprec(prec.work):
        return 4 * mp.pi ** 2


# ----------------------------------------------------------------------
# the registry
# ----------------------------------------------------------------------


def _mk_registry() -> dict:
    ids = [
        Identity(
            "euler",
            "Eulerian form of the binary expansion: sum z^n q^C(n,2)/(q)_n = (-z)_inf",
            exact_fn=_exact_euler,
            exact_defaults=[{"z": F(1, 3)}],
            numeric_fn=_numeric_euler,
            numeric_defaults=[{"z": F(1, 3), "q": F(7, 20)}],
        ),
        Identity(
            "eta",
            "modular flip of (e^-t; e^-t)_inf",
            numeric_fn=_numeric_eta,
            numeric_defaults=[{"t": F(1)}],
            asym_measure=_asym_eta,
            asym_c_pred=_eta_c_pred,
            asym_defaults={},
            asym_rate_mode="two_sided",
            asym_rate_tol=0.10,
        ),
        Identity(
            "jtp",
            "Jacobi triple product: theta sum form equals its product form",
            exact_fn=_exact_jtp,
            exact_defaults=[{"z": F(2)}, {"z": F(5, 3)}],
            numeric_fn=_numeric_jtp,
            numeric_defaults=[{"z": F(2), "q": F(2, 5)}],
        ),
        Identity(
            "watson",
            "Watson's base-change of sum q^C(n+1,2)/(q)_n^2",
            exact_fn=_exact_watson,
            exact_defaults=[{}],
        ),
        Identity(
            "pentagonal",
            "pentagonal-number expansion of the Euler product",
            exact_fn=_exact_pentagonal,
            exact_defaults=[{}],
        ),
        Identity(
            "thm-main1",
            "rank-1 Gaussian-dual transformation of L_alpha(zx; q, z^alpha)",
            numeric_fn=_numeric_thm_main1,
            numeric_defaults=[
                {"alpha": F(2), "x": F(-2, 5), "z": F(6, 5), "t": F(7, 10)},
                {"alpha": F(5, 2), "x": F(-1, 3), "z": F(1), "t": F(7, 10)},
            ],
        ),
        Identity(
            "cor-mth1-asym",
            "L over H quotient against its closed prefactor (alpha > r)",
            asym_measure=_asym_cor_mth1,
            asym_c_pred=_envelope_c_pred,
            asym_defaults={"alpha": F(2), "x": F(-1, 2), "y": F(-1, 3), "z": F(1)},
            asym_rate_mode="at_least",
            asym_rate_tol=0.15,
        ),
        Identity(
            "thm-mth1",
            "rank-2 Gaussian-dual transformation with multiple-series weights",
            numeric_fn=_numeric_thm_mth1,
            numeric_defaults=[
                {
                    "alpha": F(3),
                    "x1": F(-1, 2),
                    "x2": F(-1, 3),
                    "y1": F(-1, 4),
                    "y2": F(-1, 5),
                    "z": F(1),
                    "t": F(7, 10),
                }
            ],
        ),
        Identity(
            "thm-mth",
            "root-of-unity theta decomposition of L_{a/b}(z^b x; z^-b y; q, z^a)",
            exact_fn=_exact_thm_mth,
            exact_defaults=[
                {"a": 1, "x": F(1, 4), "y": F(1, 6), "z": F(3, 2)},
                {"a": 2, "x": F(1, 4), "y": F(1, 6), "z": F(3, 2)},
            ],
            exact_denom=lambda p: 4 if int(p["a"]) == 2 else 1,
            numeric_fn=_numeric_thm_mth,
            numeric_defaults=[
                {"a": 3, "b": 1, "x": F(-3, 10), "y": F(-1, 5), "z": F(11, 10), "q": F(1, 2)},
                {"a": 4, "b": 1, "x": F(1, 5), "y": F(-1, 7), "z": F(4, 5), "q": F(2, 5)},
            ],
        ),
        Identity(
            "cor-corm1",
            "rank-1 specializations a = 1 and a = 2 of the theta decomposition",
            exact_fn=_exact_cor_corm1,
            exact_defaults=[{"x": F(1, 3), "y": F(1, 5), "z": F(2)}],
            exact_denom=4,
        ),
        Identity(
            "lebesgue-bilateral",
            "bilateral extension of the Lebesgue identity, both printed forms",
            exact_fn=_exact_lebesgue,
            exact_defaults=[{"x": F(1, 3), "z": F(2), "a": F(3), "b": F(1, 2)}],
            exact_denom=1,
        ),
        Identity(
            "cormm-2",
            "base-q^2 companion summation with split theta numerator",
            exact_fn=_exact_cormm2,
            exact_defaults=[{"x": F(1, 3), "z": F(2)}],
            exact_denom=2,
        ),
        Identity(
            "corm2",
            "y = 0 theta decomposition (a=2) and its corrected specialization",
            exact_fn=_exact_corm2,
            exact_defaults=[{"x": F(1, 5), "z": F(3, 2)}],
            exact_denom=4,
            numeric_fn=_numeric_corm2,
            numeric_defaults=[{"a": 3, "b": 2, "x": F(-1, 4), "z": F(11, 10), "q": F(2, 5)}],
        ),
        Identity(
            "ramanujan-1.16",
            "x = 1/z specialization: unilateral theta-split (corrected print)",
            exact_fn=_exact_ramanujan_116,
            exact_defaults=[{"z": F(2)}],
            exact_denom=4,
        ),
        Identity(
            "mcor",
            "rank-2 psi transformation; exact mode runs the corrected shift display",
            exact_fn=_exact_mcor,
            exact_defaults=[{"ell": 0}, {"ell": 1}],
            exact_denom=2,
            numeric_fn=_numeric_mcor,
            numeric_defaults=[
                {
                    "x1": F(1, 5),
                    "x2": F(-1, 4),
                    "y1": F(3, 20),
                    "y2": F(1, 10),
                    "z": F(6, 5),
                    "ell": 0,
                    "q": F(3, 10),
                }
            ],
        ),
        Identity(
            "mci",
            "two-to-one base shift identity with shift parameter m",
            exact_fn=_exact_mci,
            exact_defaults=[{"m": m} for m in (-2, -1, 0, 1, 2)],
            exact_denom=1,
        ),
        Identity(
            "lem21",
            "Gaussian modular flip of sum z^n e^{-t C(n,2)} over mu + Z",
            numeric_fn=_numeric_lem21,
            numeric_defaults=[
                {"z": F(1), "mu": F(0), "t": F(1)},
                {"z": F(2), "mu": F(1, 3), "t": F(1, 2)},
            ],
        ),
        Identity(
            "lem22",
            "residue-class theta summation over a complete system mod a",
            numeric_fn=_numeric_lem22,
            numeric_defaults=[{"a": 3, "b": 2, "u": 1, "z": F(7, 10), "q": F(2, 5)}],
        ),
        Identity(
            "eq21",
            "product-expansion rearrangement of the bilateral sum",
            numeric_fn=_numeric_eq21,
            numeric_defaults=[{"alpha": 2, "x": F(-3, 10), "y": F(1, 5), "z": F(11, 10), "q": F(2, 5)}],
        ),
        Identity(
            "rama-1psi1",
            "bilateral 1-psi-1 summation in product form",
            exact_fn=_exact_rama_1psi1,
            exact_defaults=[
                {"x": F(1, 3), "y": F(1, 5), "z": F(2)},
                {"x": F(1, 2), "y": F(1, 7), "z": F(3)},
                {"x": F(2, 3), "y": F(1, 4), "z": F(5, 2)},
            ],
            numeric_fn=_numeric_rama_1psi1,
            numeric_defaults=[{"x": F(1, 3), "y": F(1, 5), "z": F(2), "q": F(3, 10)}],
        ),
        Identity(
            "promr1",
            "partial theta sum with geometric compensator",
            numeric_fn=_numeric_promr1,
            numeric_defaults=[{"y": F(3, 5), "z": F(2), "q": F(3, 10)}],
        ),
        Identity(
            "cor32",
            "partial theta sum against its theta-product main term",
            asym_measure=_asym_cor32,
            asym_defaults={"z": F(2), "y": F(19, 20)},
            asym_rate_mode="positive",
        ),
        Identity(
            "asymm",
            "product of paired partial sums against its closed form",
            asym_measure=_asym_asymm,
            asym_defaults={"a": F(1), "c": F(0)},
            asym_rate_mode="positive",
            asym_extra=_asymm_extra,
        ),
        Identity(
            "pro22-1",
            "diagonal multiple-sum evaluation H_2(x; -x; q)",
            exact_fn=_exact_pro22_1,
            exact_defaults=[{"x": F(1, 2)}],
            exact_denom=4,
        ),
        Identity(
            "pro22-2",
            "staircase multiple-sum evaluation H_2(x; xq; q^2)",
            exact_fn=_exact_pro22_2,
            exact_defaults=[{"x": F(1, 3)}],
            exact_denom=2,
        ),
        Identity(
            "prop10",
            "bilateral surplus of the f2 family is exponentially negligible",
            asym_measure=_asym_prop10,
            asym_defaults={"a": F(1), "b": F(1), "c": F(0)},
            asym_rate_mode="positive",
        ),
        Identity(
            "cor02",
            "normalized rank-1 main-term extraction",
            asym_measure=_asym_cor02,
            asym_c_pred=_envelope_c_pred,
            asym_defaults={"alpha": F(2), "x": F(-1, 2), "z": F(1)},
            asym_rate_mode="at_least",
            asym_rate_tol=0.15,
        ),
        Identity(
            "cor2",
            "companion quotient of the f2 family in closed form",
            asym_measure=_asym_cor2,
            asym_c_pred=_envelope_c_pred,
            asym_defaults={"alpha": F(2), "z": F(1)},
            asym_rate_mode="at_least",
            asym_rate_tol=0.15,
        ),
        Identity(
            "cor1",
            "companion quotient of the f1 family with delta-controlled error",
            asym_measure=_asym_cor1,
            asym_c_pred=_cor1_c_pred,
            asym_defaults={"alpha": F(2), "z": F(1)},
            asym_rate_mode="at_least",
            asym_rate_tol=0.20,
        ),
        Identity(
            "mm10",
            "conjectured f1 companion quotient (holds under the delta certificate)",
            asym_measure=_asym_mm10,
            asym_defaults={"a": F(1), "b": F(1), "c": F(0)},
            asym_rate_mode="positive",
            asym_extra=_mm10_extra,
        ),
        Identity(
            "mm20",
            "proved f2 companion quotient",
            asym_measure=_asym_mm20,
            asym_defaults={"a": F(1), "b": F(1), "c": F(0)},
            asym_rate_mode="positive",
        ),
        Identity(
            "f1hat",
            "bilateral rewriting of f1 is termwise identical to f1",
            exact_fn=_exact_f1hat,
            exact_defaults=[{"a": F(1), "b": F(1), "c": F(0)}],
        ),
        Identity(
            "f2hat",
            "bilateral surplus of f2 equals its displayed tail sum",
            exact_fn=_exact_f2hat,
            exact_defaults=[{"a": F(1), "b": F(1), "c": F(0)}],
        ),
    ]
    return {i.id: i for i in ids}


REGISTRY: dict[str, Identity] = _mk_registry()


def identity_ids() -> list[str]:
    return list(REGISTRY)


def _get(id: str) -> Identity:
    try:
        return REGISTRY[id]
    except KeyError:
        raise UnknownIdentity(
            f"unknown identity {id!r}; valid ids: {', '.join(REGISTRY)}"
        ) from None


def _fmt_params(params) -> dict:
    out = {}
    for k in sorted(params):
        v = params[k]
        if isinstance(v, Fraction):
            out[k] = f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
        elif isinstance(v, (int, str)):
            out[k] = str(v)
        else:
            out[k] = mp.nstr(to_mp(v, Precision(64)), 17)
    return out


def _num_str(x, digits=24) -> str:
    return mp.nstr(x, digits)


# ----------------------------------------------------------------------
# check drivers
# ----------------------------------------------------------------------


def check_exact(id: str, params: dict | None = None, order: int = DEFAULT_ORDER) -> CheckReport:
    """Expand both sides of an identity exactly and compare coefficients.

    Passing requires a literally zero deviation on at least `order` powers
    of q.
    """
    ident = _get(id)
    if ident.exact_fn is None:
        raise UnsupportedMode(f"{id} has no exact mode")
    t0 = time.monotonic()
    sets = [params] if params is not None else ident.exact_defaults
    dev = F(0)
    shown = {}
    for p in sets:
        denom = ident.exact_denom(p) if callable(ident.exact_denom) else ident.exact_denom
        grid = _grid(order, denom)
        for label, lhs, rhs in ident.exact_fn(p, grid):
            d, n = max_abs_diff(lhs, rhs)
            if n < order * grid.denom // 2:
                raise DomainError(f"{id}/{label}: comparable order {n} too small")
            if d > dev:
                dev = d
        shown.update(p)
    verdict = "pass" if dev == 0 else "fail"
    return CheckReport(
        id=id,
        mode="exact",
        params=_fmt_params(shown if params is None else params),
        order_or_bits=order,
        deviation=str(dev),
        threshold="0",
        c_fit=None,
        c_pred=None,
        verdict=verdict,
        elapsed_ms=int((time.monotonic() - t0) * 1000),
    )


def check_numeric(
    id: str, params: dict | None = None, precision: Precision = Precision(DEFAULT_BITS)
) -> CheckReport:
    """Evaluate both sides numerically; pass iff the relative residual is
    below 2^-(bits/2)."""
    ident = _get(id)
    if ident.numeric_fn is None:
        raise UnsupportedMode(f"{id} has no numeric mode")
    t0 = time.monotonic()
    sets = [params] if params is not None else ident.numeric_defaults
    with mp.workprec(precision.work):
        threshold = mpf(2) ** (-(precision.bits // 2))
        dev = mpf(0)
        shown = {}
        for p in sets:
            for label, lhs, rhs in ident.numeric_fn(p, precision):
                scale = max(abs(lhs), abs(rhs))
                d = abs(lhs - rhs) / scale if scale > 0 else abs(lhs - rhs)
                if d > dev:
                    dev = d
            shown.update(p)
        verdict = "pass" if dev < threshold else "fail"
        return CheckReport(
            id=id,
            mode="numeric",
            params=_fmt_params(shown if params is None else params),
            order_or_bits=precision.bits,
            deviation=_num_str(dev),
            threshold=_num_str(threshold),
            c_fit=None,
            c_pred=None,
            verdict=verdict,
            elapsed_ms=int((time.monotonic() - t0) * 1000),
        )


def check_asymptotic(
    id: str,
    params: dict | None = None,
    t_grid=DEFAULT_T_GRID,
    precision: Precision = Precision(DEFAULT_ASYM_BITS),
) -> CheckReport:
    """Measure the companion quotient over a decreasing t grid and fit the
    exponential decay constant of |measured/predicted - 1|."""
    ident = _get(id)
    if ident.asym_measure is None:
        raise UnsupportedMode(f"{id} has no asymptotic mode")
    t0 = time.monotonic()
    p = params if params is not None else ident.asym_defaults
    with mp.workprec(precision.work):
        ts = [to_mp(t, precision) for t in t_grid]
        if any(not b < a for a, b in zip(ts, ts[1:])) or any(t <= 0 for t in ts):
            raise DomainError("t grid must be strictly decreasing and positive")
        samples = []
        for t in ts:
            measured, predicted = ident.asym_measure(p, t, precision)
            samples.append((t, abs(measured / predicted - 1)))
        c_pred = ident.asym_c_pred(p, precision) if ident.asym_c_pred else None
        fit = rate_fit(samples, c_pred=c_pred, prec=precision)
        ok = fit.decaying
        if ident.asym_rate_mode == "two_sided" and c_pred is not None:
            ok = ok and fit.rel_err is not None and fit.rel_err <= mpf(ident.asym_rate_tol)
        elif ident.asym_rate_mode == "at_least" and c_pred is not None:
            ok = ok and fit.c_fit >= (1 - mpf(ident.asym_rate_tol)) * c_pred
        else:
            ok = ok and fit.c_fit > 0
        verdict = "pass" if ok else "fail"
        if ident.asym_extra is not None:
            extra_ok = ident.asym_extra(ident, p, precision)
            if verdict == "pass" and not extra_ok:
                verdict = "fail"
        return CheckReport(
            id=id,
            mode="asymptotic",
            params=_fmt_params(p),
            order_or_bits=precision.bits,
            deviation=_num_str(samples[-1][1]),
            threshold=None,
            c_fit=_num_str(fit.c_fit),
            c_pred=_num_str(c_pred) if c_pred is not None else None,
            verdict=verdict,
            elapsed_ms=int((time.monotonic() - t0) * 1000),
        )


def run_suite(selection: str = "all", config: dict | None = None) -> list[CheckReport]:
    """Run the registry checks for one mode selection in registry order."""
    config = config or {}
    if selection not in ("exact", "numeric", "asymptotic", "all"):
        raise DomainError(f"unknown selection {selection!r}")
    order = int(config.get("order", DEFAULT_ORDER))
    bits = int(config.get("bits", DEFAULT_BITS))
    asym_bits = int(config.get("asym_bits", DEFAULT_ASYM_BITS))
    t_grid = config.get("t", DEFAULT_T_GRID)
    reports: list[CheckReport] = []
    for ident in REGISTRY.values():
        if selection in ("exact", "all") and ident.exact_fn is not None:
            reports.append(check_exact(ident.id, order=order))
        if selection in ("numeric", "all") and ident.numeric_fn is not None:
            reports.append(check_numeric(ident.id, precision=Precision(bits)))
        if selection in ("asymptotic", "all") and ident.asym_measure is not None:
            reports.append(
                check_asymptotic(ident.id, t_grid=t_grid, precision=Precision(asym_bits))
            )
    return reports
