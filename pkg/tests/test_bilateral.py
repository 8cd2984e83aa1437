import random
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from qbilateral.bilateral import (
    AlphaRational,
    BilateralParams,
    QuadFormQ,
    f2hat_tail_series,
    f_family_series,
    f_family_value,
    h1_closed_series,
    h_alpha_series,
    h_alpha_value,
    l_scalar_series,
    l_scalar_value,
    l_vector_series,
    l_vector_series_expanded,
    l_vector_value,
    psi_series,
    psi_value,
)
from qbilateral.errors import Divergence, DomainError
from qbilateral.exactq import ExactSeries, ExponentGrid, QMono, grid_for
from qbilateral.numq import Precision, eval_series
from qbilateral.qfun import INFINITY, poch_series, poch_recip_series

F = Fraction
P192 = Precision(192)


def bilateral_direct(grid, coeff_of_n, n_range):
    """Assemble sum_n coeff_of_n(n) independently of the L engine."""
    total = ExactSeries.zero(grid)
    for n in n_range:
        t = coeff_of_n(n)
        if t is not None:
            total = total + t
    return total


class TestLScalarExact:
    def test_euler_case(self):
        # L_1(q; q, z) = (-z)_inf at z = 1/3 through order q^40
        g = grid_for(40)
        lhs = l_scalar_series(QMono(F(1), F(1)), F(1, 3), 1, g)
        rhs = poch_series(QMono(F(-1, 3)), INFINITY, g)
        assert lhs == rhs

    def test_f2hat_bilateral_representation(self):
        # L_3(-1; q, q) equals sum_{n in Z} q^{n^2} (-q)_n expanded directly
        g = grid_for(30)
        lhs = l_scalar_series(F(-1), QMono(F(1), F(1)), 3, g)

        def term(n):
            e = n * n
            if e >= 30 and n > 0:
                return None
            mono = poch_series(QMono(F(-1), F(1)), n, g)
            return mono.shifted(g.denom * e) if e >= 0 else None

        rhs = bilateral_direct(g, term, range(-8, 9))
        assert lhs == rhs

    def test_z_zero_gives_one(self):
        g = grid_for(10)
        assert l_scalar_series(F(1, 2), F(0), 2, g) == ExactSeries.one(g)

    def test_alpha_below_one_divergence(self):
        g = grid_for(10)
        with pytest.raises(Divergence):
            l_scalar_series(F(1, 2), F(1, 3), F(1, 2), g)

    def test_alpha_below_one_with_vanishing_negative_wing(self):
        # x = q kills n < 0, so L_{1/2}(q; q, w) is a valid unilateral series
        g = grid_for(20, 4)
        s = l_scalar_series(QMono(F(1), F(1)), QMono(F(-1, 3), F(1, 4)), F(1, 2), g)
        # n = 1 term: w q^0 / (q)_1 -> coefficient of q^(1/4) is -1/3
        assert s.coefficient_of(F(1, 4)) == F(-1, 3)
        assert s.coeff(0) == 1


class TestLVectorExact:
    def test_y_zero_reduces_to_scalar(self):
        g = grid_for(30)
        p = BilateralParams(alpha=F(3), r=1, x=(F(1, 2),), y=(F(0),), z=F(1, 5))
        assert l_vector_series(p, g) == l_scalar_series(F(1, 2), F(1, 5), 3, g)

    def test_r1_alpha1_matches_psi_wrapper(self):
        g = grid_for(25)
        x, y, z = F(1, 3), F(1, 5), F(2)
        p = BilateralParams(alpha=F(1), r=1, x=(z * x,), y=(y / z,), z=z)
        via_l = l_vector_series(p, g)
        via_psi = psi_series([QMono(z / y)], [QMono(z * x)], QMono(-y), g)
        assert via_l == via_psi

    def test_z_zero(self):
        g = grid_for(10)
        p = BilateralParams(alpha=F(2), r=2, x=(F(1, 2), F(1, 3)), y=(F(1, 4), F(1, 5)), z=F(0))
        assert l_vector_series(p, g) == ExactSeries.one(g)

    def test_two_displayed_forms_agree_r1(self):
        rng = random.Random(1234)
        g = grid_for(20, 2)
        done = 0
        while done < 6:
            x = F(rng.randrange(-3, 4) or 1, rng.randrange(2, 6))
            y = F(rng.randrange(-3, 4) or 1, rng.randrange(2, 6))
            z = F(rng.randrange(1, 4), rng.randrange(1, 4))
            if x == 1 or y == 1:
                continue  # (1)_n poles / degenerate numerators
            p = BilateralParams(alpha=F(5, 2), r=1, x=(x,), y=(y,), z=z)
            assert l_vector_series(p, g) == l_vector_series_expanded(p, g), (x, y, z)
            done += 1

    def test_two_displayed_forms_agree_r2(self):
        g = grid_for(16)
        p = BilateralParams(
            alpha=F(3), r=2, x=(F(1, 2), F(-1, 3)), y=(F(1, 4), F(1, 5)), z=F(1, 6)
        )
        assert l_vector_series(p, g) == l_vector_series_expanded(p, g)

    def test_geometric_tail_against_numeric(self):
        # alpha = r = 1 exercises the stabilized geometric tail; cross-check numerically
        g = grid_for(24)
        x, y, z = F(1, 3), F(1, 5), F(2)
        p = BilateralParams(alpha=F(1), r=1, x=(z * x,), y=(y / z,), z=z)
        s = l_vector_series(p, g)
        with mp.workprec(P192.work):
            q = mpf(1) / 5
            sv = eval_series(s, q, P192)
            nv = l_vector_value(p, q, P192)
            assert abs(sv - nv) < mpf(10) ** -14 * abs(nv)


class TestHExact:
    def test_h_single_sided_formula(self):
        # H_alpha(x; 0; q) = sum_i q^{(1 - 1/alpha) i^2 / 2} (-x)^i / (q)_i
        g = grid_for(30, 4)
        alpha, x = F(2), F(1, 3)
        lhs = h_alpha_series(x, F(0), alpha, g)
        rhs = ExactSeries.zero(g)
        recip = ExactSeries.one(g)
        i = 0
        while F(1, 4) * i * i <= 30:
            if i > 0:
                recip = recip.div_one_minus(F(1), i * g.denom)
            e = g.index_of(F(i * i, 4))
            rhs = rhs + recip.scaled((-x) ** i).shifted(e)
            i += 1
        assert lhs == rhs

    def test_h2_x_minus_x(self):
        # H_2(x; -x; q) = (-x^2 q; q^2)_inf at x = 1/2
        g = grid_for(30, 4)
        lhs = h_alpha_series(F(1, 2), F(-1, 2), F(2), g)
        rhs = poch_series(QMono(F(-1, 4), F(1)), INFINITY, g, base=2)
        assert lhs == rhs

    def test_h2_x_xq_base_q2(self):
        # H_2(x; xq; q^2) = (x q^(1/2); q)_inf at x = 1/3
        g = grid_for(30, 2)
        lhs = h_alpha_series(F(1, 3), QMono(F(1, 3), F(1)), F(2), g, base=2)
        rhs = poch_series(QMono(F(1, 3), F(1, 2)), INFINITY, g, base=1)
        assert lhs == rhs

    def test_h1_closed_form_vs_numeric(self):
        g = grid_for(25)
        x, y = F(1, 3), F(1, 5)
        s = h1_closed_series(x, y, g)
        with mp.workprec(P192.work):
            q = mpf(1) / 4
            sv = eval_series(s, q, P192)
            nv = h_alpha_value((mpf(1) / 3,), (mpf(1) / 5,), 1, q, P192)
            assert abs(sv - nv) < mpf(10) ** -12 * abs(nv)


class TestQuadForm:
    def test_positive_on_orthant_box(self):
        for alpha, r in ((F(3, 2), 1), (F(2), 1), (F(3), 2), (F(7, 2), 2)):
            qf = QuadFormQ(alpha, r)
            assert qf.alpha > r
            rng = range(0, 11)
            if r == 1:
                pts = ((i, j) for i in rng for j in rng)
                for i, j in pts:
                    if (i, j) != (0, 0):
                        assert qf.value((i,), (j,)) > 0, (alpha, i, j)
            else:
                for i1 in range(0, 11, 2):
                    for i2 in range(0, 11, 3):
                        for j1 in range(0, 11, 2):
                            for j2 in range(0, 11, 3):
                                if (i1, i2, j1, j2) != (0, 0, 0, 0):
                                    assert qf.value((i1, i2), (j1, j2)) > 0

    def test_semidefinite_at_alpha_equal_r(self):
        qf = QuadFormQ(2, 2)
        assert qf.value((1, 1), (0, 0)) == 0
        assert qf.lambda_min_orthant() == 0

    def test_lambda_min(self):
        assert QuadFormQ(F(2), 1).lambda_min_orthant() == F(1, 2)
        assert QuadFormQ(F(3), 2).lambda_min_orthant() == F(1, 3)


class TestPsi:
    def test_z_zero(self):
        g = grid_for(10)
        assert psi_series([F(1, 2)], [F(1, 3)], F(0), g) == ExactSeries.one(g)

    def test_r1_terminating_termwise(self):
        # psi(a; q; q, w q^2): lower parameter q kills the negative wing and
        # the q^2 in the argument terminates the upper one, so a plain
        # termwise assembly is exact.  Negative-index builders need headroom.
        g = grid_for(18)
        gx = grid_for(70)
        a, b, w = F(3), QMono(F(1), F(1)), QMono(F(1, 5), F(2))
        lhs = psi_series([a], [b], w, g)

        def term(n):
            num = poch_series(a, n, gx)
            den = poch_recip_series(b, n, gx)
            e = gx.index_of(w.exp * n)
            return ((num * den).scaled(w.coef ** n).shifted(e)).truncated(18)

        rhs = bilateral_direct(g, term, range(-6, 10))
        assert lhs == rhs

    def test_numeric_r2(self):
        with mp.workprec(P192.work):
            q = mpf("0.3")
            v = psi_value(
                (mpf(2), mpf(3)), (mpf("0.4"), mpf("0.5")), mpf("0.05"), q, P192
            )
            # direct bilateral sum
            from qbilateral.qfun import poch_value

            direct = mp.mpc(0)
            for n in range(-420, 120):
                t = (
                    poch_value(mpf(2), n, q, P192)
                    * poch_value(mpf(3), n, q, P192)
                    / poch_value(mpf("0.4"), n, q, P192)
                    / poch_value(mpf("0.5"), n, q, P192)
                    * mpf("0.05") ** n
                )
                direct += t
            assert abs(v - direct) < mpf(10) ** -40 * abs(direct)


class TestFFamily:
    def test_f1hat_equals_f1(self):
        g = grid_for(30)
        lhs = f_family_series("f1hat", F(1), F(1), F(0), g)
        rhs = f_family_series("f1", F(1), F(1), F(0), g)
        assert lhs == rhs

    def test_f2hat_minus_f2_is_tail(self):
        g = grid_for(30)
        f2hat = f_family_series("f2hat", F(1), F(1), F(0), g)
        f2 = f_family_series("f2", F(1), F(1), F(0), g)
        tail = f2hat_tail_series(F(1), F(1), F(0), g)
        assert f2hat - f2 == tail

    def test_domain_errors(self):
        g = grid_for(10)
        with pytest.raises(DomainError):
            f_family_series("f1", F(-1), F(1), F(0), g)
        with pytest.raises(DomainError):
            f_family_series("f2", F(1, 3), F(1), F(0), g)
        with pytest.raises(DomainError):
            f_family_series("bogus", F(1), F(1), F(0), g)

    def test_f2tilde_exact_rational_root(self):
        # a = 8, b = 1: a^(1/3) = 2 exactly; compare against an inline sum of
        # 2^n q^(n^2/3 - n/3) / (q)_n
        g = grid_for(12, 6)
        s = f_family_series("f2tilde", F(8), F(1), F(0), g)
        direct = ExactSeries.zero(g)
        recip = ExactSeries.one(g)
        n = 0
        while F(n * n - n, 3) < 12:
            if n > 0:
                recip = recip.div_one_minus(F(1), n * g.denom)
            direct = direct + recip.scaled(F(2) ** n).shifted(g.index_of(F(n * n - n, 3)))
            n += 1
        assert s == direct

    def test_f2tilde_irrational_root_rejected(self):
        g = grid_for(10, 6)
        with pytest.raises(DomainError):
            f_family_series("f2tilde", F(2), F(1), F(0), g)

    def test_f_family_value_routes(self):
        # hat and plain values agree to the bilateral surplus at modest t
        prec = Precision(128)
        with mp.workprec(prec.work):
            t = mpf("0.4")
            f2 = f_family_value("f2", 1, 1, 0, t, prec)
            f2h = f_family_value("f2hat", 1, 1, 0, t, prec)
            assert f2h > f2
            assert (f2h - f2) / f2 < mpf("0.2")
            f1 = f_family_value("f1", 1, 1, 0, t, prec)
            f1h = f_family_value("f1hat", 1, 1, 0, t, prec)
            assert abs(f1 - f1h) < mpf(10) ** -30 * f1

    def test_hat_ratio_decays(self):
        prec = Precision(256)
        with mp.workprec(prec.work):
            prev = None
            for t in (mpf("0.5"), mpf("0.25"), mpf("0.125")):
                f2 = f_family_value("f2", 1, 1, 0, t, prec)
                f2h = f_family_value("f2hat", 1, 1, 0, t, prec)
                ratio = abs(f2h / f2 - 1)
                if prev is not None:
                    assert ratio < prev
                prev = ratio


class TestCrossEngine:
    def test_l_scalar(self):
        g = grid_for(40)
        prec = Precision(64)
        s = l_scalar_series(F(1, 2), F(1, 5), 2, g)
        with mp.workprec(prec.work):
            q = mpf(1) / 4
            sv = eval_series(s, q, prec)
            nv = l_scalar_value(mpf("0.5"), mpf("0.2"), 2, q, prec)
            assert abs(sv - nv) < mpf(2) ** (-prec.bits + 16) * (1 + abs(nv))

    def test_h_alpha(self):
        g = grid_for(40, 4)
        prec = Precision(64)
        s = h_alpha_series(F(1, 3), F(1, 4), F(2), g)
        with mp.workprec(prec.work):
            q = mpf(1) / 4
            sv = eval_series(s, q, prec)
            nv = h_alpha_value((mpf(1) / 3,), (mpf(1) / 4,), 2, q, prec)
            assert abs(sv - nv) < mpf(2) ** (-prec.bits + 16) * (1 + abs(nv))


def test_alpha_rational_validation():
    with pytest.raises(DomainError):
        AlphaRational(4, 2)
    with pytest.raises(DomainError):
        AlphaRational(0, 1)
    assert AlphaRational(5, 2).value == F(5, 2)


def test_bilateral_params_validation():
    with pytest.raises(DomainError):
        BilateralParams(alpha=F(2), r=3, x=(1, 1, 1), y=(1, 1, 1), z=1)
    with pytest.raises(DomainError):
        BilateralParams(alpha=F(2), r=2, x=(1,), y=(1, 1), z=1)
