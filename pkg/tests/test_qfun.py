import random
from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf

from qbilateral.errors import DomainError, PolePoch
from qbilateral.exactq import ExactSeries, ExponentGrid, QMono, grid_for
from qbilateral.numq import Precision, eval_series
from qbilateral.qfun import (
    INFINITY,
    PochIndex,
    eta_transform_sides,
    poch_prod_series,
    poch_recip_series,
    poch_series,
    theta_series,
    theta_value,
    poch_value,
)

P256 = Precision(256)
P512 = Precision(512)
F = Fraction


class TestPochExact:
    def test_index_zero_is_one(self):
        g = grid_for(20)
        assert poch_series(F(2, 3), 0, g) == ExactSeries.one(g)

    def test_finite_small(self):
        g = grid_for(10)
        # (x)_2 = (1-x)(1-xq) = 1 - x - xq + x^2 q
        s = poch_series(F(1, 2), 2, g)
        assert s.coeff(0) == F(1, 2)
        assert s.coeff(1) == F(-1, 4)

    def test_euler_identity(self):
        # sum_n z^n q^binom(n,2) / (q)_n = (-z; q)_inf   at z = 1/3, order 40
        n_pow = 40
        g = grid_for(n_pow)
        z = F(1, 3)
        # term_n = z^n q^(binom(n,2)) / (q)_n with incremental reciprocal
        lhs = ExactSeries.zero(g)
        recip = ExactSeries.one(g)
        n = 0
        while n * (n - 1) // 2 < n_pow:
            if n > 0:
                recip = recip.div_one_minus(F(1), n * g.denom)
            lhs = lhs + recip.scaled(z ** n).shifted(g.denom * (n * (n - 1) // 2))
            n += 1
        rhs = poch_series(QMono(-z), INFINITY, g)
        assert lhs == rhs

    def test_negative_index_reflection_product(self):
        # (-q)_(-n) * (-1)_n = q^(n(n-1)/2) for n = 1..6
        g = grid_for(30)
        for n in range(1, 7):
            a = poch_series(QMono(F(-1), F(1)), -n, g)  # (-q)_{-n}
            b = poch_series(F(-1), n, g)  # (-1)_n
            expect = ExactSeries.monomial(g, F(1), g.denom * (n * (n - 1) // 2))
            assert a * b == expect, n

    def test_reflection_relation_random(self):
        # (1/u)_n (uq)_{-n} = (-u)^(-n) q^binom(n,2), n = 1..8, random rational u
        rng = random.Random(2718)
        g = grid_for(25)
        for n in range(1, 9):
            for _ in range(4):
                u = F(rng.randrange(1, 12), rng.randrange(1, 12))
                if u == 1:
                    continue
                lhs = poch_series(QMono(1 / u), n, g) * poch_series(QMono(u, F(1)), -n, g)
                coef = (-u) ** (-n)
                expect = ExactSeries.monomial(g, coef, g.denom * (n * (n - 1) // 2))
                assert lhs == expect, (n, u)

    def test_recip_of_q_negative_index_is_zero(self):
        g = grid_for(15)
        for n in range(1, 5):
            s = poch_recip_series(QMono(F(1), F(1)), -n, g)  # 1/(q)_{-n}
            assert s.is_zero

    def test_poch_pole_raises(self):
        g = grid_for(10)
        with pytest.raises(PolePoch):
            poch_series(QMono(F(1), F(1)), -2, g)  # (q)_{-2} itself has a pole
        with pytest.raises(PolePoch):
            poch_recip_series(F(1), 3, g)  # 1/(1)_3, (1)_3 = 0

    def test_base_two(self):
        # (q^2; q^2)_2 = (1 - q^2)(1 - q^4)
        g = grid_for(10)
        s = poch_series(QMono(F(1), F(2)), 2, g, base=2)
        assert s.coeff(0) == 1 and s.coeff(2) == -1 and s.coeff(4) == -1 and s.coeff(6) == 1

    def test_real_index_rejected_exactly(self):
        g = grid_for(10)
        with pytest.raises(DomainError):
            poch_series(F(1, 2), PochIndex.real(0.5), g)


class TestPochNumeric:
    def test_single_factor(self):
        with mp.workprec(P256.work):
            x = mpc("0.3", "0.1")
            v = poch_value(x, 1, mpf("0.5"), P256)
            assert abs(v - (1 - x)) < mpf(2) ** -250

    def test_real_index_collapses_to_integer(self):
        with mp.workprec(P256.work):
            a, q = mpf(1) / 4, mpf(1) / 3
            vi = poch_value(a, 3, q, P256)
            vr = poch_value(a, PochIndex.real(3), q, P256)
            assert abs(vi - vr) < mpf(2) ** -240

    def test_cross_engine_euler_product(self):
        # (q;q)_inf at q = 0.1 vs exact truncation at order 60
        g = grid_for(60)
        trunc = poch_series(QMono(F(1), F(1)), INFINITY, g)
        with mp.workprec(P256.work):
            q = mpf(1) / 10
            exact_val = eval_series(trunc, q, P256)
            num_val = poch_value(q, INFINITY, q, P256)
            assert abs(exact_val - num_val) < mpf(10) ** -50

    def test_negative_index_pole(self):
        with mp.workprec(P256.work):
            q = mpf("0.5")
            with pytest.raises(PolePoch):
                poch_value(q ** 2, -3, q, P256)

    def test_q_domain(self):
        with pytest.raises(DomainError):
            poch_value(mpf("0.5"), 2, mpf("1.5"), P256)


class TestThetaExact:
    def test_theta_q_q_is_zero(self):
        g = grid_for(30)
        assert theta_series(QMono(F(1), F(1)), g, form="product").is_zero
        assert theta_series(QMono(F(1), F(1)), g, form="sum").is_zero

    def test_jtp_sum_equals_product_z2(self):
        g = grid_for(40)
        s = theta_series(F(2), g, form="sum")
        p = theta_series(F(2), g, form="product")
        assert s == p

    def test_jtp_on_half_grid(self):
        # theta(z; q^(1/2)) with z = 3: both forms on the D = 2 grid
        g = ExponentGrid(2, 60)
        s = theta_series(F(3), g, base=F(1, 2), form="sum")
        p = theta_series(F(3), g, base=F(1, 2), form="product")
        assert s == p

    def test_theta_minus_one_product_form(self):
        # theta(-1; q) = 2 (-q)_inf (q^2; q^2)_inf
        g = grid_for(35)
        lhs = theta_series(F(-1), g, form="sum")
        rhs = (
            poch_series(QMono(F(-1), F(1)), INFINITY, g)
            * poch_series(QMono(F(1), F(2)), INFINITY, g, base=2)
        ).scaled(2)
        assert lhs == rhs

    def test_quasi_periodicity(self):
        # theta(z; q) = (-z)^l q^(l(l-1)/2) theta(q^l z; q) for l in {-2,-1,1,2}
        g = grid_for(40)
        z = F(3, 2)
        ref = theta_series(z, g, form="sum")
        for ell in (-2, -1, 1, 2):
            shifted_arg = QMono(z, F(ell))
            t = theta_series(shifted_arg, g, form="sum")
            factor = QMono((-z) ** ell, F(ell * (ell - 1), 2))
            rhs = t.scaled(factor.coef).shifted(g.index_of(factor.exp))
            assert ref == rhs, ell

    def test_theta_vanishes_at_half_powers(self):
        # theta(q^(l/2); q^(1/2)) = 0 for l in {-2,...,2}
        g = ExponentGrid(2, 80)
        for ell in (-2, -1, 0, 1, 2):
            t = theta_series(QMono(F(1), F(ell, 2)), g, base=F(1, 2), form="sum")
            assert t.is_zero, ell

    def test_zero_argument_rejected(self):
        g = grid_for(10)
        with pytest.raises(DomainError):
            theta_series(QMono(F(0)), g)


class TestThetaNumeric:
    def test_sum_vs_product(self):
        with mp.workprec(P256.work):
            q = mpf("0.35")
            for z in (mpf(2), mpf("0.7"), mpc("0.4", "0.3"), mpc("-1.2", "0.5")):
                s = theta_value(z, q, P256, form="sum")
                p = theta_value(z, q, P256, form="product")
                assert abs(s - p) < mpf(2) ** -200 * (1 + abs(s))

    def test_cross_engine(self):
        g = grid_for(60)
        t = theta_series(F(2), g, form="sum")
        with mp.workprec(P256.work):
            q = mpf("0.2")
            ev = eval_series(t, q, P256)
            nv = theta_value(mpf(2), q, P256)
            assert abs(ev - nv) < mpf(10) ** -38


class TestEtaTransform:
    def test_self_dual_point(self):
        with mp.workprec(P512.work):
            lhs, rhs = eta_transform_sides(2 * mp.pi, P512)
            assert abs(lhs - rhs) < mpf(10) ** -60 * abs(lhs)

    def test_t_equal_one(self):
        lhs, rhs = eta_transform_sides(1, P512)
        assert abs(lhs - rhs) < mpf(10) ** -60 * abs(lhs)

    def test_small_t_acceleration(self):
        # at t = 0.3 both routes agree; the dual product needs only one factor block
        lhs, rhs = eta_transform_sides(mpf("0.3"), P512)
        assert abs(lhs - rhs) < mpf(10) ** -60 * abs(lhs)


def test_poch_prod_series():
    g = grid_for(12)
    a = poch_prod_series([F(1, 2), F(1, 3)], 2, g)
    b = poch_series(F(1, 2), 2, g) * poch_series(F(1, 3), 2, g)
    assert a == b


def test_cross_engine_random_series():
    # exact series evaluated at numeric q match numeric reconstruction 2^(-bits+16)
    rng = random.Random(11)
    prec = Precision(128)
    g = grid_for(40)
    with mp.workprec(prec.work):
        q = mpf(1) / 4
        for _ in range(10):
            x = F(rng.randrange(-3, 4), rng.randrange(1, 5))
            if x == 0:
                continue
            n = rng.randrange(1, 6)
            s = poch_series(x, n, g)
            sv = eval_series(s, q, prec)
            nv = poch_value(mpf(x.numerator) / x.denominator, n, q, prec)
            assert abs(sv - nv) < mpf(2) ** (-prec.bits + 16) * (1 + abs(nv))
