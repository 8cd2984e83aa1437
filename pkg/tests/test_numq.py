import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from qbilateral.errors import DomainError
from qbilateral.exactq import ExactSeries, grid_for
from qbilateral.numq import (
    Precision,
    delta_alpha,
    delta_alpha_growth_form,
    eval_series,
    exp_,
    li2,
    log_,
    pi_val,
    pow_,
    solve_macmain_z,
    solve_w,
)

P256 = Precision(256)


def bisect_oracle(f, lo, hi, tol, dps=60):
    """Independent plain-bisection root finder used as test oracle."""
    with mp.workdps(dps):
        lo, hi = mpf(lo), mpf(hi)
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if f(mid) < 0:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2


class TestLi2:
    def test_zero(self):
        assert li2(0, P256) == 0

    def test_one_is_pi2_over_6(self):
        with mp.workprec(P256.work):
            assert abs(li2(1, P256) - mp.pi ** 2 / 6) < mpf(2) ** -250

    def test_half_closed_form(self):
        with mp.workprec(P256.work):
            expect = mp.pi ** 2 / 12 - mp.log(2) ** 2 / 2
            assert abs(li2(mpf(1) / 2, P256) - expect) < mpf(2) ** -250

    def test_reflection_identity_random(self):
        rng = random.Random(42)
        with mp.workprec(P256.work):
            pi2_6 = mp.pi ** 2 / 6
            tol = mpf(10) ** -(P256.bits // 4)
            for _ in range(50):
                u = mpf(rng.uniform(1e-3, 1 - 1e-3))
                lhs = li2(u, P256) + li2(1 - u, P256) + mp.log(u) * mp.log(1 - u)
                assert abs(lhs - pi2_6) < tol

    def test_against_mpmath_polylog(self):
        with mp.workprec(P256.work):
            for x in ["0.1", "0.37", "0.5", "0.73", "0.99", "-0.8", "-0.45"]:
                ours = li2(mpf(x), P256)
                ref = mpmath.polylog(2, mpf(x))
                assert abs(ours - ref) < mpf(2) ** -240

    def test_outside_disk_rejected(self):
        with pytest.raises(DomainError):
            li2(1.5, P256)


class TestSolveW:
    def test_alpha_one_z_one(self):
        w = solve_w(1, 1, 1, P256)
        with mp.workprec(P256.work):
            assert abs(w - mpf(1) / 2) < mpf(2) ** -250

    def test_sqrt_case_closed_form(self):
        w = solve_w(2, 1, Fraction(1, 2), P256)
        with mp.workprec(P256.work):
            expect = (3 - mp.sqrt(5)) / 2
            assert abs(w - expect) < mpf(2) ** -248

    def test_exponent_half_z_two_vs_bisection_oracle(self):
        w = solve_w(2, 2, Fraction(1, 2), P256)
        ref = bisect_oracle(lambda v: v + mp.sqrt(v) / 2 - 1, 0, 1, mpf(10) ** -30)
        assert abs(w - ref) < mpf(10) ** -29
        assert abs(float(w) - 0.609611) < 1e-6

    def test_residual_bound(self):
        rng = random.Random(5)
        with mp.workprec(P256.work):
            for _ in range(20):
                a = mpf(rng.uniform(1, 6))
                z = mpf(rng.uniform(0.2, 5))
                e = mpf(rng.uniform(0.05, 1))
                w = solve_w(a, z, e, P256)
                assert abs(w + w ** e / z - 1) < mpf(2) ** (-P256.bits + 8)

    def test_monotone_in_z(self):
        with mp.workprec(P256.work):
            prev = None
            for z in ["4.0", "2.0", "1.0", "0.5", "0.25"]:
                w = solve_w(2, mpf(z), Fraction(1, 2), P256)
                if prev is not None:
                    assert w < prev
                prev = w


class TestSolveMacmain:
    def test_golden_ratio_case(self):
        z = solve_macmain_z(1, 1, P256)
        with mp.workprec(P256.work):
            assert abs(z - (mp.sqrt(5) - 1) / 2) < mpf(2) ** -248

    def test_linear_case(self):
        z = solve_macmain_z(1, Fraction(1, 2), P256)
        with mp.workprec(P256.work):
            assert abs(z - mpf(1) / 2) < mpf(2) ** -250

    def test_a2_b1(self):
        z = solve_macmain_z(2, 1, P256)
        with mp.workprec(P256.work):
            assert abs(z - mpf(1) / 2) < mpf(2) ** -250


class TestDeltaAlpha:
    def test_positive_at_z_one_for_small_alpha(self):
        for a in range(1, 7):
            d = delta_alpha(a, 1, P256)
            assert d > 0, f"delta_{a}(1) = {d}"

    def test_alpha2_two_code_paths(self):
        # alpha = 2, z = 1: both defining equations coincide, w_a = w_b = (3-sqrt5)/2
        with mp.workprec(P256.work):
            w = (3 - mp.sqrt(5)) / 2
            lw = mp.log(w)
            direct = (
                mpf(1) / 2
                - mpf(1) / 6
                + (2 * li2(w, P256) + lw * lw / 4 + lw * lw / 4) / (2 * mp.pi ** 2)
            )
            assert abs(delta_alpha(2, 1, P256) - direct) < mpf(2) ** -240

    def test_continuity_near_z_one(self):
        with mp.workprec(P256.work):
            d0 = delta_alpha(2, 1, P256)
            for dz in ("1.000001", "0.999999"):
                assert abs(delta_alpha(2, mpf(dz), P256) - d0) < mpf(10) ** -4

    def test_growth_form_agreement_grid(self):
        with mp.workprec(P256.work):
            tol = mpf(10) ** -20
            for a in ("1.5", "2", "3", "4.5", "6"):
                for z in ("0.5", "1", "2"):
                    d1 = delta_alpha(mpf(a), mpf(z), P256)
                    d2 = delta_alpha_growth_form(mpf(a), mpf(z), P256)
                    assert abs(d1 - d2) < tol, (a, z, d1, d2)

    def test_alpha_one_domain(self):
        assert delta_alpha(1, 2, P256) > 0
        with pytest.raises(DomainError):
            delta_alpha(1, Fraction(1, 2), P256)


class TestElementary:
    def test_pow_square_root(self):
        with mp.workprec(P256.work):
            q = mpf(3) / 7
            r = pow_(q, Fraction(1, 2), P256)
            assert abs(r * r - q) < mpf(2) ** -250

    def test_exp_log(self):
        with mp.workprec(P256.work):
            assert abs(exp_(log_(2, P256), P256) - 2) < mpf(2) ** -250

    def test_q_power_alpha_binom(self):
        # q^(alpha * binom(3,2)) at alpha = 5/2, q = 1/2 equals 2^(-15/2)
        with mp.workprec(P256.work):
            v = pow_(Fraction(1, 2), Fraction(5, 2) * 3, P256)
            assert abs(v - mpf(2) ** (mpf(-15) / 2)) < mpf(2) ** -250

    def test_log_domain(self):
        with pytest.raises(DomainError):
            log_(-1, P256)
        with pytest.raises(DomainError):
            pow_(0, 0, P256)

    def test_pi(self):
        with mp.workprec(P256.work):
            assert abs(pi_val(P256) - mp.pi) == 0


def test_eval_series_geometric():
    g = grid_for(50)
    s = ExactSeries(g, {k: Fraction(1) for k in range(50)})
    with mp.workprec(P256.work):
        v = eval_series(s, mpf(1) / 10, P256)
        expect = (1 - mpf(10) ** -50) / (1 - mpf(1) / 10)
        assert abs(v - expect) < mpf(2) ** -200


def test_eval_series_fractional_grid():
    g = grid_for(4, 2)
    s = ExactSeries(g, {1: Fraction(3)})  # 3 q^(1/2)
    with mp.workprec(P256.work):
        v = eval_series(s, mpf(1) / 4, P256)
        assert abs(v - mpf(3) / 2) < mpf(2) ** -250
