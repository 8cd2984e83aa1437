import io
import random
from fractions import Fraction

import pytest

from qbilateral.errors import IncompatibleGrid, ZeroConstantTerm
from qbilateral.exactq import (
    ExactSeries,
    ExponentGrid,
    QMono,
    grid_for,
    max_abs_diff,
    read_coeff_csv,
    write_coeff_csv,
)


def geometric(grid):
    return ExactSeries(grid, {k: Fraction(1) for k in range(grid.order)})


def partitions_brute(n):
    """Number of partitions of n by restricted-part recursion (oracle)."""

    def count(n, largest):
        if n == 0:
            return 1
        if largest == 0:
            return 0
        return sum(count(n - k, min(n - k, k)) for k in range(1, min(n, largest) + 1))

    return count(n, n)


def euler_product(grid, jmax=None):
    """prod_{j>=1} (1 - q^j) truncated on the given grid."""
    out = ExactSeries.one(grid)
    n = grid.order // grid.denom
    for j in range(1, (jmax or n) + 1):
        out = out.times_factor([(0, Fraction(1)), (j * grid.denom, Fraction(-1))])
    return out.truncated(grid.order)


class TestBasics:
    def test_add_cancellation(self):
        g = grid_for(8)
        a = ExactSeries(g, {0: Fraction(1), 1: Fraction(1)})
        b = ExactSeries(g, {0: Fraction(1), 1: Fraction(-1)})
        assert (a + b) == ExactSeries(g, {0: Fraction(2)})

    def test_add_identity(self):
        g = grid_for(8)
        s = ExactSeries(g, {0: Fraction(3, 7), 5: Fraction(-2)})
        assert (s + ExactSeries.zero(g)) == s

    def test_regrid_then_add_self(self):
        g = grid_for(4)
        s = ExactSeries(g, {0: Fraction(1), 1: Fraction(1)})
        r = s.regrid(2)
        assert r.coeff(0) == 1 and r.coeff(2) == 1 and r.grid.order == 8
        two = r + r
        assert two == ExactSeries(ExponentGrid(2, 8), {0: Fraction(2), 2: Fraction(2)})

    def test_mul_difference_of_squares(self):
        g = grid_for(8)
        a = ExactSeries(g, {0: Fraction(1), 1: Fraction(-1)})
        b = ExactSeries(g, {0: Fraction(1), 1: Fraction(1)})
        assert (a * b) == ExactSeries(g, {0: Fraction(1), 2: Fraction(-1)})

    def test_mul_unit(self):
        g = grid_for(10)
        s = ExactSeries(g, {0: Fraction(5), 3: Fraction(1, 3), 9: Fraction(-7, 2)})
        assert s * ExactSeries.one(g) == s

    def test_geometric_telescope(self):
        g = grid_for(12)
        one_minus_q = ExactSeries(g, {0: Fraction(1), 1: Fraction(-1)})
        assert one_minus_q * geometric(g) == ExactSeries.one(g)

    def test_invert_one_minus_q(self):
        g = grid_for(12)
        s = ExactSeries(g, {0: Fraction(1), 1: Fraction(-1)})
        assert s.invert() == geometric(g)

    def test_invert_one(self):
        g = grid_for(6)
        assert ExactSeries.one(g).invert() == ExactSeries.one(g)

    def test_invert_partition_count(self):
        # 1 / (q;q)_inf is the partition generating series
        g = grid_for(10)
        gen = euler_product(g).invert()
        assert gen.coeff(5) == partitions_brute(5) == 7
        for n in range(9):
            assert gen.coeff(n) == partitions_brute(n)

    def test_invert_zero_constant_raises(self):
        g = grid_for(6)
        with pytest.raises(ZeroConstantTerm):
            ExactSeries(g, {1: Fraction(1)}).invert()

    def test_regrid_identity_coeffs(self):
        g = grid_for(4)
        s = ExactSeries(g, {0: Fraction(1), 1: Fraction(1)})
        r = s.regrid(2)
        assert r.coefficient_of(Fraction(1)) == 1
        assert r.coefficient_of(Fraction(1, 2)) == 0

    def test_regrid_round_trip_contents(self):
        g = ExponentGrid(2, 10)
        s = ExactSeries(g, {1: Fraction(2, 3), 4: Fraction(-1)})
        r = s.regrid(6)
        assert r.coefficient_of(Fraction(1, 2)) == Fraction(2, 3)
        assert r.coefficient_of(Fraction(2)) == Fraction(-1)
        assert s == r  # __eq__ regrids internally

    def test_regrid_rejects_non_multiple(self):
        g = ExponentGrid(2, 10)
        with pytest.raises(IncompatibleGrid):
            ExactSeries(g, {0: Fraction(1)}).regrid(3)


class TestLaurentSupport:
    def test_shift_negative_and_mul_order(self):
        g = grid_for(10)
        s = ExactSeries(g, {0: Fraction(1), 1: Fraction(1)}).shifted(-2)
        assert s.min_index() == -2
        assert s.grid.order == 8
        back = s.shifted(2)
        assert back.coeff(0) == 1 and back.grid.order == 10

    def test_mul_with_negative_support_limits_order(self):
        g = grid_for(10)
        a = geometric(g)  # known mod q^10
        b = ExactSeries.monomial(g, Fraction(1), -3)
        prod = a * b
        # only coefficients below q^7 are determined by a mod q^10
        assert prod.grid.order == 10 - 3
        assert prod.coeff(-3) == 1 and prod.coeff(6) == 1


class TestRingProperties:
    def random_series(self, rng, grid, laurent=False):
        lo = -3 if laurent else 0
        return ExactSeries(
            grid,
            {
                rng.randrange(lo, grid.order): Fraction(rng.randrange(-9, 10), rng.randrange(1, 7))
                for _ in range(rng.randrange(0, 8))
            },
        )

    def test_ring_axioms_randomized(self):
        rng = random.Random(20240817)
        g = grid_for(12)
        for _ in range(120):
            a = self.random_series(rng, g)
            b = self.random_series(rng, g)
            c = self.random_series(rng, g)
            assert a + b == b + a
            assert (a + b) + c == a + (b + c)
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c

    def test_invert_round_trip_randomized(self):
        rng = random.Random(99)
        g = grid_for(14)
        for _ in range(120):
            s = self.random_series(rng, g)
            s = s + ExactSeries(g, {0: Fraction(rng.randrange(1, 9))})
            if s.coeff(0) == 0:
                continue
            assert s * s.invert() == ExactSeries.one(g)

    def test_truncation_coherence(self):
        rng = random.Random(7)
        g = grid_for(16)
        for _ in range(60):
            a = self.random_series(rng, g)
            b = self.random_series(rng, g)
            full = (a * b).truncated(8)
            direct = a.truncated(8) * b.truncated(8)
            assert full == direct

    def test_pentagonal_expansion(self):
        n = 40
        g = grid_for(n)
        prod = euler_product(g)
        pent = {0: Fraction(1)}
        k = 1
        while True:
            e1 = k * (3 * k - 1) // 2
            e2 = k * (3 * k + 1) // 2
            if e1 >= n and e2 >= n:
                break
            sign = Fraction(-1) if k % 2 else Fraction(1)
            if e1 < n:
                pent[e1] = sign
            if e2 < n:
                pent[e2] = sign
            k += 1
        assert prod == ExactSeries(g, pent)


class TestFactorHelpers:
    def test_div_one_minus_matches_invert(self):
        g = grid_for(15)
        rng = random.Random(3)
        for _ in range(25):
            c = Fraction(rng.randrange(-5, 6), rng.randrange(1, 5))
            gshift = rng.randrange(1, 4)
            s = ExactSeries(g, {k: Fraction(rng.randrange(-4, 5)) for k in range(0, 12, 2)})
            denom = ExactSeries(g, {0: Fraction(1), gshift: -c})
            assert s.div_one_minus(c, gshift) == s * denom.invert()

    def test_times_factor_negative_exponent_order(self):
        g = grid_for(10)
        s = geometric(g)
        out = s.times_factor([(0, Fraction(1)), (-2, Fraction(1, 2))])
        assert out.grid.order == 8
        assert out.coeff(-2) == Fraction(1, 2)


class TestQMono:
    def test_algebra(self):
        x = QMono.of(Fraction(2, 3), Fraction(1, 2))
        y = x.inverse()
        assert (x * y).coef == 1 and (x * y).exp == 0
        assert x.power(3).coef == Fraction(8, 27)
        assert x.power(3).exp == Fraction(3, 2)
        assert (-x).coef == Fraction(-2, 3)

    def test_to_series(self):
        g = ExponentGrid(2, 8)
        s = QMono.of(Fraction(5), Fraction(3, 2)).to_series(g)
        assert s.coeff(3) == 5
        with pytest.raises(IncompatibleGrid):
            QMono.of(1, Fraction(1, 3)).to_series(g)


class TestCSV:
    def test_round_trip(self):
        g = ExponentGrid(2, 9)
        s = ExactSeries(g, {0: Fraction(1), 3: Fraction(-2, 7), 8: Fraction(5)})
        buf = io.StringIO()
        write_coeff_csv(s, buf)
        buf.seek(0)
        assert read_coeff_csv(buf) == s

    def test_header_format(self):
        g = ExponentGrid(3, 6)
        buf = io.StringIO()
        write_coeff_csv(ExactSeries.one(g), buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "# D=3 N=6"
        assert lines[1] == "0,1,1"
        assert len(lines) == 7


def test_max_abs_diff():
    g = grid_for(10)
    a = ExactSeries(g, {0: Fraction(1), 4: Fraction(1, 3)})
    b = ExactSeries(g, {0: Fraction(1), 4: Fraction(1, 2)})
    dev, n = max_abs_diff(a, b)
    assert dev == Fraction(1, 6)
    assert n == 10
