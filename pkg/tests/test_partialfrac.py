import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ratclass.coeffs import c_closed
from ratclass.exactmath import TruncatedSeries, series_pow, series_reciprocal
from ratclass.partialfrac import (
    FieldElem,
    alpha_vs_c_check,
    alphas_recombine_check,
    decomp_alphas,
    decomp_pm,
    decomp_quad_pole,
    pm_recombine_check,
    quad_pole_bound_holds,
    quad_pole_recombine_check,
    quad_pole_symbolic_check,
    sqrt_sum_le,
)


def laurent_at_one(numerator: TruncatedSeries, m: int, n: int) -> list[Fraction]:
    """Principal part of numerator(w) w^{-m} (2-w)^{-n} in w = 1 - z: coefficient of w^{-j}, j = 1..m."""
    order = numerator.order
    tail = series_pow(series_reciprocal(TruncatedSeries([2, -1], order)), n)
    full = numerator * tail
    return [full[m - j] for j in range(1, m + 1)]


def pm_residue_oracle(m, n):
    a = laurent_at_one(TruncatedSeries([1], m), m, n)
    b = laurent_at_one(TruncatedSeries([1], n), n, m)  # z -> -z swaps the roles
    return a, b


class TestPM:
    def test_examples(self):
        e = decomp_pm(1, 1)
        assert e.a == (Fraction(1, 2),) and e.b == (Fraction(1, 2),)
        e = decomp_pm(2, 1)
        assert e.a == (Fraction(1, 4), Fraction(1, 2)) and e.b == (Fraction(1, 4),)
        assert e.total() == 1
        e = decomp_pm(1, 3)
        assert e.a == (Fraction(1, 8),) and e.total() == 1

    def test_recombination_examples(self):
        assert pm_recombine_check(decomp_pm(1, 1), 0)
        assert pm_recombine_check(decomp_pm(2, 1), Fraction(1, 3))
        assert pm_recombine_check(decomp_pm(3, 2), Fraction(-1, 2))
        with pytest.raises(ValueError):
            pm_recombine_check(decomp_pm(1, 1), 1)

    def test_against_residue_oracle(self):
        for m in range(1, 12):
            for n in range(1, 12):
                a, b = pm_residue_oracle(m, n)
                e = decomp_pm(m, n)
                assert list(e.a) == a and list(e.b) == b

    @given(st.integers(1, 30), st.integers(1, 30), st.fractions(min_value=-5, max_value=5, max_denominator=50))
    def test_properties(self, m, n, z):
        e = decomp_pm(m, n)
        assert all(v > 0 for v in e.a + e.b) and e.total() == 1
        if z not in (1, -1):
            assert pm_recombine_check(e, z)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            decomp_pm(0, 1)


class TestAlphas:
    def test_examples(self):
        e = decomp_alphas(1)
        assert e.alphas == (Fraction(1, 2),) and e.constant == -1
        assert e.weight() == 2 and e.crude_bound_holds()
        assert decomp_alphas(2).alphas == (Fraction(-3, 4), Fraction(1, 4))
        for z in (0, Fraction(1, 2)):
            assert alphas_recombine_check(e, z)

    def test_against_residue_oracle(self):
        for k in range(1, 15):
            # z^{2k} = (1 - w)^{2k}
            num = series_pow(TruncatedSeries([1, -1], k), 2 * k)
            assert list(decomp_alphas(k).alphas) == laurent_at_one(num, k, k)

    def test_alpha_vs_c(self):
        assert decomp_alphas(2).alphas[1] == c_closed(2, 0)
        assert decomp_alphas(2).alphas[0] == -c_closed(2, 1)
        for k in (1, 2, 10, 25):
            assert alpha_vs_c_check(k)

    @given(st.integers(1, 60))
    def test_bounds(self, k):
        e = decomp_alphas(k)
        assert e.crude_bound_holds() and e.improved_bound_holds()

    def test_improved_bound_is_tighter(self):
        assert all(2 * Fraction(4, 3) ** k <= 2**k for k in range(3, 60))


class TestQuadPole:
    def test_k1_C1(self):
        e = decomp_quad_pole(1, 1, Fraction(1, 2))
        assert e.constant == 1
        assert e.complex_A()[0] == pytest.approx(0.5j)
        assert e.complex_B()[0] == pytest.approx(-0.5j)
        assert e.coefficient_mass() == pytest.approx(2)
        assert quad_pole_bound_holds(e)
        assert e.evaluate_rhs(2) == pytest.approx(4 / 5, abs=1e-12)
        assert e.evaluate_lhs(2) == pytest.approx(4 / 5, abs=1e-12)
        assert quad_pole_recombine_check(e) < 1e-12

    def test_json_shape(self):
        data = decomp_quad_pole(1, 1, Fraction(1, 2)).to_json()
        assert data["constant"] == "1"
        assert data["A"] == [{"q": "-1/2", "p": 3}]

    def test_k2_C2(self):
        assert quad_pole_recombine_check(decomp_quad_pole(2, 2, Fraction(1, 3))) <= 1e-10

    def test_k3_bound(self):
        e = decomp_quad_pole(3, Fraction(1, 2), Fraction(1, 4))
        assert e.bound() == pytest.approx(8 * 512)
        assert e.coefficient_mass() <= 8 * 512
        assert quad_pole_bound_holds(e)

    def test_symbolic(self):
        for k in range(1, 7):
            for C in (Fraction(1), Fraction(2, 3), Fraction(7, 4)):
                assert quad_pole_symbolic_check(decomp_quad_pole(k, C, Fraction(1, 2)))

    def test_symbolic_detects_sign_flip(self):
        e = decomp_quad_pole(2, Fraction(3, 2), Fraction(1, 2))
        flipped = type(e)(e.k, e.C, e.delta, e.B, e.A)
        assert not quad_pole_symbolic_check(flipped)

    def test_residue_oracle(self):
        # A_1 is the residue of z^{2k}/(1+Cz^2)^k at z_C; check k = 1 in closed form
        for C in (Fraction(1, 2), Fraction(3)):
            e = decomp_quad_pole(1, C, Fraction(1, 4))
            zc = 1j / math.sqrt(C)
            assert e.complex_A()[0] == pytest.approx(zc**2 / (C * 2 * zc), abs=1e-12)

    def test_window(self):
        with pytest.raises(ValueError):
            decomp_quad_pole(1, 3, Fraction(1, 2))
        with pytest.raises(ValueError):
            decomp_quad_pole(1, Fraction(1, 2), Fraction(1, 2))

    @given(st.integers(1, 10), st.integers(1, 99), st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)]))
    def test_bound_property(self, k, u, delta):
        C = delta + (1 / delta - delta) * Fraction(u, 100)
        e = decomp_quad_pole(k, C, delta)
        assert quad_pole_bound_holds(e) and quad_pole_bound_holds(e, delta_constant=True)
        assert e.coefficient_mass() <= e.bound() * (1 + 1e-12)


class TestExactComparisons:
    @given(
        st.fractions(min_value=0, max_value=10, max_denominator=20),
        st.fractions(min_value=0, max_value=10, max_denominator=20),
        st.fractions(min_value=Fraction(1, 20), max_value=10, max_denominator=20),
        st.fractions(min_value=0, max_value=10, max_denominator=20),
        st.fractions(min_value=Fraction(1, 20), max_value=10, max_denominator=20),
    )
    def test_sqrt_sum_le_matches_floats(self, a, b, c, d, e):
        lhs = float(a) + float(b) * math.sqrt(c)
        rhs = float(d) * math.sqrt(e)
        if abs(lhs - rhs) > 1e-9 * max(1.0, rhs):
            assert sqrt_sum_le(a, b, c, d, e) == (lhs <= rhs)

    def test_sqrt_sum_le_equality(self):
        assert sqrt_sum_le(Fraction(0), Fraction(1), Fraction(2), Fraction(1), Fraction(2))
        assert sqrt_sum_le(Fraction(1), Fraction(1), Fraction(1), Fraction(1), Fraction(4))

    def test_field_elem(self):
        x = FieldElem(Fraction(3), 3)
        C = Fraction(4)
        assert x.abs_squared(C) == Fraction(9, 64)
        assert abs(x.to_complex(C)) ** 2 == pytest.approx(9 / 64)
        assert cmath.phase(x.to_complex(C)) == pytest.approx(-math.pi / 2)
