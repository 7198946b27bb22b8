import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ratclass.quadforms import SymRationalMatrix
from ratclass.ratfun import MonicMonomial, RatClassTerm, RatCombo, random_monomial, random_W_matrix, term_eval
from ratclass.semipole import (
    FiniteMeromorphicSum,
    GenericityError,
    PoleProximityError,
    default_schedule,
    difference_combo,
    eval_sum,
    genericity_check,
    norm_two_witness,
    random_direction,
    random_meromorphic_sum,
    ray_restrict,
    recover_coefficients,
    semipole_limit,
    verify_counterexample,
)

F = Fraction
H = F(1, 2)


def single(C, P=(2,), delta=F(1, 3)):
    return RatCombo(((F(1), RatClassTerm(MonicMonomial(P), (C,), delta)),))


class TestEvalSum:
    def test_examples(self):
        assert eval_sum(FiniteMeromorphicSum(((1, 1j, 1),)), 2j) == pytest.approx(-1j)
        assert eval_sum(FiniteMeromorphicSum(()), 3 + 1j) == 0
        assert eval_sum(FiniteMeromorphicSum(((1, 1j, 1), (1, -1j, 1))), 1) == pytest.approx(1)

    def test_validation(self):
        with pytest.raises(ValueError):
            FiniteMeromorphicSum(((1, 1j, 0),))
        with pytest.raises(ValueError):
            FiniteMeromorphicSum(((1, 1j, 2), (3, 1j, 2)))
        with pytest.raises(PoleProximityError):
            eval_sum(FiniteMeromorphicSum(((1, 1j, 1),)), 1j)

    def test_coefficient_lookup(self):
        f = FiniteMeromorphicSum(((2, 1j, 2), (3, 1j, 1)))
        assert f.coefficient(1j, 2) == 2 and f.coefficient(1j, 3) == 0


class TestLimits:
    def test_pure_pole_is_exact(self):
        est = semipole_limit(lambda z: 1 / (z - 1j), 1, 1)
        assert est.value == pytest.approx(1, abs=1e-14)

    def test_mixed_orders(self):
        f = lambda z: 1 / (z - 1j) ** 2 + 1 / (z - 2j)
        assert abs(semipole_limit(f, 1, 2).value - 1) < 1e-8

    def test_no_pole(self):
        assert abs(semipole_limit(lambda z: 1 / (z - 1j), 2, 1).value) < 1e-10

    def test_schedule_validation(self):
        assert default_schedule()[0] == 2**-4 and default_schedule()[-1] == 2**-20
        with pytest.raises(ValueError):
            semipole_limit(lambda z: z, 1, 1, schedule=[0.1, 0.2, 0.05, 0.01])
        with pytest.raises(ValueError):
            semipole_limit(lambda z: z, 1, 1, schedule=[0.1, 0.01])

    def test_recover_examples(self):
        c = recover_coefficients(lambda z: 2 / (z - 1j) ** 2, 1, 2)
        assert abs(c[0].value - 2) < 1e-8 and abs(c[1].value) < 1e-6
        c = recover_coefficients(lambda z: 1 / (z - 1j) ** 2 + 3 / (z - 1j), 1, 2)
        assert abs(c[0].value - 1) < 1e-6 and abs(c[1].value - 3) < 1e-6
        c = recover_coefficients(lambda z: 1 / (z - 1j) ** 2 + 3 / (z - 1j), 0.5, 2)
        assert all(abs(e.value) < 1e-6 for e in c)

    @given(st.integers(0, 10**6))
    def test_random_sums(self, seed):
        f = random_meromorphic_sum(random.Random(seed))
        for y in {z.imag for _, z, _ in f.terms}:
            scale = max(abs(a) for a, z, _ in f.terms if z == 1j * y)
            for est, j in zip(recover_coefficients(f, y, 3), (3, 2, 1)):
                c = f.coefficient(1j * y, j)
                assert abs(est.value - c) <= 1e-5 * (abs(c) if c else scale)
                assert est.reliable


class TestRays:
    def test_restriction_examples(self):
        sl = ray_restrict(single(SymRationalMatrix.scalar(2)), (1,))
        assert sl(F(1, 2)) == term_eval(single(SymRationalMatrix.scalar(2)).terms[0][1], (F(1, 2),))
        sl = ray_restrict(single(SymRationalMatrix.identity(2), (1, 1)), (1, 1))
        assert sl.terms[0].scalars == (2,)
        sl = ray_restrict(single(SymRationalMatrix.identity(2), (1, 1)), (1, 2))
        assert sl.terms[0].scalars == (5,)
        combo = RatCombo(((F(1), RatClassTerm(MonicMonomial((2, 2)), (SymRationalMatrix.identity(2),) * 2, H)),))
        sl = ray_restrict(combo, (1, 2))
        assert sl.terms[0].numerator == 4 and sl.terms[0].scalars == (5, 5)

    def test_direction_range(self):
        with pytest.raises(ValueError):
            ray_restrict(single(SymRationalMatrix.scalar(1)), (3,))
        with pytest.raises(ValueError):
            ray_restrict(single(SymRationalMatrix.scalar(1)), (1, 1))

    @given(st.integers(0, 10**6))
    def test_restriction_commutes_with_evaluation(self, seed):
        rng = random.Random(seed)
        d, r = rng.randint(1, 3), rng.randint(1, 2)
        delta = F(1, 3)
        combo = RatCombo(tuple(
            (F(rng.randint(-5, 5), rng.randint(1, 4)), RatClassTerm(random_monomial(rng, 2 * r, d), tuple(random_W_matrix(rng, d, delta) for _ in range(r)), delta))
            for _ in range(2)
        ))
        alpha = random_direction(d, rng=rng)
        sl = ray_restrict(combo, alpha)
        for _ in range(20):
            t = F(rng.randint(-40, 40), rng.randint(1, 9))
            assert sl(t) == combo(tuple(t * a for a in alpha))

    def test_genericity_examples(self):
        one_d = RatCombo(((F(1), RatClassTerm(MonicMonomial((2,)), (SymRationalMatrix.scalar(1),), H)), (F(-1), RatClassTerm(MonicMonomial((2,)), (SymRationalMatrix.scalar(F(3, 2)),), H))))
        assert genericity_check((1,), one_d)
        C, M = SymRationalMatrix.diag(1, 2), SymRationalMatrix.diag(2, 1)
        pair = RatCombo(((F(1), RatClassTerm(MonicMonomial((1, 1)), (C,), F(1, 3))), (F(1), RatClassTerm(MonicMonomial((1, 1)), (M,), F(1, 3)))))
        assert not genericity_check((1, 1), pair)
        assert genericity_check((1, 2), pair)
        passes = sum(genericity_check(random_direction(2, seed=s), pair) for s in range(100))
        assert passes >= 95

    def test_random_direction(self):
        a = random_direction(1, seed=4)
        assert 1 <= a[0] <= 2
        assert random_direction(3, seed=9) == random_direction(3, seed=9)


class TestCounterexample:
    def test_identity(self):
        assert verify_counterexample()
        x = F(1)
        assert F(2, 8) - F(1, 6) == F(1, 12) == 1 / ((1 + 2 * x) * (1 + 3 * x))


class TestWitness:
    def test_one_dimensional(self):
        w = norm_two_witness(MonicMonomial((2,)), SymRationalMatrix.scalar(1), SymRationalMatrix.scalar(2), 1, F(1, 3))
        assert w.opposite_signs
        assert w.normalized_C.real == pytest.approx(1, abs=1e-8)
        assert w.normalized_D.real == pytest.approx(-1, abs=1e-8)
        # (a t)^2 / (1 + (a t)^2) has residue t0/2 at t0 = i/a
        a = float(w.alpha[0])
        assert w.y_C == pytest.approx(1 / a)
        assert w.c_at_C.value == pytest.approx(0.5j / a, abs=1e-8)

    def test_two_dimensional(self):
        w = norm_two_witness(MonicMonomial((1, 1)), SymRationalMatrix.identity(2), SymRationalMatrix.diag(2, 3), 1, F(1, 4))
        assert w.opposite_signs and w.c_at_C.reliable and w.c_at_D.reliable

    def test_preconditions(self):
        with pytest.raises(ValueError):
            norm_two_witness(MonicMonomial((2,)), SymRationalMatrix.scalar(1), SymRationalMatrix.scalar(1), 1, H)
        with pytest.raises(ValueError):
            norm_two_witness(MonicMonomial((4,)), SymRationalMatrix.scalar(1), SymRationalMatrix.scalar(F(3, 2)), 1, H)
        with pytest.raises(ValueError):
            norm_two_witness(MonicMonomial((2,)), SymRationalMatrix.scalar(1), SymRationalMatrix.scalar(3), 1, H)

    def test_genericity_exhaustion(self):
        # with no draws allowed the search is exhausted immediately
        with pytest.raises(GenericityError):
            norm_two_witness(MonicMonomial((2,)), SymRationalMatrix.scalar(1), SymRationalMatrix.scalar(F(3, 2)), 1, H, max_draws=0)

    def test_difference_combo(self):
        combo = difference_combo(MonicMonomial((2,)), SymRationalMatrix.scalar(1), SymRationalMatrix.scalar(2), 1, F(1, 3))
        assert combo((1,)) == F(1, 2) - F(1, 3)

    def test_json(self):
        w = norm_two_witness(MonicMonomial((2,)), SymRationalMatrix.scalar(1), SymRationalMatrix.scalar(2), 1, F(1, 3))
        data = w.to_json()
        assert data["opposite_signs"] is True
        assert all(isinstance(a, str) for a in data["alpha"])
