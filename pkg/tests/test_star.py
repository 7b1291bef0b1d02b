import random
from fractions import Fraction

import pytest

from starmetric import (
    BadConstantTerm,
    CouplingSeries,
    ExpQuadForm,
    GaussianRational,
    MixedExponent,
    NonTerminating,
    NonzeroConstantTerm,
    PhasePoly,
    dagger,
    eqf_is_positive_hermitian,
    is_hermitian,
    star,
    star_commutator,
    star_exp,
    star_log,
    star_poly_expquad,
    star_series,
)
from starmetric.scalars import I, ParamPoly
from starmetric.star import dagger_series

from _helpers import random_poly

x = PhasePoly.x()
p = PhasePoly.p()
hbar = PhasePoly.hbar()
ih = PhasePoly.monomial(I, 0, 0, 1)


def gr(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


class TestStar:
    def test_canonical_pair(self):
        assert star(x, p) == x * p + ih
        assert star(p, x) == x * p
        assert star_commutator(x, p) == ih

    def test_pp_xx_commutator(self):
        # oracle: the operator identity [p^2, x^2] = -2 i hbar (xp + px),
        # whose symmetrized symbol is -4 i hbar xp, plus the second-order
        # star term +2 hbar^2 from d2x d2p
        expected = PhasePoly.monomial(gr(0, -4), 1, 1, 1) + PhasePoly.monomial(2, 0, 0, 2)
        assert star_commutator(p**2, x**2) == expected

    def test_self_commutator_vanishes(self):
        rng = random.Random(1)
        for _ in range(10):
            a = random_poly(rng)
            assert star_commutator(a, a).is_zero

    def test_associativity_random(self):
        rng = random.Random(2)
        for _ in range(60):
            a, b, c = (random_poly(rng) for _ in range(3))
            assert star(star(a, b), c) == star(a, star(b, c))

    def test_pointwise_reduction(self):
        rng = random.Random(3)
        for _ in range(20):
            b = random_poly(rng)
            p_only = PhasePoly.monomial(gr(2, 1), 0, -2, 1) + PhasePoly.p(3)
            x_only = PhasePoly.monomial(gr(1, -1), 2, 0, 0) + PhasePoly.one()
            assert star(p_only, b) == p_only * b
            assert star(b, x_only) == b * x_only

    def test_jacobi(self):
        rng = random.Random(4)
        for _ in range(15):
            a, b, c = (random_poly(rng, max_terms=3, max_x=2) for _ in range(3))
            total = (
                star_commutator(star_commutator(a, b), c)
                + star_commutator(star_commutator(b, c), a)
                + star_commutator(star_commutator(c, a), b)
            )
            assert total.is_zero


class TestDagger:
    def test_quadratic_cross_term(self):
        (c,) = ParamPoly.generators("c")
        icpx = PhasePoly.monomial(c, 1, 1, 0).scaled(I)
        expected = PhasePoly.monomial(c, 1, 1, 0).scaled(-I) + PhasePoly.monomial(c, 0, 0, 1)
        assert dagger(icpx) == expected

    def test_real_momentum_functions_fixed(self):
        assert dagger(p**2) == p**2

    def test_cubic_term_conjugates(self):
        (g,) = ParamPoly.generators("g")
        igx3 = PhasePoly.monomial(g, 3, 0, 0).scaled(I)
        assert dagger(igx3) == -igx3

    def test_involution_and_antihomomorphism(self):
        rng = random.Random(5)
        for _ in range(40):
            a, b = random_poly(rng), random_poly(rng)
            assert dagger(dagger(a)) == a
            assert dagger(star(a, b)) == star(dagger(b), dagger(a))

    def test_a_star_adagger_hermitian(self):
        rng = random.Random(6)
        for _ in range(20):
            a = random_poly(rng)
            assert is_hermitian(star(a, dagger(a)))

    def test_hermitian_iff_selfadjoint(self):
        rng = random.Random(7)
        for _ in range(30):
            a = random_poly(rng)
            assert is_hermitian(a) == (dagger(a) == a)


class TestHermiticity:
    def test_examples(self):
        assert is_hermitian(p**2 + x**2)
        assert not is_hermitian(PhasePoly.monomial(I, 3, 0, 0))
        # symmetrized xp: px + i hbar / 2
        assert is_hermitian(x * p + PhasePoly.monomial(gr(0, Fraction(1, 2)), 0, 0, 1))


class TestSeriesStar:
    def test_lifted_canonical_pair(self):
        zero = PhasePoly.zero()
        gx = CouplingSeries("g", [zero, x, zero])
        gp = CouplingSeries("g", [zero, p, zero])
        assert star_series(gx, gp) == CouplingSeries("g", [zero, zero, x * p + ih])

    def test_one_is_identity(self):
        s = CouplingSeries("g", [PhasePoly.one(), x * p, p**2])
        assert star_series(CouplingSeries.one("g", 2), s) == s

    def test_first_order_inverse(self):
        a1 = x * p + x**2
        plus = CouplingSeries("g", [PhasePoly.one(), a1])
        minus = CouplingSeries("g", [PhasePoly.one(), -a1])
        assert star_series(plus, minus) == CouplingSeries.one("g", 1)


class TestStarLogExp:
    def test_log_of_one(self):
        assert star_log(CouplingSeries.one("g", 3)).is_zero

    def test_exp_of_zero(self):
        zero = CouplingSeries.constant("g", PhasePoly.zero(), 3)
        assert star_exp(zero) == CouplingSeries.one("g", 3)

    def test_exp_of_x_only(self):
        zero = PhasePoly.zero()
        s = CouplingSeries("g", [zero, x, zero])
        expected = CouplingSeries("g", [PhasePoly.one(), x, (x * x).scaled(Fraction(1, 2))])
        assert star_exp(s) == expected

    def test_round_trip_random(self):
        rng = random.Random(8)
        for _ in range(10):
            coeffs = [PhasePoly.one()] + [
                random_poly(rng, max_terms=2, max_x=2) for _ in range(4)
            ]
            s = CouplingSeries("g", coeffs)
            assert star_exp(star_log(s)) == s

    def test_third_order_log_formula(self):
        # log(1 + c a1 + c^2 a2 + c^3 a3) expanded through the star product
        rng = random.Random(9)
        half, third = Fraction(1, 2), Fraction(1, 3)
        for _ in range(5):
            a1, a2, a3 = (random_poly(rng, max_terms=2, max_x=2) for _ in range(3))
            s = CouplingSeries("c", [PhasePoly.one(), a1, a2, a3])
            log = star_log(s)
            assert log.coeffs[1] == a1
            assert log.coeffs[2] == a2 - star(a1, a1).scaled(half)
            expected3 = (
                a3
                + star(a1, star(a1, a1)).scaled(third)
                - (star(a1, a2) + star(a2, a1)).scaled(half)
            )
            assert log.coeffs[3] == expected3

    def test_constant_term_guards(self):
        with pytest.raises(BadConstantTerm):
            star_log(CouplingSeries("g", [x, x]))
        with pytest.raises(NonzeroConstantTerm):
            star_exp(CouplingSeries.one("g", 1))


class TestExpQuadForm:
    def test_left_with_x_independent_operand(self):
        e = ExpQuadForm.pure_exponent(PhasePoly.monomial(-2, 0, 1, 0))
        out = star_poly_expquad(p**2, e, "left")
        assert out == ExpQuadForm(p**2, e.exponent)

    def test_left_pulls_down_exponent_derivative(self):
        (r,) = ParamPoly.generators("r")
        e = ExpQuadForm.pure_exponent(PhasePoly.monomial(r, 0, 2, 0))
        out = star_poly_expquad(x, e, "left")
        expected = x + PhasePoly.monomial(r, 0, 1, 1).scaled(2 * I)
        assert out.prefactor == expected

    def test_right_with_exponent_x_derivative(self):
        (t,) = ParamPoly.generators("t")
        e = ExpQuadForm.pure_exponent(PhasePoly.monomial(t, 2, 0, 0))
        out = star_poly_expquad(p, e, "right")
        expected = p + PhasePoly.monomial(t, 1, 0, 1).scaled(2 * I)
        assert out.prefactor == expected

    def test_right_rejects_laurent_p(self):
        e = ExpQuadForm.pure_exponent(PhasePoly.monomial(-2, 0, 1, 0))
        with pytest.raises(NonTerminating):
            star_poly_expquad(PhasePoly.p(-1), e, "right")

    def test_exponent_degree_guard(self):
        with pytest.raises(ValueError):
            ExpQuadForm.pure_exponent(PhasePoly.x(3))

    def test_positive_hermitian_shortcut(self):
        assert eqf_is_positive_hermitian(
            ExpQuadForm.pure_exponent(PhasePoly.monomial(-2, 0, 1, 0))
        )
        assert eqf_is_positive_hermitian(
            ExpQuadForm.pure_exponent(PhasePoly.monomial(Fraction(3, 2), 0, 2, -1))
        )
        assert not eqf_is_positive_hermitian(
            ExpQuadForm.pure_exponent(PhasePoly.monomial(I, 0, 1, 0))
        )
        with pytest.raises(MixedExponent):
            eqf_is_positive_hermitian(
                ExpQuadForm.pure_exponent(PhasePoly.monomial(1, 1, 1, 0))
            )

    def test_json_round_trip(self):
        e = ExpQuadForm(p, PhasePoly.monomial(-2, 0, 1, 0))
        assert ExpQuadForm.from_json(e.to_json()) == e


def test_dagger_series_termwise():
    s = CouplingSeries("g", [PhasePoly.one(), PhasePoly.monomial(I, 3, 0, 0)])
    d = dagger_series(s)
    assert d.coeffs[1] == PhasePoly.monomial(-I, 3, 0, 0)
