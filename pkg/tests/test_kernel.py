import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localring import kernel as K
from localring import order as O
from localring.errors import (
    DimensionMismatch,
    FormMismatch,
    PrecisionShortfall,
    PresentationError,
    SingularMatrix,
    ZeroUpToPrecision,
)

std1 = O.std_form(1)
std2 = O.std_form(2)
std3 = O.std_form(3)


def poly(n, terms):
    return K.series(n, terms)


# -- exact polynomial strategy for property tests ---------------------------

def exponents(n):
    return st.tuples(*([st.integers(0, 3)] * n))


def polys(n):
    return st.dictionaries(exponents(n), st.integers(-4, 4), max_size=5).map(
        lambda d: K.series(n, d))


class TestAdd:
    def test_cancellation(self):
        x, y = K.variable(2, 0), K.variable(2, 1)
        assert K.add(K.add(x, y), -x).terms == {(0, 1): F(1)}

    def test_identity(self):
        x8 = K.monomial(3, (8, 0, 0))
        assert K.add(x8, K.zero(3)) == x8

    def test_example_generator_assembly(self):
        # y^5 + y^2 z^4 E with E a truncated exponential jet
        E = K.series(3, {(0, 0, 0): 1, (0, 0, 1): 1, (0, 0, 2): F(1, 2)},
                     prec=8, form=std3)
        f = K.add(K.monomial(3, (0, 5, 0)), K.mul(K.monomial(3, (0, 2, 4)), E))
        assert f.coefficient((0, 5, 0)) == 1
        assert f.coefficient((0, 2, 4)) == 1
        assert f.coefficient((0, 2, 6)) == F(1, 2)

    def test_min_precision(self):
        a = K.series(2, {(0, 0): 1}, prec=3, form=std2)
        b = K.series(2, {(1, 0): 1}, prec=7, form=std2)
        assert K.add(a, b).prec == 3

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            K.add(K.variable(2, 0), K.variable(3, 0))


class TestMul:
    def test_monomials(self):
        assert K.mul(K.variable(2, 0), K.variable(2, 1)).terms == {(1, 1): F(1)}

    def test_example_generator(self):
        E = K.series(3, {(0, 0, 0): 1, (0, 0, 1): 1}, prec=8, form=std3)
        f = K.mul(K.monomial(3, (2, 0, 0)),
                  K.add(K.monomial(3, (0, 3, 0)), K.mul(K.monomial(3, (0, 0, 4)), E)))
        assert f.coefficient((2, 3, 0)) == 1
        assert f.coefficient((2, 0, 4)) == 1

    def test_truncated_geometric_inverse(self):
        # jet_4(1/(1-x)) * (1-x) == 1 at precision 4
        jet = K.series(1, {(i,): 1 for i in range(5)}, prec=4, form=std1)
        p = K.mul(jet, poly(1, {(0,): 1, (1,): -1}))
        assert p.terms == {(0,): F(1)}
        assert p.prec == 4

    def test_precision_rule_is_min_combined(self):
        # a certified to 5 with order 2, b certified to 9 with order 1:
        # product certified to min(5+1, 9+2) = 6
        a = K.series(2, {(2, 0): 1}, prec=5, form=std2)
        b = K.series(2, {(0, 1): 1}, prec=9, form=std2)
        assert K.mul(a, b).prec == 6

    def test_exact_times_certified(self):
        a = K.monomial(2, (3, 0))
        b = K.series(2, {(0, 1): 1}, prec=4, form=std2)
        assert K.mul(a, b).prec == 7

    def test_exact_times_exact_is_exact(self):
        p = K.mul(poly(1, {(0,): 1, (1,): 1}), poly(1, {(50,): 1}))
        assert p.prec is K.EXACT
        assert p.coefficient((51,)) == 1

    def test_zero_absorbs(self):
        assert K.mul(K.zero(2), K.variable(2, 0)).is_exact_zero


@settings(max_examples=60)
@given(polys(2), polys(2), polys(2))
def test_ring_axioms_exact(a, b, c):
    assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
    assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
    assert K.add(a, b) == K.add(b, a)


@settings(max_examples=60)
@given(polys(3), polys(3), st.integers(1, 2))
def test_evaluation_is_ring_homomorphism(a, b, k):
    left = K.evaluate_tail_zero(K.mul(a, b), k)
    right = K.mul(K.evaluate_tail_zero(a, k), K.evaluate_tail_zero(b, k))
    assert left == right
    assert K.evaluate_tail_zero(K.add(a, b), k) == \
        K.add(K.evaluate_tail_zero(a, k), K.evaluate_tail_zero(b, k))


class TestSubstituteLinear:
    def test_identity(self):
        f = K.variable(2, 0)
        assert K.substitute_linear(f, ((1, 0), (0, 1))) == f

    def test_swap(self):
        f = K.monomial(2, (0, 2))
        assert K.substitute_linear(f, ((0, 1), (1, 0))).terms == {(2, 0): F(1)}

    def test_shear(self):
        # x^2 - y^2 under x -> x + y, y -> y
        f = poly(2, {(2, 0): 1, (0, 2): -1})
        g = K.substitute_linear(f, ((1, 1), (0, 1)))
        assert g.terms == {(2, 0): F(1), (1, 1): F(2)}

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrix):
            K.substitute_linear(K.variable(2, 0), ((1, 1), (1, 1)))

    def test_certified_keeps_precision(self):
        f = K.series(2, {(1, 0): 1}, prec=5, form=std2)
        g = K.substitute_linear(f, ((1, 1), (0, 1)))
        assert g.prec == 5

    def test_anisotropic_form_rejected(self):
        f = K.series(2, {(1, 0): 1}, prec=5, form=O.LinearForm((F(1), F(2))))
        with pytest.raises(FormMismatch):
            K.substitute_linear(f, ((1, 1), (0, 1)))


class TestEvaluateTailZero:
    def test_kills_tail_terms(self):
        # y^5 + y^2 z^4 (1 + z) with k = 2 keeps only y^5
        f = poly(3, {(0, 5, 0): 1, (0, 2, 4): 1, (0, 2, 5): 1})
        e = K.evaluate_tail_zero(f, 2)
        assert e.terms == {(0, 5): F(1)}
        assert e.n == 2

    def test_constant(self):
        c = K.monomial(3, (0, 0, 0), F(7, 2))
        assert K.evaluate_tail_zero(c, 1).terms == {(0,): F(7, 2)}

    def test_mixed(self):
        f = poly(3, {(2, 3, 0): 1, (2, 0, 4): 1})
        assert K.evaluate_tail_zero(f, 2).terms == {(2, 3): F(1)}

    def test_out_of_range(self):
        with pytest.raises(DimensionMismatch):
            K.evaluate_tail_zero(K.variable(2, 0), 2)


class TestPrecisionHousekeeping:
    def test_stored_terms_respect_bound(self):
        with pytest.raises(PrecisionShortfall):
            K.series(1, {(5,): 1}, prec=3, form=std1)

    def test_zero_up_to_prec_vs_exact_zero(self):
        up_to = K.series(1, {}, prec=4, form=std1)
        assert up_to.is_zero_up_to_prec and not up_to.is_exact_zero
        assert K.zero(1).is_exact_zero

    def test_truncate(self):
        f = poly(1, {(1,): 1, (5,): 1})
        t = K.truncate(f, std1, 3)
        assert t.terms == {(1,): F(1)} and t.prec == 3

    def test_reweight(self):
        f = K.series(3, {(0, 0, 1): 1}, prec=8, form=std3)
        w = O.weighted_split_form(3, 2, 9)
        g = K.reweight(f, w)
        assert g.prec == 8  # min weight ratio is 1
        h = K.reweight(K.series(1, {(1,): 1}, prec=8, form=std1),
                       O.LinearForm((F(9),)))
        assert h.prec == 72

    def test_embed(self):
        h = poly(1, {(2,): 3})
        g = K.embed(h, 3, (2,))
        assert g.terms == {(0, 0, 2): F(3)}

    def test_invert_unit(self):
        f = poly(1, {(0,): 1, (1,): -1})
        inv = K.invert_unit(f, std1, 5)
        assert inv.terms == {(i,): F(1) for i in range(6)}
        prod = K.mul(inv, f)
        assert prod.terms == {(0,): F(1)}
        with pytest.raises(ZeroUpToPrecision):
            K.invert_unit(K.variable(1, 0), std1, 3)


def test_serialization_roundtrip_bit_exact():
    from localring.parser import parse_expression, print_series
    rng = random.Random(7)
    names = ("x", "y", "z")
    for _ in range(40):
        terms = {tuple(rng.randint(0, 4) for _ in range(3)):
                 F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(5)}
        f = K.series(3, terms)
        back = parse_expression(print_series(f, names), names, std3, 10)
        assert back == f


def test_presentation_invariants():
    with pytest.raises(PresentationError):
        K.IdealPresentation(2, ())
    with pytest.raises(PresentationError):
        K.IdealPresentation(2, (K.zero(2),))
    with pytest.raises(DimensionMismatch):
        K.IdealPresentation(2, (K.variable(3, 0),))
