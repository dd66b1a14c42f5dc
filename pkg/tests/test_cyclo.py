import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ballq.cyclo import FIELDS, CycNum, GFElem, reduce_mod

small = st.integers(-20, 20)
rationals = st.fractions(min_value=-10, max_value=10, max_denominator=7)
cyc = st.builds(CycNum, rationals, rationals, rationals, rationals)
integral = st.builds(CycNum, small, small, small, small)

Z = CycNum.zeta(1)


def test_minimal_polynomial():
    assert Z**4 == Z**2 - 1
    assert Z**6 == CycNum(-1)
    assert Z**12 == CycNum(1)


def test_embedding_of_zeta():
    assert abs(Z.embed() - cmath.exp(1j * cmath.pi / 6)) < 1e-15


def test_conjugation_is_inverse_on_roots():
    for k in range(12):
        assert CycNum.zeta(k).conj() * CycNum.zeta(k) == CycNum(1)


def test_sqrt3():
    r = Z + Z.conj()
    assert r * r == CycNum(3)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        CycNum(0).inverse()


def test_reduction_of_denominator_3_fails_mod_3():
    with pytest.raises(ZeroDivisionError):
        reduce_mod(CycNum(Fraction(1, 3)), 3)


def test_field_sizes():
    assert len(FIELDS[2].mul) == 4
    assert len(FIELDS[3].mul) == 9


def test_zeta_images():
    # z -> a primitive cube root of unity in F_4 and to i in F_9
    w = reduce_mod(Z, 2)
    assert w * w * w == GFElem(2, 1) and w != GFElem(2, 1)
    i = reduce_mod(Z, 3)
    assert i * i == GFElem(3, -1)


@settings(max_examples=200, deadline=None)
@given(cyc, cyc, cyc)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@settings(max_examples=200, deadline=None)
@given(cyc, cyc)
def test_embedding_is_a_morphism(a, b):
    assert abs((a * b).embed() - a.embed() * b.embed()) < 1e-9 * (1 + abs(a.embed() * b.embed()))
    assert abs((a + b).embed() - (a.embed() + b.embed())) < 1e-9 * (1 + abs(a.embed()) + abs(b.embed()))


@settings(max_examples=200, deadline=None)
@given(cyc)
def test_inverse(a):
    if a:
        assert a * a.inverse() == CycNum(1)


@settings(max_examples=200, deadline=None)
@given(cyc, cyc)
def test_norm_multiplicative(a, b):
    assert (a * b).norm() == a.norm() * b.norm()


@settings(max_examples=200, deadline=None)
@given(integral, integral, st.sampled_from([2, 3]))
def test_reduction_is_a_ring_morphism(a, b, p):
    assert reduce_mod(a + b, p) == reduce_mod(a, p) + reduce_mod(b, p)
    assert reduce_mod(a * b, p) == reduce_mod(a, p) * reduce_mod(b, p)
    assert reduce_mod(a.conj(), p) == reduce_mod(a.galois(11), p)
