from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.errors import ExactnessViolation
from artifact.symmetric import (
    Partition,
    Poly,
    SymPoly,
    dominated_partitions,
    elementary,
    monomial_symmetric,
    partitions,
    power_sum,
    to_mpq,
)


def test_to_mpq():
    assert to_mpq("3/5") == mpq(3, 5)
    assert to_mpq(Fraction(-2, 7)) == mpq(-2, 7)
    assert to_mpq(4) == 4
    with pytest.raises(TypeError):
        to_mpq(0.5)


def test_poly_arithmetic():
    x, y = Poly.variable(2, 0), Poly.variable(2, 1)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert p.degrees() == {2}
    assert (p - p).is_zero() and p - p == 0
    assert p.evaluate((mpq(3), mpq(1))) == 8
    assert Poly.linear(2, 0, 2, 1, -3).terms == {(1, 0): 2, (0, 1): -3}
    assert p.scale_vars([2, 1]).evaluate((1, 1)) == 3
    assert p.permute([1, 0]) == -p


def test_symmetry_detection():
    x, y = Poly.variable(2, 0), Poly.variable(2, 1)
    assert (x * y + x + y).is_symmetric()
    assert not (x + y * y).is_symmetric()


def test_div_linear_exact_and_violation():
    x, y = Poly.variable(2, 0), Poly.variable(2, 1)
    c = mpq(2, 3)
    factor = x - y.scale(c)
    p = x * x * y + y.scale(5) + Poly.constant(2, 7)
    assert (p * factor).div_linear(0, 1, c) == p
    with pytest.raises(ExactnessViolation):
        (p * factor + x).div_linear(0, 1, c)


small = st.integers(-3, 3)
monomials = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(0, 2)), small, max_size=6)


@settings(max_examples=60, deadline=None)
@given(monomials, st.fractions(min_value=-3, max_value=3), st.sampled_from([(0, 1), (2, 0), (1, 2)]))
def test_div_linear_inverts_multiplication(terms, c, pair):
    i, j = pair
    c = to_mpq(c)
    p = Poly(3, terms)
    product = p.mul_linear(i, 1, j, -c)
    assert product.div_linear(i, j, c) == p


@settings(max_examples=40, deadline=None)
@given(monomials, st.fractions(min_value=-3, max_value=3))
def test_div_linear_remainder_detected(terms, c):
    # adding a constant leaves remainder 1 for any divisor z_i - c z_j
    p = Poly(3, terms)
    bumped = p.mul_linear(0, 1, 1, -to_mpq(c)) + Poly.constant(3, 1)
    with pytest.raises(ExactnessViolation):
        bumped.div_linear(0, 1, to_mpq(c))


def test_partition_validation():
    assert Partition((3, 1, 0, 0)) == (3, 1)
    assert Partition((2, 1)).size == 3 and Partition((2, 1)).length == 2
    assert Partition((2,)).padded(3) == (2, 0, 0)
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, -1))
    with pytest.raises(ValueError):
        Partition((1, 1, 1)).padded(2)


def test_partition_counts_and_order():
    assert len(list(partitions(4))) == 5
    assert len(list(partitions(6))) == 11
    assert len(list(partitions(6, max_parts=2))) == 4
    assert list(partitions(3)) == [(3,), (2, 1), (1, 1, 1)]
    assert list(partitions(0)) == [()]


def test_dominance():
    assert Partition((3, 1)).dominates(Partition((2, 2)))
    assert not Partition((3, 1, 1, 1)).dominates(Partition((2, 2, 2)))
    assert not Partition((2, 2, 2)).dominates(Partition((3, 1, 1, 1)))
    assert not Partition((2,)).dominates(Partition((1,)))
    assert dominated_partitions(Partition((2, 2)), 3) == [(2, 2), (2, 1, 1)]


def test_monomial_symmetric_and_basis():
    m21 = monomial_symmetric((2, 1), 3)
    assert len(m21.terms) == 6 and m21.is_symmetric()
    assert monomial_symmetric((1, 1, 1), 2).is_zero()
    assert elementary(3, 2).is_zero()
    e1 = elementary(1, 3)
    p2 = power_sum(2, 3)
    assert e1 * e1 == p2 + elementary(2, 3).scale(2)


def test_sympoly_roundtrip_and_rejection():
    f = SymPoly(3, {(2, 1): mpq(1, 2), (1, 1, 1): 3})
    assert SymPoly.from_poly(f.to_poly()) == f
    assert f.coefficient((2, 1)) == mpq(1, 2) and f.coefficient((3,)) == 0
    assert f.support() == [(2, 1), (1, 1, 1)]
    assert (f - f) == 0
    x = Poly.variable(3, 0)
    with pytest.raises(ExactnessViolation):
        SymPoly.from_poly(x)
    with pytest.raises(ValueError):
        SymPoly(2, {(1, 1, 1): 1})
